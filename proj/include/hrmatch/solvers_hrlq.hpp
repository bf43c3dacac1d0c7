#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "core.hpp"
#include "generators.hpp"

namespace hrmatch::hrlq {

struct TraceEvent {
    enum class Kind : uint8_t { Propose, Accept, Reject, Bump, LevelUp };
    Kind kind;
    int32_t hospital;  // acting hospital
    int32_t resident;  // proposee / displaced-from resident; -1 for LevelUp
    int32_t detail;    // Accept: level granted; Bump: displacing hospital;
                       // LevelUp: new level; otherwise -1
};

struct Result {
    Matching matching;
    uint64_t proposals = 0;
    std::vector<TraceEvent> trace;
};

// Hospital-proposing deferred acceptance with per-hospital levels. Every
// hospital starts at level 0 and proposes down its list while it has free
// upper-quota room. A hospital that exhausts its list while still below its
// lower quota raises its level by one and restarts its list; at level >= 1
// it only proposes while below the lower quota. A resident accepts a
// proposal iff unmatched, or the proposer's level exceeds the level at which
// the current partner was granted, or levels tie and the resident ranks the
// proposer higher. The result matches every lower quota and is popular among
// feasible matchings. Raising the level only while deficient is essential:
// an unconditional raise lets an over-quota hospital steal residents it no
// longer needs and can starve another hospital's lower quota.
inline Result solve(const Instance& g, bool want_trace = false) {
    if (!gen::feasibility_exists(g))
        throw InfeasibleInstance("lower quotas cannot be satisfied");
    const int R = g.n_residents(), H = g.n_hospitals();
    Ranks rk(g);
    Result out;
    out.matching.assign(R, -1);
    Matching& match = out.matching;
    std::vector<int32_t> rlevel(R, 0), hlevel(H, 0), cnt(H, 0), cur(H, 0);
    std::deque<int32_t> q;
    std::vector<int8_t> inq(H, 0);
    for (int h = 0; h < H; ++h)
        if (g.uq[h] > 0 && !g.hpref[h].empty()) {
            q.push_back(h);
            inq[h] = 1;
        }
    auto emit = [&](TraceEvent::Kind k, int32_t h, int32_t r, int32_t d) {
        if (want_trace) out.trace.push_back({k, h, r, d});
    };

    while (!q.empty()) {
        int h = q.front();
        q.pop_front();
        inq[h] = 0;
        if (cur[h] >= static_cast<int>(g.hpref[h].size())) {
            if (g.lq[h] > 0 && cnt[h] < g.lq[h] && hlevel[h] < R) {
                ++hlevel[h];
                cur[h] = 0;
                emit(TraceEvent::Kind::LevelUp, h, -1, hlevel[h]);
                q.push_back(h);
                inq[h] = 1;
            }
            continue;
        }
        int r = g.hpref[h][cur[h]++];
        ++out.proposals;
        emit(TraceEvent::Kind::Propose, h, r, -1);
        if (match[r] != -1) {
            int h2 = match[r];
            bool pref = rlevel[r] < hlevel[h] ||
                        (rlevel[r] == hlevel[h] && rk.rr(r, h) < rk.rr(r, h2));
            if (!pref) {
                emit(TraceEvent::Kind::Reject, h, r, -1);
                q.push_back(h);
                inq[h] = 1;
                continue;
            }
            --cnt[h2];
            emit(TraceEvent::Kind::Bump, h2, r, h);
            if (!inq[h2]) {
                q.push_back(h2);
                inq[h2] = 1;
            }
        }
        match[r] = h;
        rlevel[r] = hlevel[h];
        ++cnt[h];
        emit(TraceEvent::Kind::Accept, h, r, hlevel[h]);
        // At level 0 a hospital keeps going while below its upper quota; at
        // higher levels only while still below its lower quota. A satisfied
        // hospital drops out; the level-up branch above revives it if a later
        // bump leaves it deficient with its list exhausted.
        bool wants_more = hlevel[h] == 0 ? cnt[h] < g.uq[h]
                                         : (g.lq[h] > 0 && cnt[h] < g.lq[h]);
        if (wants_more && !inq[h]) {
            q.push_back(h);
            inq[h] = 1;
        }
    }
    for (int h = 0; h < H; ++h)
        if (cnt[h] < g.lq[h])
            throw InfeasibleInstance("terminated below lower quota of hospital " +
                                     std::to_string(h + 1));
    return out;
}

inline Matching hrlq_popular(const Instance& g) { return solve(g).matching; }

inline Result trace(const Instance& g) { return solve(g, true); }

// Re-derives the matching by applying a recorded trace, validating each
// event against the evolving state. Used to check that traces are faithful.
inline Matching replay(const Instance& g, const std::vector<TraceEvent>& events) {
    const int R = g.n_residents(), H = g.n_hospitals();
    Matching match(R, -1);
    std::vector<int32_t> hlevel(H, 0);
    for (const auto& e : events) {
        switch (e.kind) {
            case TraceEvent::Kind::Propose:
            case TraceEvent::Kind::Reject:
                break;
            case TraceEvent::Kind::Bump:
                if (e.resident < 0 || e.resident >= R || match[e.resident] != e.hospital)
                    throw Error("trace replay: bump of a resident not held");
                match[e.resident] = -1;
                break;
            case TraceEvent::Kind::Accept:
                if (e.resident < 0 || e.resident >= R || match[e.resident] != -1)
                    throw Error("trace replay: accept over an existing match");
                if (e.detail != hlevel[e.hospital])
                    throw Error("trace replay: accept level disagrees");
                match[e.resident] = e.hospital;
                break;
            case TraceEvent::Kind::LevelUp:
                if (e.hospital < 0 || e.hospital >= H || e.detail != hlevel[e.hospital] + 1)
                    throw Error("trace replay: non-sequential level raise");
                hlevel[e.hospital] = e.detail;
                break;
        }
    }
    return match;
}

}  // namespace hrmatch::hrlq
