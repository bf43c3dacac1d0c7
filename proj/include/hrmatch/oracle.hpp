#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "maxflow.hpp"
#include "metrics.hpp"

namespace hrmatch::oracle {

struct TooLarge : Error {
    using Error::Error;
};

enum class Domain { AllMatchings, FeasibleMatchings, MaxCardinalityMatchings };

// Exhaustive ground truth; everything here is exponential on purpose and
// guarded by a resident cap. Enumeration is depth-first over residents with
// per-hospital remaining-room counters, so the output order is fixed and
// witnesses are reproducible.
inline std::vector<Matching> enumerate_matchings(const Instance& g, Domain domain,
                                                 int cap = 8) {
    const int R = g.n_residents(), H = g.n_hospitals();
    if (R > cap)
        throw TooLarge("enumeration capped at " + std::to_string(cap) + " residents");
    std::vector<Matching> out;
    Matching m(R, -1);
    std::vector<int32_t> room(g.uq.begin(), g.uq.end());
    auto dfs = [&](auto&& self, int r) -> void {
        if (r == R) {
            out.push_back(m);
            return;
        }
        self(self, r + 1);  // r stays unmatched
        for (int h : g.rpref[r]) {
            if (room[h] == 0) continue;
            --room[h];
            m[r] = h;
            self(self, r + 1);
            m[r] = -1;
            ++room[h];
        }
    };
    dfs(dfs, 0);
    if (domain == Domain::FeasibleMatchings) {
        std::vector<Matching> kept;
        for (const auto& c : out)
            if (is_feasible(g, c)) kept.push_back(c);
        out = kept;
    } else if (domain == Domain::MaxCardinalityMatchings) {
        int64_t best = 0;
        for (const auto& c : out) best = std::max<int64_t>(best, matching_size(c));
        std::vector<Matching> kept;
        for (const auto& c : out)
            if (matching_size(c) == best) kept.push_back(c);
        out = kept;
    }
    return out;
}

// Hospital h's net vote for challenger mb over incumbent ma, with the
// pairing between the residents h gains and the residents h loses chosen to
// favor the challenger as much as possible. Assignments compare as multisets
// padded to the quota with "no resident" slots, so the shared empty
// positions cancel along with the shared residents: only the shorter
// difference side is padded, to the longer side's length, and an empty slot
// loses to anyone. Padding any further would be wrong, not merely lax: it
// lets a forced one-for-one exchange masquerade as an unrelated gain plus
// loss, and under that reading some instances have no popular matching at
// all. Certifying against the maximum over pairings makes a popularity
// verdict hold for every pairing convention.
inline int hospital_vote_adversarial(const Instance& g, int32_t h, const Matching& ma,
                                     const Matching& mb) {
    Ranks rk(g);
    std::vector<int32_t> olda, newb;
    for (int r = 0; r < g.n_residents(); ++r) {
        bool ina = ma[r] == h, inb = mb[r] == h;
        if (ina && inb) continue;
        if (ina)
            olda.push_back(r);
        else if (inb)
            newb.push_back(r);
    }
    int slots = static_cast<int>(std::max(olda.size(), newb.size()));
    olda.resize(slots, -1);  // -1 = empty slot
    newb.resize(slots, -1);
    std::sort(olda.begin(), olda.end());
    int best = -2 * slots;
    do {
        int s = 0;
        for (int i = 0; i < slots; ++i) {
            int a = olda[i], b = newb[i];
            if (a == -1 && b == -1) continue;
            if (a == -1)
                ++s;
            else if (b == -1)
                --s;
            else
                s += rk.hr(h, b) < rk.hr(h, a) ? 1 : -1;
        }
        best = std::max(best, s);
    } while (std::next_permutation(olda.begin(), olda.end()));
    return best;
}

// Net votes for the challenger mb against ma: residents vote by their own
// lists (unmatched is worst), hospitals vote adversarially in the
// challenger's favor. Positive means mb defeats ma.
inline int64_t popularity_margin(const Instance& g, const Matching& ma,
                                 const Matching& mb) {
    int64_t margin = metrics::resident_vote_margin(g, mb, ma);
    for (int h = 0; h < g.n_hospitals(); ++h)
        margin += hospital_vote_adversarial(g, h, ma, mb);
    return margin;
}

struct PopularityCertificate {
    bool popular = false;
    Domain domain = Domain::AllMatchings;
    std::optional<Matching> witness;  // first challenger with positive margin
    int64_t witness_margin = 0;
};

inline PopularityCertificate is_popular(const Instance& g, const Matching& m,
                                        Domain domain, int cap = 8) {
    PopularityCertificate cert;
    cert.domain = domain;
    for (const auto& c : enumerate_matchings(g, domain, cap)) {
        int64_t margin = popularity_margin(g, m, c);
        if (margin > 0) {
            cert.popular = false;
            cert.witness = c;
            cert.witness_margin = margin;
            return cert;
        }
    }
    cert.popular = true;
    return cert;
}

inline int64_t min_bp(const Instance& g, int cap = 8) {
    auto feas = enumerate_matchings(g, Domain::FeasibleMatchings, cap);
    if (feas.empty()) throw InfeasibleInstance("no feasible matching exists");
    int64_t best = -1;
    for (const auto& m : feas) {
        int64_t v = static_cast<int64_t>(metrics::blocking_pairs(g, m).size());
        if (best < 0 || v < best) best = v;
    }
    return best;
}

inline int64_t min_br(const Instance& g, int cap = 8) {
    auto feas = enumerate_matchings(g, Domain::FeasibleMatchings, cap);
    if (feas.empty()) throw InfeasibleInstance("no feasible matching exists");
    int64_t best = -1;
    for (const auto& m : feas) {
        int64_t v = static_cast<int64_t>(metrics::blocking_residents(g, m).size());
        if (best < 0 || v < best) best = v;
    }
    return best;
}

inline int64_t max_matching_size(const Instance& g) {
    const int R = g.n_residents(), H = g.n_hospitals();
    MaxFlow mf(R + H + 2);
    int src = R + H, snk = R + H + 1;
    for (int r = 0; r < R; ++r) mf.add_edge(src, r, 1);
    for (int h = 0; h < H; ++h) mf.add_edge(R + h, snk, g.uq[h]);
    for (int r = 0; r < R; ++r)
        for (int h : g.rpref[r]) mf.add_edge(r, R + h, 1);
    return mf.run(src, snk);
}

// Justified envy: r wants h more than its own assignment while h holds
// somebody it ranks below r.
inline bool has_justified_envy(const Instance& g, const Matching& m) {
    const int R = g.n_residents(), H = g.n_hospitals();
    Ranks rk(g);
    std::vector<int32_t> worst(H, -1);
    for (int r = 0; r < R; ++r)
        if (m[r] != -1) worst[m[r]] = std::max(worst[m[r]], rk.hr(m[r], r));
    for (int r = 0; r < R; ++r)
        for (int h : g.rpref[r]) {
            if (m[r] == h) continue;
            if (m[r] != -1 && rk.rr(r, m[r]) < rk.rr(r, h)) continue;
            if (worst[h] > rk.hr(h, r)) return true;
        }
    return false;
}

inline bool is_envy_free(const Instance& g, const Matching& m) {
    return !has_justified_envy(g, m);
}

// Maximal envy-free: feasible, envy-free, and no edge can be added (resident
// free, hospital below quota) without creating justified envy.
inline bool is_maximal_envy_free(const Instance& g, const Matching& m) {
    if (!is_feasible(g, m) || has_justified_envy(g, m)) return false;
    std::vector<int32_t> load = hospital_loads(g, m);
    Matching trial = m;
    for (int r = 0; r < g.n_residents(); ++r) {
        if (m[r] != -1) continue;
        for (int h : g.rpref[r]) {
            if (load[h] >= g.uq[h]) continue;
            trial[r] = h;
            bool envy = has_justified_envy(g, trial);
            trial[r] = -1;
            if (!envy) return false;
        }
    }
    return true;
}

}  // namespace hrmatch::oracle
