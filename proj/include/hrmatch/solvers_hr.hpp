#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "core.hpp"

namespace hrmatch::hr {

// Resident-proposing Gale-Shapley, generalized with proposal levels: running
// with level_cap = L simulates the instance where every resident is cloned
// into L copies of decreasing priority. A resident starts at level 0; when
// rejected past the end of its list at level l < L-1 it re-enters at level
// l+1 with its cursor reset. A hospital prefers the strictly higher level and
// breaks equal levels by its preference list. level_cap = 1 is plain GS;
// level_cap = 2 yields a maximum-cardinality popular matching; level_cap =
// |R| yields a matching popular among maximum-cardinality matchings.
inline Matching level_propose(const Instance& g, int level_cap) {
    if (level_cap < 1) throw InvalidParams("level_cap must be >= 1");
    const int R = g.n_residents(), H = g.n_hospitals();
    Ranks rk(g);
    Matching match(R, -1);
    std::vector<int32_t> lev(R, 0), cur(R, 0);
    std::vector<std::vector<int32_t>> asg(H);
    std::deque<int32_t> q;
    for (int r = 0; r < R; ++r)
        if (!g.rpref[r].empty()) q.push_back(r);

    while (!q.empty()) {
        int r = q.front();
        q.pop_front();
        if (cur[r] >= static_cast<int>(g.rpref[r].size())) {
            if (lev[r] + 1 < level_cap) {
                ++lev[r];
                cur[r] = 0;
                q.push_back(r);
            }
            continue;
        }
        int h = g.rpref[r][cur[r]++];
        if (static_cast<int>(asg[h].size()) < g.uq[h]) {
            asg[h].push_back(r);
            match[r] = h;
            continue;
        }
        if (g.uq[h] == 0) {
            q.push_back(r);
            continue;
        }
        // Weakest current assignee: lowest level, then worst rank in h's list.
        int wi = 0;
        for (int i = 1; i < static_cast<int>(asg[h].size()); ++i) {
            int a = asg[h][i], b = asg[h][wi];
            if (lev[a] < lev[b] || (lev[a] == lev[b] && rk.hr(h, a) > rk.hr(h, b))) wi = i;
        }
        int w = asg[h][wi];
        if (lev[r] > lev[w] || (lev[r] == lev[w] && rk.hr(h, r) < rk.hr(h, w))) {
            asg[h][wi] = r;
            match[w] = -1;
            match[r] = h;
            q.push_back(w);
        } else {
            q.push_back(r);
        }
    }
    return match;
}

inline Matching gs_resident(const Instance& g) { return level_propose(g, 1); }

inline Matching max_card_popular(const Instance& g) { return level_propose(g, 2); }

inline Matching popular_among_maxcard(const Instance& g, int level_cap = -1) {
    if (level_cap < 0) level_cap = std::max(1, g.n_residents());
    return level_propose(g, level_cap);
}

// Hospital-proposing Gale-Shapley. Lower quotas are ignored: this is the
// stable matching of the quota-free instance. FIFO queue over hospital
// indices; output is the hospital-optimal stable matching either way.
inline Matching gs_hospital(const Instance& g) {
    const int R = g.n_residents(), H = g.n_hospitals();
    Ranks rk(g);
    Matching match(R, -1);
    std::vector<int32_t> cnt(H, 0), cur(H, 0);
    std::deque<int32_t> q;
    std::vector<int8_t> inq(H, 0);
    for (int h = 0; h < H; ++h)
        if (g.uq[h] > 0 && !g.hpref[h].empty()) {
            q.push_back(h);
            inq[h] = 1;
        }
    while (!q.empty()) {
        int h = q.front();
        q.pop_front();
        inq[h] = 0;
        if (cur[h] >= static_cast<int>(g.hpref[h].size())) continue;
        int r = g.hpref[h][cur[h]++];
        bool accept = false;
        if (match[r] == -1) {
            accept = true;
        } else {
            int h2 = match[r];
            if (rk.rr(r, h) < rk.rr(r, h2)) {
                accept = true;
                --cnt[h2];
                if (!inq[h2]) {
                    q.push_back(h2);
                    inq[h2] = 1;
                }
            }
        }
        if (accept) {
            match[r] = h;
            ++cnt[h];
        }
        if (cnt[h] < g.uq[h] && cur[h] < static_cast<int>(g.hpref[h].size()) && !inq[h]) {
            q.push_back(h);
            inq[h] = 1;
        }
    }
    return match;
}

}  // namespace hrmatch::hr
