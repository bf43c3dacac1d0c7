#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace hrmatch::metrics {

// Exact rational. Report percentages are computed in integers end to end and
// only rendered at the edge, so repeated runs and CSV diffs are bit-stable.
// Magnitudes stay tiny (counts below 1e7 scaled by 100); the __int128
// intermediates make the cross products safe without normalizing eagerly.
struct Rat {
    long long num = 0;
    long long den = 1;  // > 0

    static Rat make(long long n, long long d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        return Rat{n, d};
    }
    Rat operator+(const Rat& o) const {
        return make(num * o.den + o.num * den, den * o.den);
    }
    Rat operator-(const Rat& o) const {
        return make(num * o.den - o.num * den, den * o.den);
    }
    Rat operator*(const Rat& o) const { return make(num * o.num, den * o.den); }
    bool operator<(const Rat& o) const {
        return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
    }
    bool operator<=(const Rat& o) const { return !(o < *this); }
    bool operator==(const Rat& o) const {
        return static_cast<__int128>(num) * o.den == static_cast<__int128>(o.num) * den;
    }

    // Two decimals, round half away from zero (table convention).
    std::string render2() const {
        __int128 scaled = static_cast<__int128>(num) * 200;
        long long q = static_cast<long long>(
            (scaled + (scaled < 0 ? -den : den)) / (2 * static_cast<__int128>(den)));
        bool neg = q < 0;
        if (neg) q = -q;
        std::string s = std::to_string(q / 100);
        std::string f = std::to_string(q % 100);
        if (f.size() < 2) f.insert(f.begin(), '0');
        return (neg ? "-" : "") + s + "." + f;
    }
};

inline std::string render2_or_na(const std::optional<Rat>& v) {
    return v ? v->render2() : std::string("NA");
}

struct MetricsReport {
    int64_t size = 0;
    int64_t bpc = 0;
    int64_t br = 0;
    int64_t r1 = 0;
    int64_t deficiency = 0;
    // Present only in paired reports; empty = undefined denominator (NA).
    std::optional<Rat> delta_size_pct, delta_r1_pct, delta_votes_pct, bp_pct;
};

// All pairs (r,h) of the instance, outside M, where both sides would rather
// take each other: r is unmatched or ranks h above its partner, and h has
// free room or ranks r above one of its assignees. Sorted by (r,h).
inline std::vector<std::pair<int32_t, int32_t>> blocking_pairs(const Instance& g,
                                                               const Matching& m) {
    const int R = g.n_residents(), H = g.n_hospitals();
    Ranks rk(g);
    std::vector<int32_t> load = hospital_loads(g, m);
    // Worst (largest) position in h's list among h's assignees; -1 if none.
    std::vector<int32_t> worst(H, -1);
    for (int r = 0; r < R; ++r)
        if (m[r] != -1) worst[m[r]] = std::max(worst[m[r]], rk.hr(m[r], r));
    std::vector<std::pair<int32_t, int32_t>> out;
    for (int r = 0; r < R; ++r) {
        for (int h : g.rpref[r]) {
            if (m[r] == h) continue;
            if (m[r] != -1 && rk.rr(r, m[r]) < rk.rr(r, h)) continue;
            if (load[h] < g.uq[h] || rk.hr(h, r) < worst[h]) out.push_back({r, h});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int32_t> blocking_residents(const Instance& g, const Matching& m) {
    std::vector<int32_t> out;
    for (const auto& [r, h] : blocking_pairs(g, m))
        if (out.empty() || out.back() != r) out.push_back(r);
    return out;
}

inline int64_t deficiency(const Instance& g, const Matching& m) {
    std::vector<int32_t> load = hospital_loads(g, m);
    int64_t d = 0;
    for (int h = 0; h < g.n_hospitals(); ++h)
        if (load[h] < g.lq[h]) d += g.lq[h] - load[h];
    return d;
}

inline int64_t rank1_count(const Instance& g, const Matching& m) {
    int64_t c = 0;
    for (int r = 0; r < g.n_residents(); ++r)
        if (m[r] != -1 && !g.rpref[r].empty() && g.rpref[r][0] == m[r]) ++c;
    return c;
}

// (#residents strictly preferring ma) - (#preferring mb); unmatched is worst.
inline int64_t resident_vote_margin(const Instance& g, const Matching& ma,
                                    const Matching& mb) {
    Ranks rk(g);
    int64_t margin = 0;
    const int inf = 1 << 30;
    for (int r = 0; r < g.n_residents(); ++r) {
        int a = ma[r] == -1 ? inf : rk.rr(r, ma[r]);
        int b = mb[r] == -1 ? inf : rk.rr(r, mb[r]);
        if (a < b)
            ++margin;
        else if (b < a)
            --margin;
    }
    return margin;
}

inline MetricsReport report(const Instance& g, const Matching& m) {
    MetricsReport rep;
    rep.size = matching_size(m);
    rep.bpc = static_cast<int64_t>(blocking_pairs(g, m).size());
    rep.br = static_cast<int64_t>(blocking_residents(g, m).size());
    rep.r1 = rank1_count(g, m);
    rep.deficiency = deficiency(g, m);
    return rep;
}

// Percentage comparison of m against a baseline ms: relative size and rank-1
// gains, net resident vote margin per resident, and blocking pairs relative
// to the unmatched edge count. Zero denominators leave the field empty (NA)
// rather than forcing a 0.
inline MetricsReport paired_report(const Instance& g, const Matching& m,
                                   const Matching& ms) {
    MetricsReport rep = report(g, m);
    int64_t base_size = matching_size(ms);
    if (base_size > 0)
        rep.delta_size_pct = Rat::make(100 * (rep.size - base_size), base_size);
    int64_t base_r1 = rank1_count(g, ms);
    if (base_r1 > 0) rep.delta_r1_pct = Rat::make(100 * (rep.r1 - base_r1), base_r1);
    if (g.n_residents() > 0)
        rep.delta_votes_pct =
            Rat::make(100 * resident_vote_margin(g, m, ms), g.n_residents());
    int64_t free_edges = g.edge_count() - rep.size;
    if (free_edges > 0) rep.bp_pct = Rat::make(100 * rep.bpc, free_edges);
    return rep;
}

}  // namespace hrmatch::metrics
