#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"
#include "maxflow.hpp"
#include "rng.hpp"
#include "solvers_hr.hpp"

namespace hrmatch::gen {

enum class Model { Master, Shuffle };

struct InfeasibleQuotaBudget : Error {
    using Error::Error;
};

struct RetriesExhausted : Error {
    using Error::Error;
};

struct GeneratorParams {
    Model model = Model::Master;
    int n_residents = 0;
    int n_hospitals = 0;
    int pref_len = 0;                  // k
    int capacity = 0;                  // 0 = default |R|/|H|
    double geometric_p = 0.10;
    double lq_hospital_fraction = 0.90;
    double lq_load_fraction = 0.50;
    uint64_t seed = 0;
};

inline int effective_capacity(const GeneratorParams& p) {
    return p.capacity > 0 ? p.capacity : p.n_residents / std::max(1, p.n_hospitals);
}

inline void check_params(const GeneratorParams& p) {
    if (p.n_residents < 1 || p.n_hospitals < 1)
        throw InvalidParams("need at least one resident and one hospital");
    if (p.pref_len < 1 || p.pref_len > p.n_hospitals)
        throw InvalidParams("preference length k must satisfy 1 <= k <= |H|");
    if (!(p.geometric_p > 0.0 && p.geometric_p < 1.0))
        throw InvalidParams("geometric_p must lie in (0,1)");
    if (p.lq_hospital_fraction < 0.0 || p.lq_hospital_fraction > 1.0 ||
        p.lq_load_fraction < 0.0 || p.lq_load_fraction > 1.0)
        throw InvalidParams("quota fractions must lie in [0,1]");
    if (effective_capacity(p) < 1)
        throw InvalidParams("capacity must be >= 1 (default |R|/|H| needs |R| >= |H|)");
}

namespace detail {

// Hospital-selection weights. The geometric decay is applied to the *relative*
// position j/|H|, scaled so that a |H|=30 list reproduces the plain geometric
// with parameter p exactly: weight(j) = (1-p)^(30*j/|H|), j = 0..|H|-1. This
// keeps the skew of the demand profile independent of |H| (top hospital ~24x
// the bottom one at p=0.10 for every |H|), which is what the reported size,
// deficiency and vote trends across |H| = 10..1000 require; a decay applied
// to the absolute rank concentrates all demand on ~1/p hospitals regardless
// of |H| and cannot reproduce them.
inline std::vector<double> weight_cumsum(int H, double p) {
    const double step = std::pow(1.0 - p, 30.0 / H);
    std::vector<double> cum(H);
    double w = 1.0, acc = 0.0;
    for (int j = 0; j < H; ++j) {
        acc += w;
        cum[j] = acc;
        w *= step;
    }
    return cum;
}

// k distinct hospitals, duplicates rejected by resampling, in draw order.
inline std::vector<int32_t> draw_list(Rng& rng, const std::vector<double>& cum, int k,
                                      std::vector<int8_t>& scratch) {
    const int H = static_cast<int>(cum.size());
    const double total = cum.back();
    std::vector<int32_t> list;
    list.reserve(k);
    std::fill(scratch.begin(), scratch.end(), 0);
    while (static_cast<int>(list.size()) < k) {
        double x = rng.u01() * total;
        int h = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), x) - cum.begin());
        if (h >= H) h = H - 1;
        if (!scratch[h]) {
            scratch[h] = 1;
            list.push_back(h);
        }
    }
    return list;
}

inline Instance gen_common(const GeneratorParams& p) {
    check_params(p);
    const int R = p.n_residents, H = p.n_hospitals;
    Instance g;
    g.lq.assign(H, 0);
    g.uq.assign(H, effective_capacity(p));
    g.rpref.resize(R);

    Rng lists(derive_seed(p.seed, 0));
    auto cum = weight_cumsum(H, p.geometric_p);
    std::vector<int8_t> scratch(H, 0);
    for (int r = 0; r < R; ++r) g.rpref[r] = draw_list(lists, cum, p.pref_len, scratch);

    g.hpref.assign(H, {});
    for (int r = 0; r < R; ++r)
        for (int32_t h : g.rpref[r]) g.hpref[h].push_back(r);

    Rng order(derive_seed(p.seed, 1));
    if (p.model == Model::Master) {
        // One master permutation; every hospital ranks neighbors by it.
        std::vector<int32_t> perm(R);
        for (int r = 0; r < R; ++r) perm[r] = r;
        order.shuffle(perm);
        std::vector<int32_t> pos(R);
        for (int i = 0; i < R; ++i) pos[perm[i]] = i;
        for (auto& l : g.hpref)
            std::sort(l.begin(), l.end(),
                      [&](int32_t a, int32_t b) { return pos[a] < pos[b]; });
    } else {
        for (auto& l : g.hpref) order.shuffle(l);
    }
    return g;
}

}  // namespace detail

inline Instance gen_master(const GeneratorParams& p) {
    if (p.model != Model::Master) throw InvalidParams("gen_master requires model=Master");
    return detail::gen_common(p);
}

inline Instance gen_shuffle(const GeneratorParams& p) {
    if (p.model != Model::Shuffle) throw InvalidParams("gen_shuffle requires model=Shuffle");
    return detail::gen_common(p);
}

inline Instance generate(const GeneratorParams& p) {
    return p.model == Model::Master ? gen_master(p) : gen_shuffle(p);
}

// ceil(lq_hospital_fraction*|H|) hospitals drawn uniformly get lq >= 1; the
// total floor(lq_load_fraction*sum uq) is spread by round-robin unit
// increments over the chosen hospitals (ascending id), never exceeding uq.
inline Instance assign_lower_quotas(const Instance& in, const GeneratorParams& p) {
    for (int32_t q : in.lq)
        if (q != 0) throw InvalidParams("assign_lower_quotas requires all lower quotas zero");
    const int H = in.n_hospitals();
    int64_t total_uq = 0;
    for (int32_t q : in.uq) total_uq += q;
    int64_t budget = static_cast<int64_t>(p.lq_load_fraction * static_cast<double>(total_uq));
    int chosen_n = static_cast<int>(std::ceil(p.lq_hospital_fraction * H));

    Instance g = in;
    if (budget == 0 || chosen_n == 0) {
        if (budget > 0 && chosen_n == 0)
            throw InfeasibleQuotaBudget("no hospitals chosen but budget is positive");
        return g;
    }
    Rng rng(derive_seed(p.seed, 2));
    std::vector<int32_t> chosen = rng.sample_sorted(H, chosen_n);
    int64_t room = 0;
    for (int32_t h : chosen) room += g.uq[h];
    if (budget > room)
        throw InfeasibleQuotaBudget("lower-quota budget " + std::to_string(budget) +
                                    " exceeds capacity " + std::to_string(room) +
                                    " of chosen hospitals");
    while (budget > 0) {
        for (int32_t h : chosen) {
            if (budget == 0) break;
            if (g.lq[h] < g.uq[h]) {
                ++g.lq[h];
                --budget;
            }
        }
    }
    return g;
}

// True iff some valid matching meets every lower quota: max flow saturating
// one unit slot per lower-quota seat (upper quotas cannot bind since lq<=uq).
inline bool feasibility_exists(const Instance& g) {
    const int R = g.n_residents(), H = g.n_hospitals();
    int64_t need = 0;
    for (int32_t q : g.lq) need += q;
    if (need == 0) return true;
    MaxFlow mf(R + H + 2);
    const int src = 0, snk = R + H + 1;
    for (int r = 0; r < R; ++r) mf.add_edge(src, 1 + r, 1);
    for (int h = 0; h < H; ++h)
        if (g.lq[h] > 0) mf.add_edge(1 + R + h, snk, g.lq[h]);
    for (int r = 0; r < R; ++r)
        for (int32_t h : g.rpref[r])
            if (g.lq[h] > 0) mf.add_edge(1 + r, 1 + R + h, 1);
    return mf.run(src, snk) == need;
}

// Infeasible / FeasibleStable / FeasibleNoStable. One hospital-proposing
// stable matching of the quota-ignored instance decides the stable case: by
// the Rural Hospitals theorem every stable matching fills each hospital
// identically, so its deficiency is an invariant of the instance.
inline Feasibility classify(const Instance& g) {
    if (!feasibility_exists(g)) return Feasibility::Infeasible;
    Matching ms = hr::gs_hospital(g);
    auto cnt = hospital_loads(g, ms);
    for (int h = 0; h < g.n_hospitals(); ++h)
        if (cnt[h] < g.lq[h]) return Feasibility::FeasibleNoStable;
    return Feasibility::FeasibleStable;
}

// First quota-assigned instance classified FeasibleNoStable, re-drawing with
// seed+attempt.
inline Instance gen_hrlq_filtered(const GeneratorParams& p, int max_retries) {
    if (max_retries < 1) throw InvalidParams("max_retries must be >= 1");
    for (int att = 0; att < max_retries; ++att) {
        GeneratorParams q = p;
        q.seed = p.seed + static_cast<uint64_t>(att);
        Instance g = assign_lower_quotas(generate(q), q);
        if (classify(g) == Feasibility::FeasibleNoStable) return g;
    }
    throw RetriesExhausted("no feasible-but-unstable instance in " +
                           std::to_string(max_retries) + " attempts");
}

}  // namespace hrmatch::gen
