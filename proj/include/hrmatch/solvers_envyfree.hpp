#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "solvers_hr.hpp"

namespace hrmatch::envyfree {

struct NotUndersubscribed : Error {
    using Error::Error;
};

// Envy-free matching via quota collapse: shrink every upper quota to the
// lower quota, take a (hospital-proposing) stable matching M1 of that
// instance, and accept it iff it saturates every shrunken quota. If some
// hospital falls short, no envy-free matching of the original instance
// exists at all, and nullopt is returned.
inline std::optional<Matching> yokoi(const Instance& g) {
    Instance g1 = g;
    g1.uq = g.lq;
    std::fill(g1.lq.begin(), g1.lq.end(), 0);
    Matching m1 = hr::gs_hospital(g1);
    std::vector<int32_t> load = hospital_loads(g, m1);
    for (int h = 0; h < g.n_hospitals(); ++h)
        if (load[h] < g.lq[h]) return std::nullopt;
    return m1;
}

// Threshold of an under-subscribed hospital h: the first resident in h's
// list that is matched in M1 and prefers h over its current partner. The
// table stores the position in h's list (list size = end-of-list dummy when
// nobody qualifies) so "h prefers r over the threshold" is a position
// comparison; resident id is kept alongside (-1 for the dummy).
struct ThresholdTable {
    std::vector<int32_t> position;
    std::vector<int32_t> resident;
};

inline ThresholdTable thresholds(const Instance& g, const Matching& m1) {
    const int H = g.n_hospitals();
    Ranks rk(g);
    ThresholdTable t;
    t.position.assign(H, 0);
    t.resident.assign(H, -1);
    for (int h = 0; h < H; ++h) {
        int pos = static_cast<int>(g.hpref[h].size());
        int res = -1;
        for (int i = 0; i < static_cast<int>(g.hpref[h].size()); ++i) {
            int r = g.hpref[h][i];
            if (m1[r] != -1 && rk.rr(r, h) < rk.rr(r, m1[r])) {
                pos = i;
                res = r;
                break;
            }
        }
        t.position[h] = pos;
        t.resident[h] = res;
    }
    return t;
}

inline int32_t threshold_resident(const Instance& g, const Matching& m1, int32_t h) {
    std::vector<int32_t> load = hospital_loads(g, m1);
    if (load[h] >= g.uq[h])
        throw NotUndersubscribed("hospital " + std::to_string(h + 1) +
                                 " is already full");
    return thresholds(g, m1).resident[h];
}

// Reduced instance over the same index space: unmatched residents on one
// side, under-subscribed hospitals on the other, keeping exactly the edges
// where the hospital prefers the resident over its threshold. Upper quotas
// become the remaining room above the lower quota; lower quotas drop to 0.
// Everything else keeps its relative order.
inline Instance build_reduced(const Instance& g, const Matching& m1) {
    const int R = g.n_residents(), H = g.n_hospitals();
    std::vector<int32_t> load = hospital_loads(g, m1);
    ThresholdTable t = thresholds(g, m1);
    std::vector<int8_t> in_h(H, 0);
    Instance gr;
    gr.rpref.assign(R, {});
    gr.hpref.assign(H, {});
    gr.lq.assign(H, 0);
    gr.uq.assign(H, 0);
    for (int h = 0; h < H; ++h)
        if (load[h] < g.uq[h]) {
            in_h[h] = 1;
            gr.uq[h] = g.uq[h] - g.lq[h];
            for (int i = 0; i < t.position[h]; ++i) {
                int r = g.hpref[h][i];
                if (m1[r] == -1) gr.hpref[h].push_back(r);
            }
        }
    Ranks rk(g);
    for (int r = 0; r < R; ++r) {
        if (m1[r] != -1) continue;
        for (int h : g.rpref[r])
            if (in_h[h] && rk.hr(h, r) < t.position[h]) gr.rpref[r].push_back(h);
    }
    return gr;
}

// Extends the envy-free matching to a maximal one: fills the hospitals'
// spare room with a stable matching of the reduced instance. Adding any
// further edge of the original instance would create justified envy.
inline std::optional<Matching> maximal_envy_free(const Instance& g) {
    std::optional<Matching> m1 = yokoi(g);
    if (!m1) return std::nullopt;
    Matching m2 = hr::gs_hospital(build_reduced(g, *m1));
    Matching m = *m1;
    for (int r = 0; r < g.n_residents(); ++r)
        if (m[r] == -1) m[r] = m2[r];
    return m;
}

}  // namespace hrmatch::envyfree
