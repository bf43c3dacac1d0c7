#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hrmatch {

// Bipartite preference instance. Residents and hospitals are dense 0-based
// indices internally; all text formats and error messages use 1-based ids.
// An instance with every lower quota zero is an HR instance, otherwise HRLQ.
struct Instance {
    std::vector<std::vector<int32_t>> rpref;  // per resident, hospitals, most preferred first
    std::vector<std::vector<int32_t>> hpref;  // per hospital, residents, most preferred first
    std::vector<int32_t> lq;                  // lower quotas, 0 <= lq[h] <= uq[h]
    std::vector<int32_t> uq;                  // upper quotas (0 allowed only in reduced instances)

    int n_residents() const { return static_cast<int>(rpref.size()); }
    int n_hospitals() const { return static_cast<int>(hpref.size()); }

    int64_t edge_count() const {
        int64_t e = 0;
        for (const auto& l : rpref) e += static_cast<int64_t>(l.size());
        return e;
    }
};

// resident -> hospital, -1 = unmatched.
using Matching = std::vector<int32_t>;

enum class Feasibility { FeasibleStable, FeasibleNoStable, Infeasible };

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotAcceptable : Error {
    using Error::Error;
};

struct InvalidParams : Error {
    using Error::Error;
};

// An HRLQ instance whose lower quotas no matching can satisfy.
struct InfeasibleInstance : Error {
    using Error::Error;
};

enum class Side { Resident, Hospital };

// 1-based position of `neighbor` in `vertex`'s preference list.
inline int rank_of(const Instance& g, Side side, int vertex, int neighbor) {
    const auto& list = side == Side::Resident ? g.rpref.at(vertex) : g.hpref.at(vertex);
    for (size_t i = 0; i < list.size(); ++i)
        if (list[i] == neighbor) return static_cast<int>(i) + 1;
    throw NotAcceptable("vertex " + std::to_string(vertex + 1) + " does not rank " +
                        std::to_string(neighbor + 1));
}

// O(1) rank lookup tables, 0-based positions, -1 = not acceptable.
// Costs O(|R|*|H|) memory; built per solve, not stored on the instance.
struct Ranks {
    int R = 0, H = 0;
    std::vector<int32_t> rrank, hrank;

    explicit Ranks(const Instance& g)
        : R(g.n_residents()),
          H(g.n_hospitals()),
          rrank(static_cast<size_t>(R) * H, -1),
          hrank(static_cast<size_t>(H) * R, -1) {
        for (int r = 0; r < R; ++r)
            for (size_t i = 0; i < g.rpref[r].size(); ++i)
                rrank[static_cast<size_t>(r) * H + g.rpref[r][i]] = static_cast<int32_t>(i);
        for (int h = 0; h < H; ++h)
            for (size_t i = 0; i < g.hpref[h].size(); ++i)
                hrank[static_cast<size_t>(h) * R + g.hpref[h][i]] = static_cast<int32_t>(i);
    }

    int32_t rr(int r, int h) const { return rrank[static_cast<size_t>(r) * H + h]; }
    int32_t hr(int h, int r) const { return hrank[static_cast<size_t>(h) * R + r]; }
};

inline std::vector<int32_t> hospital_loads(const Instance& g, const Matching& m) {
    std::vector<int32_t> cnt(g.n_hospitals(), 0);
    for (int r = 0; r < static_cast<int>(m.size()); ++r)
        if (m[r] >= 0) ++cnt[m[r]];
    return cnt;
}

inline int matching_size(const Matching& m) {
    int s = 0;
    for (int32_t h : m) s += h >= 0;
    return s;
}

// Matching invariants: assignments are edges, no hospital above upper quota.
inline bool is_valid(const Instance& g, const Matching& m) {
    if (static_cast<int>(m.size()) != g.n_residents()) return false;
    std::vector<int32_t> cnt(g.n_hospitals(), 0);
    for (int r = 0; r < g.n_residents(); ++r) {
        int h = m[r];
        if (h < 0) continue;
        if (h >= g.n_hospitals()) return false;
        bool edge = false;
        for (int32_t x : g.rpref[r])
            if (x == h) { edge = true; break; }
        if (!edge) return false;
        if (++cnt[h] > g.uq[h]) return false;
    }
    return true;
}

// is_valid plus every lower quota met.
inline bool is_feasible(const Instance& g, const Matching& m) {
    if (!is_valid(g, m)) return false;
    auto cnt = hospital_loads(g, m);
    for (int h = 0; h < g.n_hospitals(); ++h)
        if (cnt[h] < g.lq[h]) return false;
    return true;
}

// Structural invariants of the instance itself (symmetric edge set, no
// duplicate list entries, quota ordering). Generated and parsed instances
// must pass; throws std::invalid_argument naming the first violation.
inline void validate(const Instance& g) {
    const int R = g.n_residents(), H = g.n_hospitals();
    if (static_cast<int>(g.lq.size()) != H || static_cast<int>(g.uq.size()) != H)
        throw std::invalid_argument("quota vectors must have one entry per hospital");
    for (int h = 0; h < H; ++h) {
        if (g.lq[h] < 0 || g.uq[h] < 0 || g.lq[h] > g.uq[h])
            throw std::invalid_argument("hospital " + std::to_string(h + 1) +
                                        ": need 0 <= lq <= uq");
    }
    std::vector<std::vector<int8_t>> redge(R, std::vector<int8_t>(H, 0));
    for (int r = 0; r < R; ++r)
        for (int32_t h : g.rpref[r]) {
            if (h < 0 || h >= H)
                throw std::invalid_argument("resident " + std::to_string(r + 1) +
                                            " lists unknown hospital");
            if (redge[r][h]++)
                throw std::invalid_argument("resident " + std::to_string(r + 1) +
                                            " lists hospital " + std::to_string(h + 1) +
                                            " twice");
        }
    std::vector<std::vector<int8_t>> hedge(H, std::vector<int8_t>(R, 0));
    int64_t hedges = 0;
    for (int h = 0; h < H; ++h)
        for (int32_t r : g.hpref[h]) {
            if (r < 0 || r >= R)
                throw std::invalid_argument("hospital " + std::to_string(h + 1) +
                                            " lists unknown resident");
            if (hedge[h][r]++)
                throw std::invalid_argument("hospital " + std::to_string(h + 1) +
                                            " lists resident " + std::to_string(r + 1) +
                                            " twice");
            if (!redge[r][h])
                throw std::invalid_argument("asymmetric edge: hospital " +
                                            std::to_string(h + 1) + " lists resident " +
                                            std::to_string(r + 1) + " but not vice versa");
            ++hedges;
        }
    if (hedges != g.edge_count())
        throw std::invalid_argument("asymmetric edge: some resident entry has no hospital entry");
}

}  // namespace hrmatch
