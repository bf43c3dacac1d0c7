#pragma once

#include "core.hpp"

// Small hand-checked instances exercising every solver edge the library
// cares about. All expected values here were verified against the
// enumeration oracle; the unit tests re-verify them on every run.
namespace hrmatch::fixtures {

// Three residents, two hospitals, h2 carries a lower quota of 1. No stable
// matching is feasible (the stable matching leaves h2 empty), which forces
// the lower-quota solver to trade a blocking pair for feasibility.
//   r1: h1 h2    r2: h1 h2    r3: h1
//   h1 [0,2]: r1 r2 r3        h2 [1,1]: r2 r1
inline Instance ex_lower_quota() {
    Instance g;
    g.rpref = {{0, 1}, {0, 1}, {0}};
    g.hpref = {{0, 1, 2}, {1, 0}};
    g.lq = {0, 1};
    g.uq = {2, 1};
    return g;
}
// The popular feasible matching and the other maximal feasible matching.
inline Matching ex_lower_quota_popular() { return {0, 1, 0}; }   // r1-h1 r2-h2 r3-h1
inline Matching ex_lower_quota_alt() { return {1, 0, 0}; }       // r1-h2 r2-h1 r3-h1
inline Matching ex_lower_quota_envy_free() { return {-1, 1, -1}; }
inline Matching ex_lower_quota_max_envy_free() { return {0, 1, -1}; }

// Four residents, four unit hospitals. The unique stable matching has size 3
// and serves three rank-1 wishes; the unique perfect matching serves two.
// Growing the matching costs top choices — the size/rank-1 trade-off.
//   r1: h1    r2: h2 h4 h3    r3: h1 h2    r4: h4
//   h1: r3 r1    h2: r3 r2    h3: r2    h4: r4 r2     (all [0,1])
inline Instance ex_size_vs_rank1() {
    Instance g;
    g.rpref = {{0}, {1, 3, 2}, {0, 1}, {3}};
    g.hpref = {{2, 0}, {2, 1}, {1}, {3, 1}};
    g.lq = {0, 0, 0, 0};
    g.uq = {1, 1, 1, 1};
    return g;
}
inline Matching ex_size_vs_rank1_stable() { return {-1, 1, 0, 3}; }
inline Matching ex_size_vs_rank1_popular() { return {0, 2, 1, 3}; }

// Five residents, five unit hospitals: stable matchings have size 4 while a
// perfect matching of size 5 exists and is popular among the largest ones.
//   r1: h5 h4    r2: h5 h3    r3: h1    r4: h3 h5    r5: h3 h2 h1
//   h1: r3 r5    h2: r5    h3: r5 r2 r4    h4: r1    h5: r4 r1 r2
inline Instance ex_size_gap() {
    Instance g;
    g.rpref = {{4, 3}, {4, 2}, {0}, {2, 4}, {2, 1, 0}};
    g.hpref = {{2, 4}, {4}, {4, 1, 3}, {0}, {3, 0, 1}};
    g.lq = {0, 0, 0, 0, 0};
    g.uq = {1, 1, 1, 1, 1};
    return g;
}
inline Matching ex_size_gap_stable() { return {3, -1, 0, 4, 2}; }
inline Matching ex_size_gap_popular() { return {3, 4, 0, 2, 1}; }

// Two residents, two unit hospitals with lower quotas 1: the unique feasible
// matching carries justified envy, so no envy-free matching exists.
//   r1: h1 h2    r2: h1    h1 [1,1]: r1 r2    h2 [1,1]: r1
inline Instance ex_no_envy_free() {
    Instance g;
    g.rpref = {{0, 1}, {0}};
    g.hpref = {{0, 1}, {0}};
    g.lq = {1, 1};
    g.uq = {1, 1};
    return g;
}

}  // namespace hrmatch::fixtures
