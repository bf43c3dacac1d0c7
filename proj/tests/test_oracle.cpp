#include <algorithm>
#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "hrmatch/hrmatch.hpp"
#include "test_util.hpp"

using namespace hrmatch;

namespace {

Instance one_hospital(std::vector<int32_t> order, int32_t uq) {
    Instance g;
    int R = 0;
    for (int32_t r : order) R = std::max(R, r + 1);
    g.rpref.assign(R, {0});
    g.hpref = {std::move(order)};
    g.lq = {0};
    g.uq = {uq};
    validate(g);
    return g;
}

}  // namespace

TEST_CASE("enumeration counts on the quota-starved example") {
    Instance g = fixtures::ex_lower_quota();

    auto all = oracle::enumerate_matchings(g, oracle::Domain::AllMatchings);
    // 3*3*2 assignments, minus one that overfills h0 and two that overfill h1.
    CHECK(all.size() == 15);

    auto feas = oracle::enumerate_matchings(g, oracle::Domain::FeasibleMatchings);
    CHECK(feas.size() == 8);  // h1 must take r0 or r1; the rest is free
    for (const auto& m : feas) REQUIRE(is_feasible(g, m));
    auto has = [&](const Matching& m) {
        return std::find(feas.begin(), feas.end(), m) != feas.end();
    };
    CHECK(has(fixtures::ex_lower_quota_popular()));
    CHECK(has(fixtures::ex_lower_quota_alt()));
    CHECK(has(fixtures::ex_lower_quota_envy_free()));
    CHECK(has(fixtures::ex_lower_quota_max_envy_free()));

    auto maxc = oracle::enumerate_matchings(g, oracle::Domain::MaxCardinalityMatchings);
    CHECK(maxc.size() == 2);  // h1 takes r0 or r1, everyone matched
    for (const auto& m : maxc) REQUIRE(matching_size(m) == 3);
}

TEST_CASE("enumeration respects the guard cap") {
    gen::GeneratorParams p;
    p.n_residents = 12;
    p.n_hospitals = 3;
    p.pref_len = 2;
    p.capacity = 4;
    p.seed = 8;
    Instance g = gen::generate(p);
    CHECK_THROWS_AS(oracle::enumerate_matchings(g, oracle::Domain::AllMatchings),
                    oracle::TooLarge);
    CHECK_NOTHROW(oracle::enumerate_matchings(g, oracle::Domain::AllMatchings, 12));
}

TEST_CASE("hospital votes under the adversarial pairing") {
    SECTION("wholesale downgrade counts every seat") {
        Instance g = one_hospital({0, 1, 2, 3}, 2);
        // Incumbent holds the two best residents, challenger the two worst.
        CHECK(oracle::hospital_vote_adversarial(g, 0, {0, 0, -1, -1}, {-1, -1, 0, 0}) ==
              -2);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {-1, -1, 0, 0}, {0, 0, -1, -1}) ==
              2);
    }

    SECTION("a one-for-one swap is a forced comparison, even below quota") {
        // Quota 2 but only one seat used on each side: the shared empty seat
        // cancels, so the hospital must compare the residents head to head.
        Instance g = one_hospital({0, 1}, 2);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {0, -1}, {-1, 0}) == -1);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {-1, 0}, {0, -1}) == 1);
    }

    SECTION("pure gain and pure loss") {
        Instance g = one_hospital({0, 1}, 2);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {-1, -1}, {0, -1}) == 1);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {0, -1}, {-1, -1}) == -1);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {0, 0}, {-1, -1}) == -2);
    }

    SECTION("the pairing is chosen to favor the challenger") {
        // h ranks r1 > r0 > r2 > r3; incumbent {r0,r3}, challenger {r1,r2}.
        // Pairing r1|r0 and r2|r3 wins both comparisons (+2); the other
        // pairing r1|r3, r2|r0 splits (0). The adversary takes +2.
        Instance g = one_hospital({1, 0, 2, 3}, 2);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {0, -1, -1, 0}, {-1, 0, 0, -1}) ==
              2);
        // Flipped roles: best pairing for the (new) challenger still only
        // reaches 0.
        CHECK(oracle::hospital_vote_adversarial(g, 0, {-1, 0, 0, -1}, {0, -1, -1, 0}) ==
              0);
    }

    SECTION("identical assignments cast no votes") {
        Instance g = one_hospital({0, 1}, 2);
        CHECK(oracle::hospital_vote_adversarial(g, 0, {0, 0}, {0, 0}) == 0);
    }
}

TEST_CASE("popularity margins on the worked example") {
    Instance g = fixtures::ex_lower_quota();
    Matching mp = fixtures::ex_lower_quota_popular();
    Matching alt = fixtures::ex_lower_quota_alt();
    CHECK(oracle::popularity_margin(g, mp, mp) == 0);
    CHECK(oracle::is_popular(g, mp, oracle::Domain::FeasibleMatchings).popular);
    // The other maximal feasible matching loses to mp two votes to none:
    // both hospitals trade up (r2 for r1 at h0, r1 for r2 at h1) while the
    // residents split evenly.
    CHECK(oracle::popularity_margin(g, alt, mp) == 2);
    CHECK(oracle::popularity_margin(g, mp, alt) == -2);
    auto alt_cert = oracle::is_popular(g, alt, oracle::Domain::FeasibleMatchings);
    CHECK_FALSE(alt_cert.popular);

    // The envy-free core loses elections: r0 and r2 sit unmatched while h0
    // has room for both.
    auto cert = oracle::is_popular(g, fixtures::ex_lower_quota_envy_free(),
                                   oracle::Domain::FeasibleMatchings);
    CHECK_FALSE(cert.popular);
    REQUIRE(cert.witness.has_value());
    CHECK(cert.witness_margin > 0);
    CHECK(oracle::popularity_margin(g, fixtures::ex_lower_quota_envy_free(),
                                    *cert.witness) == cert.witness_margin);
    CHECK(is_feasible(g, *cert.witness));
}

TEST_CASE("certificates are self-consistent on random instances") {
    int unpopular_seen = 0;
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        Instance g = testutil::rand_small(seed, false);
        auto all = oracle::enumerate_matchings(g, oracle::Domain::AllMatchings);
        size_t step = std::max<size_t>(1, all.size() / 12);
        for (size_t i = 0; i < all.size(); i += step) {
            auto cert = oracle::is_popular(g, all[i], oracle::Domain::AllMatchings);
            if (cert.popular) {
                REQUIRE_FALSE(cert.witness.has_value());
            } else {
                ++unpopular_seen;
                REQUIRE(cert.witness.has_value());
                REQUIRE(cert.witness_margin > 0);
                REQUIRE(oracle::popularity_margin(g, all[i], *cert.witness) ==
                        cert.witness_margin);
            }
        }
    }
    CHECK(unpopular_seen > 50);
}

TEST_CASE("stable matchings are popular") {
    for (uint64_t seed = 1; seed <= 120; ++seed) {
        Instance g = testutil::rand_small(seed, false);
        auto cert =
            oracle::is_popular(g, hr::gs_resident(g), oracle::Domain::AllMatchings);
        CAPTURE(seed);
        REQUIRE(cert.popular);
    }
}

TEST_CASE("exhaustive floors for blocking pairs") {
    Instance g = fixtures::ex_lower_quota();
    // Every feasible matching of this instance has a blocking pair, and the
    // popular one attains the floor.
    CHECK(oracle::min_bp(g) == 1);
    CHECK(oracle::min_br(g) == 1);

    // Without lower quotas the stable matching drives both floors to zero.
    Instance g2 = fixtures::ex_size_gap();
    CHECK(oracle::min_bp(g2) == 0);
    CHECK(oracle::min_br(g2) == 0);

    Instance inf;
    inf.rpref = {{0, 1}};
    inf.hpref = {{0}, {0}};
    inf.lq = {1, 1};
    inf.uq = {1, 1};
    validate(inf);
    CHECK_THROWS_AS(oracle::min_bp(inf), InfeasibleInstance);
    CHECK_THROWS_AS(oracle::min_br(inf), InfeasibleInstance);

    for (uint64_t seed = 1; seed <= 80; ++seed) {
        Instance gg = testutil::rand_small(seed);
        if (!gen::feasibility_exists(gg)) continue;
        int64_t floor_bp = oracle::min_bp(gg);
        int64_t floor_br = oracle::min_br(gg);
        REQUIRE(floor_br <= floor_bp);
        // The deficiency-free popular matching cannot beat the floor.
        auto rep = metrics::report(gg, hrlq::hrlq_popular(gg));
        REQUIRE(rep.bpc >= floor_bp);
        REQUIRE(rep.br >= floor_br);
        if (gen::classify(gg) == Feasibility::FeasibleStable) REQUIRE(floor_bp == 0);
    }
}

TEST_CASE("maximum matching size via flow equals enumeration") {
    CHECK(oracle::max_matching_size(fixtures::ex_size_gap()) == 5);
    CHECK(oracle::max_matching_size(fixtures::ex_size_vs_rank1()) == 4);
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        Instance g = testutil::rand_small(seed);
        int64_t best = 0;
        for (const auto& m :
             oracle::enumerate_matchings(g, oracle::Domain::AllMatchings))
            best = std::max<int64_t>(best, matching_size(m));
        REQUIRE(oracle::max_matching_size(g) == best);
    }
}

TEST_CASE("justified envy is narrower than instability") {
    Instance g = fixtures::ex_lower_quota();
    // The envy-free core has blocking pairs (open seats at h0) but no envy.
    Matching core = fixtures::ex_lower_quota_envy_free();
    CHECK_FALSE(metrics::blocking_pairs(g, core).empty());
    CHECK(oracle::is_envy_free(g, core));
    // The popular matching fills h0 and creates real envy: r1 prefers h0 and
    // h0 prefers r1 over its assignee r2.
    CHECK(oracle::has_justified_envy(g, fixtures::ex_lower_quota_popular()));

    for (uint64_t seed = 1; seed <= 80; ++seed) {
        Instance gg = testutil::rand_small(seed);
        for (const auto& m :
             oracle::enumerate_matchings(gg, oracle::Domain::AllMatchings)) {
            // No blocking pairs at all implies no envy.
            if (metrics::blocking_pairs(gg, m).empty())
                REQUIRE(oracle::is_envy_free(gg, m));
        }
    }
}

TEST_CASE("maximality of envy-free matchings") {
    Instance g = fixtures::ex_lower_quota();
    CHECK(oracle::is_maximal_envy_free(g, fixtures::ex_lower_quota_max_envy_free()));
    // The bare core is envy-free but extendable: not maximal.
    CHECK_FALSE(oracle::is_maximal_envy_free(g, fixtures::ex_lower_quota_envy_free()));
    // An envious matching never qualifies.
    CHECK_FALSE(oracle::is_maximal_envy_free(g, fixtures::ex_lower_quota_popular()));
    // Nor does an infeasible one.
    CHECK_FALSE(oracle::is_maximal_envy_free(g, {-1, -1, -1}));
}
