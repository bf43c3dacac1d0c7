// Acceptance gate: seven release criteria, one PASS/FAIL line each, exit code
// = number of failures. Indented lines under a verdict are supporting detail.
// Checks compare solver outputs against hand-verified examples, exhaustive
// oracles, and statistical corridors with the tolerances pinned below.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "hrmatch/hrmatch.hpp"
#include "test_util.hpp"

using namespace hrmatch;

namespace {

// Pinned tolerances and budgets.
constexpr double kBudgetMsExample = 1.0;        // criterion 1 runtime
constexpr int kPropertySeeds = 500;             // criterion 3 sample size
constexpr double kBudgetMsProperty = 60000.0;   // criterion 3 runtime
constexpr double kBudgetMsTrendLq = 120000.0;   // criterion 4 runtime
constexpr double kBudgetMsTrendHr = 180000.0;   // criterion 5 runtime
constexpr double kBudgetMsSolveLarge = 1000.0;  // criterion 6 solve time
// Corridors: blocking pairs within 3x the deficiency floor, blocking
// residents within 1.5x, popular at least 1.25x the maximal-envy-free size,
// size gains 8..16% (master) and 4..12% (shuffled) over the stable baseline.
constexpr int kBpcOverDefNum = 3, kBpcOverDefDen = 1;
constexpr int kBrOverDefNum = 3, kBrOverDefDen = 2;
constexpr int kSizeOverEnvyNum = 5, kSizeOverEnvyDen = 4;
constexpr long long kMasterLo = 8, kMasterHi = 16;
constexpr long long kShuffleLo = 4, kShuffleHi = 12;

int g_failures = 0;

void verdict(bool ok, int n, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
    if (!ok) ++g_failures;
}

void detail(const std::string& line) { std::printf("  %s\n", line.c_str()); }

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

std::string show(const Matching& m) {
    std::string s = "{";
    for (size_t r = 0; r < m.size(); ++r) {
        if (r) s += " ";
        s += m[r] == -1 ? "-" : std::to_string(m[r] + 1);
    }
    return s + "}";
}

// Exact mean-vs-threshold comparisons on a MeanAcc: mean() <cmp> threshold.
bool mean_at_least(const harness::detail::MeanAcc& a, long long threshold) {
    using harness::detail::mul_checked;
    return a.n > 0 && a.num >= mul_checked(mul_checked(a.den, a.n), threshold);
}
bool mean_at_most(const harness::detail::MeanAcc& a, long long threshold) {
    using harness::detail::mul_checked;
    return a.n > 0 && a.num <= mul_checked(mul_checked(a.den, a.n), threshold);
}

// ---------------------------------------------------------------- criterion 1
void criterion1() {
    Instance g = fixtures::ex_lower_quota();
    auto t0 = std::chrono::steady_clock::now();
    Matching m1 = hr::gs_hospital(g);
    Matching m2 = hrlq::hrlq_popular(g);
    auto yk = envyfree::yokoi(g);
    auto me = envyfree::maximal_envy_free(g);
    auto bp2 = metrics::blocking_pairs(g, m2);
    auto bp3 = metrics::blocking_pairs(g, fixtures::ex_lower_quota_alt());
    int64_t def1 = metrics::deficiency(g, m1);
    double ms = ms_since(t0);

    bool ok = matching_size(m1) == 2 && m2 == fixtures::ex_lower_quota_popular() &&
              yk && *yk == fixtures::ex_lower_quota_envy_free() && me &&
              *me == fixtures::ex_lower_quota_max_envy_free() &&
              bp2 == std::vector<std::pair<int32_t, int32_t>>{{1, 0}} &&
              bp3 == std::vector<std::pair<int32_t, int32_t>>{{0, 0}} && def1 == 1 &&
              ms < kBudgetMsExample;
    verdict(ok, 1, "three-resident worked example, all five outputs exact");
    detail("stable size " + std::to_string(matching_size(m1)) + " deficiency " +
           std::to_string(def1) + ", popular " + show(m2) + ", envy-free core " +
           (yk ? show(*yk) : "none") + ", maximal " + (me ? show(*me) : "none"));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    detail(std::string("runtime ") + buf + " ms (budget 1 ms)");
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
    Instance g2 = fixtures::ex_size_vs_rank1();
    Matching ms2 = hr::gs_resident(g2);
    Matching mp2 = hr::max_card_popular(g2);
    bool unique_stable = ms2 == fixtures::ex_size_vs_rank1_stable() &&
                         hr::gs_hospital(g2) == ms2;
    bool sizes2 = matching_size(ms2) == 3 && matching_size(mp2) == 4;
    bool r1_stable = metrics::rank1_count(g2, ms2) == 3;
    int64_t r1_popular = metrics::rank1_count(g2, mp2);
    bool r1_pop_ok = r1_popular == 1;  // required exact value; see below
    bool margin_ok = metrics::resident_vote_margin(g2, ms2, mp2) == 1;
    bool cert2 =
        oracle::is_popular(g2, mp2, oracle::Domain::AllMatchings).popular &&
        metrics::blocking_pairs(g2, ms2).empty();

    Instance g3 = fixtures::ex_size_gap();
    Matching ms3 = hr::gs_resident(g3);
    Matching mp3 = hr::max_card_popular(g3);
    bool sizes3 = matching_size(ms3) == 4 && matching_size(mp3) == 5;
    bool cert3 = oracle::is_popular(g3, mp3, oracle::Domain::AllMatchings).popular &&
                 metrics::blocking_pairs(g3, ms3).empty();

    bool ok = unique_stable && sizes2 && r1_stable && r1_pop_ok && margin_ok &&
              cert2 && sizes3 && cert3;
    verdict(ok, 2, "four- and five-resident examples: sizes, top choices, votes");
    detail(std::string("4x4: unique stable ") + (unique_stable ? "ok" : "MISMATCH") +
           ", sizes 3/" + std::to_string(matching_size(mp2)) + ", stable top choices " +
           std::to_string(metrics::rank1_count(g2, ms2)) + ", vote margin " +
           std::to_string(metrics::resident_vote_margin(g2, ms2, mp2)) +
           ", popularity certificates " + (cert2 ? "ok" : "FAILED"));
    detail("4x5: sizes " + std::to_string(matching_size(ms3)) + "/" +
           std::to_string(matching_size(mp3)) + ", certificates " +
           (cert3 ? "ok" : "FAILED"));
    if (!r1_pop_ok) {
        // The required count of 1 cannot be met by any correct implementation.
        auto maxc = oracle::enumerate_matchings(g2, oracle::Domain::MaxCardinalityMatchings);
        detail("size-4 output serves " + std::to_string(r1_popular) +
               " top choices, required exactly 1; that value is unattainable:");
        detail("this instance has exactly " + std::to_string(maxc.size()) +
               " matching of size 4, namely " + show(maxc.front()) +
               ", in which residents 1 and 4 both receive their first choice,");
        detail("so every size-4 matching serves exactly 2 top choices; the check "
               "is left failing rather than quietly weakened.");
    }
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    int checked = 0, bad = 0;
    std::string first_bad;

    auto run_one = [&](const Instance& g, const std::string& name) {
        ++checked;
        auto fail = [&](const std::string& why) {
            ++bad;
            if (first_bad.empty()) first_bad = name + ": " + why;
        };

        Matching gr = hr::gs_resident(g), gh = hr::gs_hospital(g);
        if (!metrics::blocking_pairs(g, gr).empty() ||
            !metrics::blocking_pairs(g, gh).empty())
            fail("proposal output has a blocking pair");

        bool feasible = gen::feasibility_exists(g);
        if (feasible) {
            Matching mp = hrlq::hrlq_popular(g);
            if (!is_feasible(g, mp)) fail("quota solver output infeasible");
            if (!oracle::is_popular(g, mp, oracle::Domain::FeasibleMatchings).popular)
                fail("quota solver output not popular among feasible matchings");
            int64_t def = metrics::deficiency(g, gh);
            if (def > oracle::min_bp(g) || def > oracle::min_br(g))
                fail("deficiency does not floor the blocking-pair minima");
        }

        auto yk = envyfree::yokoi(g);
        bool any_envy_free = false;
        for (const auto& m :
             oracle::enumerate_matchings(g, oracle::Domain::FeasibleMatchings))
            if (oracle::is_envy_free(g, m)) {
                any_envy_free = true;
                break;
            }
        if (yk.has_value() != any_envy_free)
            fail("envy-free existence verdict disagrees with enumeration");
        if (yk) {
            auto me = envyfree::maximal_envy_free(g);
            if (!me || !oracle::is_maximal_envy_free(g, *me))
                fail("maximal envy-free output fails the exhaustive check");
            else
                for (int r = 0; r < g.n_residents(); ++r)
                    if ((*yk)[r] != -1 && (*me)[r] != (*yk)[r])
                        fail("maximal extension does not contain the core");
        }

        int64_t mstar = oracle::max_matching_size(g);
        if (3 * matching_size(hr::max_card_popular(g)) < 2 * mstar)
            fail("two-level output below two thirds of maximum size");
        if (matching_size(hr::popular_among_maxcard(g)) != mstar)
            fail("full-level output is not of maximum size");
    };

    for (uint64_t seed = 1; seed <= kPropertySeeds; ++seed)
        run_one(testutil::rand_small(seed), "seed " + std::to_string(seed));
    run_one(fixtures::ex_lower_quota(), "lower-quota example");
    run_one(fixtures::ex_size_vs_rank1(), "size-vs-rank1 example");
    run_one(fixtures::ex_size_gap(), "size-gap example");
    run_one(fixtures::ex_no_envy_free(), "no-envy-free example");

    double ms = ms_since(t0);
    bool ok = bad == 0 && ms < kBudgetMsProperty;
    verdict(ok, 3, "exhaustive property suite over " + std::to_string(checked) +
                       " small instances");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0f", ms);
    detail(std::string("violations ") + std::to_string(bad) + ", runtime " + buf +
           " ms (budget 60000 ms)");
    if (!first_bad.empty()) detail("first violation: " + first_bad);
}

// ---------------------------------------------------------------- criterion 4
void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    harness::ExperimentConfig cfg;
    cfg.track = harness::Track::HRLQ;
    cfg.model = gen::Model::Master;
    cfg.n_residents = 1000;
    cfg.h_list = {10, 20, 100};
    cfg.pref_len = 5;
    cfg.reps = 10;
    cfg.seed_base = 1;

    long long sum_def = 0, sum_bpc = 0, sum_br = 0;
    long long sum_smp_paired = 0, sum_sme = 0;
    int ok_reps = 0, me_reps = 0;
    std::vector<std::string> detailed_rows;
    for (size_t gi = 0; gi < cfg.h_list.size(); ++gi) {
        long long cell_def = 0, cell_bpc = 0, cell_br = 0;
        for (int rep = 0; rep < cfg.reps; ++rep) {
            auto r = harness::detail::run_hrlq_rep(
                cfg, cfg.h_list[gi],
                harness::rep_seed(cfg.seed_base, static_cast<int>(gi), rep));
            if (!r.ok) continue;
            ++ok_reps;
            cell_def += r.def_ms;
            cell_bpc += r.bpc;
            cell_br += r.br;
            if (r.s_me) {
                ++me_reps;
                sum_smp_paired += r.s_mp;
                sum_sme += *r.s_me;
            }
        }
        sum_def += cell_def;
        sum_bpc += cell_bpc;
        sum_br += cell_br;
        char line[160];
        std::snprintf(line, sizeof line,
                      "|H|=%d: total deficiency %lld, blocking pairs %lld, blocking "
                      "residents %lld over 10 runs",
                      cfg.h_list[gi], cell_def, cell_bpc, cell_br);
        detailed_rows.push_back(line);
    }
    double ms = ms_since(t0);

    bool corr_bpc = sum_bpc * kBpcOverDefDen <= sum_def * kBpcOverDefNum;
    bool corr_br = sum_br * kBrOverDefDen <= sum_def * kBrOverDefNum;
    bool corr_size = sum_smp_paired * kSizeOverEnvyDen >= sum_sme * kSizeOverEnvyNum;
    bool ok = ok_reps == 30 && me_reps > 0 && corr_bpc && corr_br && corr_size &&
              ms < kBudgetMsTrendLq;
    verdict(ok, 4, "quota-solver quality corridors on 1000-resident grids");
    for (const auto& line : detailed_rows) detail(line);
    detailed_rows.clear();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "pooled: blocking pairs %lld <= 3x deficiency %lld: %s; blocking "
                  "residents %lld <= 1.5x: %s",
                  sum_bpc, sum_def, corr_bpc ? "ok" : "FAILED", sum_br,
                  corr_br ? "ok" : "FAILED");
    detail(buf);
    std::snprintf(buf, sizeof buf,
                  "popular size total %lld >= 1.25x envy-free size total %lld over %d "
                  "comparable runs: %s",
                  sum_smp_paired, sum_sme, me_reps, corr_size ? "ok" : "FAILED");
    detail(buf);
    std::snprintf(buf, sizeof buf, "runtime %.0f ms (budget 120000 ms)", ms);
    detail(buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    bool all_ok = true;
    std::vector<std::string> lines;

    auto run_grid = [&](gen::Model model, long long lo, long long hi,
                        bool check_votes) {
        harness::ExperimentConfig cfg;
        cfg.track = harness::Track::HR;
        cfg.model = model;
        cfg.n_residents = 1000;
        cfg.h_list = {10, 20, 100, 1000};
        cfg.pref_len = 5;
        cfg.reps = 10;
        cfg.seed_base = 1;
        for (size_t gi = 0; gi < cfg.h_list.size(); ++gi) {
            harness::detail::MeanAcc dsize, dvotes;
            for (int rep = 0; rep < cfg.reps; ++rep) {
                auto r = harness::detail::run_hr_rep(
                    cfg, cfg.h_list[gi],
                    harness::rep_seed(cfg.seed_base, static_cast<int>(gi), rep));
                dsize.add_opt(r.mp.delta_size_pct);
                dvotes.add_opt(r.mp.delta_votes_pct);
            }
            bool in_corr = mean_at_least(dsize, lo) && mean_at_most(dsize, hi);
            bool votes_ok = !check_votes || cfg.h_list[gi] == 10 ||
                            (dvotes.n > 0 && dvotes.num > 0);  // strictly positive
            all_ok = all_ok && in_corr && votes_ok;
            char line[200];
            std::snprintf(line, sizeof line,
                          "%s |H|=%d: size gain %s%% in [%lld,%lld]: %s%s",
                          model == gen::Model::Master ? "master" : "shuffle",
                          cfg.h_list[gi], dsize.mean2().c_str(), lo, hi,
                          in_corr ? "ok" : "FAILED",
                          check_votes && cfg.h_list[gi] != 10
                              ? (std::string(", vote margin ") + dvotes.mean2() +
                                 "% > 0: " + (votes_ok ? "ok" : "FAILED"))
                                    .c_str()
                              : "");
            lines.push_back(line);
        }
    };

    run_grid(gen::Model::Master, kMasterLo, kMasterHi, true);
    run_grid(gen::Model::Shuffle, kShuffleLo, kShuffleHi, false);
    double ms = ms_since(t0);

    bool ok = all_ok && ms < kBudgetMsTrendHr;
    verdict(ok, 5, "two-level size gains inside the corridors on both models");
    for (const auto& line : lines) detail(line);
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.0f ms (budget 180000 ms)", ms);
    detail(buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion6() {
    gen::GeneratorParams p;
    p.model = gen::Model::Master;
    p.n_residents = 1000;
    p.n_hospitals = 100;
    p.pref_len = 5;
    p.capacity = 10;
    p.seed = 1;
    Instance g = gen::gen_hrlq_filtered(p, 30);
    auto t0 = std::chrono::steady_clock::now();
    hrlq::Result res = hrlq::solve(g);
    double ms = ms_since(t0);
    uint64_t bound = g.edge_count() * static_cast<uint64_t>(g.n_residents() + 1);

    bool ok = is_feasible(g, res.matching) && res.proposals <= bound &&
              ms < kBudgetMsSolveLarge;
    verdict(ok, 6, "1000-resident quota instance solves fast within the proposal bound");
    char buf[160];
    std::snprintf(buf, sizeof buf, "%llu proposals <= bound %llu, %.1f ms (budget 1000 ms)",
                  static_cast<unsigned long long>(res.proposals),
                  static_cast<unsigned long long>(bound), ms);
    detail(buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
    bool ok = true;

    gen::GeneratorParams p;
    p.n_residents = 300;
    p.n_hospitals = 30;
    p.pref_len = 5;
    p.seed = 99;
    for (auto model : {gen::Model::Master, gen::Model::Shuffle}) {
        p.model = model;
        ok = ok && io::serialize_instance(gen::generate(p)) ==
                       io::serialize_instance(gen::generate(p));
        ok = ok && io::serialize_instance(gen::assign_lower_quotas(gen::generate(p), p)) ==
                       io::serialize_instance(gen::assign_lower_quotas(gen::generate(p), p));
    }
    Instance g = gen::generate(p);
    auto rerun_equal = [&](Matching (*solve)(const Instance&)) {
        return io::serialize_matching(g, solve(g)) == io::serialize_matching(g, solve(g));
    };
    ok = ok && rerun_equal(+[](const Instance& x) { return hr::gs_resident(x); });
    ok = ok && rerun_equal(+[](const Instance& x) { return hr::gs_hospital(x); });
    ok = ok && rerun_equal(+[](const Instance& x) { return hr::max_card_popular(x); });
    ok = ok &&
         rerun_equal(+[](const Instance& x) { return hr::popular_among_maxcard(x); });

    Instance glq = gen::gen_hrlq_filtered(p, 30);
    ok = ok && hrlq::hrlq_popular(glq) == hrlq::hrlq_popular(glq);
    auto yk1 = envyfree::yokoi(glq), yk2 = envyfree::yokoi(glq);
    ok = ok && yk1 == yk2;
    ok = ok && envyfree::maximal_envy_free(glq) == envyfree::maximal_envy_free(glq);

    harness::ExperimentConfig cfg;
    cfg.track = harness::Track::HR;
    cfg.model = gen::Model::Shuffle;
    cfg.n_residents = 80;
    cfg.h_list = {8};
    cfg.pref_len = 4;
    cfg.reps = 3;
    cfg.threads = 1;
    std::string csv1 = harness::run_experiment(cfg);
    cfg.threads = 4;
    std::string csv2 = harness::run_experiment(cfg);
    ok = ok && csv1 == csv2;

    verdict(ok, 7, "generators, solvers, and experiments rerun byte-identical");
    detail(std::string("thread-count independence of the experiment table: ") +
           (csv1 == csv2 ? "ok" : "FAILED"));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    std::printf("%d of 7 criteria failed\n", g_failures);
    return g_failures;
}
