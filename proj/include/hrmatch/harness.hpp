#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "metrics.hpp"
#include "oracle.hpp"
#include "solvers_envyfree.hpp"
#include "solvers_hr.hpp"
#include "solvers_hrlq.hpp"

namespace hrmatch::harness {

enum class Track { HR, HRLQ };

struct ExperimentConfig {
    Track track = Track::HRLQ;
    gen::Model model = gen::Model::Master;
    int n_residents = 1000;
    std::vector<int32_t> h_list;  // grid over |H|
    int pref_len = 5;
    int capacity = 0;  // 0 = |R|/|H|
    int reps = 10;
    uint64_t seed_base = 1;
    int max_retries = 30;      // HRLQ filter attempts per rep
    bool per_instance = false; // per-rep rows instead of grid means
    bool variance = false;     // append sample-variance columns to mean rows
    int threads = 0;           // 0 = hardware concurrency
};

namespace detail {

inline __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline __int128 mul_checked(__int128 a, __int128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("mean accumulator overflow");
    return r;
}

inline std::string i128_str(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    std::string s;
    while (u) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    return neg ? "-" + s : s;
}

// num/den to two decimals, half away from zero.
inline std::string render2_128(__int128 num, __int128 den) {
    __int128 scaled = mul_checked(num, 200);
    __int128 q = (scaled + (scaled < 0 ? -den : den)) / (2 * den);
    bool neg = q < 0;
    if (neg) q = -q;
    std::string whole = i128_str(q / 100);
    std::string frac = i128_str(q % 100);
    if (frac.size() < 2) frac.insert(frac.begin(), '0');
    return (neg ? "-" : "") + whole + "." + frac;
}

// Exact running sum of rationals; values stay bit-stable across reruns and
// across worker counts because accumulation happens in a deterministic
// reduce after all workers finish.
struct MeanAcc {
    __int128 num = 0;
    __int128 den = 1;
    int64_t n = 0;
    std::vector<long double> vals;  // kept for the optional variance column

    void add(long long a, long long b) {
        __int128 g1 = gcd128(den, b);
        __int128 rb = b / g1;
        num = mul_checked(num, rb) + mul_checked(a, den / g1);
        den = mul_checked(den, rb);
        __int128 g2 = gcd128(num < 0 ? -num : num, den);
        if (g2 > 1) {
            num /= g2;
            den /= g2;
        }
        ++n;
        vals.push_back(static_cast<long double>(a) / static_cast<long double>(b));
    }
    void add(int64_t v) { add(v, 1); }
    void add(const metrics::Rat& r) { add(r.num, r.den); }
    void add_opt(const std::optional<metrics::Rat>& r) {
        if (r) add(*r);
    }

    std::string mean2() const {
        if (n == 0) return "NA";
        return render2_128(num, mul_checked(den, n));
    }
    std::string var2() const {
        if (n < 2) return "NA";
        long double mean = 0;
        for (long double v : vals) mean += v;
        mean /= static_cast<long double>(n);
        long double ss = 0;
        for (long double v : vals) ss += (v - mean) * (v - mean);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2Lf",
                      static_cast<long double>(ss / static_cast<long double>(n - 1)));
        return buf;
    }
};

struct HrRepResult {
    uint64_t seed = 0;
    int64_t s_ms = 0;
    metrics::MetricsReport mp;  // max-card popular vs stable
    metrics::MetricsReport mm;  // popular-among-max-card vs stable
};

struct HrlqRepResult {
    uint64_t seed = 0;
    bool ok = false;
    int64_t def_ms = 0, s_mp = 0, bpc = 0, br = 0, r1 = 0;
    std::optional<int64_t> s_me;
};

inline HrRepResult run_hr_rep(const ExperimentConfig& cfg, int32_t H, uint64_t seed) {
    gen::GeneratorParams p;
    p.model = cfg.model;
    p.n_residents = cfg.n_residents;
    p.n_hospitals = H;
    p.pref_len = cfg.pref_len;
    p.capacity = cfg.capacity;
    p.seed = seed;
    Instance g = gen::generate(p);
    Matching ms = hr::gs_resident(g);
    Matching mp = hr::max_card_popular(g);
    Matching mm = hr::popular_among_maxcard(g);
    HrRepResult out;
    out.seed = seed;
    out.s_ms = matching_size(ms);
    out.mp = metrics::paired_report(g, mp, ms);
    out.mm = metrics::paired_report(g, mm, ms);
    return out;
}

inline HrlqRepResult run_hrlq_rep(const ExperimentConfig& cfg, int32_t H, uint64_t seed) {
    gen::GeneratorParams p;
    p.model = cfg.model;
    p.n_residents = cfg.n_residents;
    p.n_hospitals = H;
    p.pref_len = cfg.pref_len;
    p.capacity = cfg.capacity;
    p.seed = seed;
    HrlqRepResult out;
    out.seed = seed;
    Instance g;
    try {
        g = gen::gen_hrlq_filtered(p, cfg.max_retries);
    } catch (const gen::RetriesExhausted&) {
        return out;  // ok stays false; the row reports NA
    }
    out.ok = true;
    Matching ms = hr::gs_hospital(g);  // stable when quotas are ignored
    out.def_ms = metrics::deficiency(g, ms);
    Matching mp = hrlq::hrlq_popular(g);
    metrics::MetricsReport rep = metrics::report(g, mp);
    out.s_mp = rep.size;
    out.bpc = rep.bpc;
    out.br = rep.br;
    out.r1 = rep.r1;
    if (auto me = envyfree::maximal_envy_free(g)) out.s_me = matching_size(*me);
    return out;
}

// Runs fn(rep) for rep = 0..reps-1 on a small pool; results land in a vector
// indexed by rep so aggregation order never depends on scheduling.
template <class Fn, class Res>
inline void parallel_reps(int reps, int threads, std::vector<Res>& out, Fn fn) {
    out.resize(reps);
    int tn = threads > 0 ? threads
                         : static_cast<int>(std::thread::hardware_concurrency());
    if (tn < 1) tn = 1;
    if (tn > reps) tn = reps;
    if (tn == 1) {
        for (int i = 0; i < reps; ++i) out[i] = fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(tn);
    std::vector<std::thread> pool;
    for (int t = 0; t < tn; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = next.fetch_add(1); i < reps; i = next.fetch_add(1))
                    out[i] = fn(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail

// Seed layout: seed_base + grid_index*10^6 + rep, recorded in per-instance
// rows so any cell of a summary can be regenerated in isolation.
inline uint64_t rep_seed(uint64_t seed_base, int grid_index, int rep) {
    return seed_base + static_cast<uint64_t>(grid_index) * 1000000ull +
           static_cast<uint64_t>(rep);
}

inline std::string run_experiment(const ExperimentConfig& cfg) {
    using namespace detail;
    if (cfg.reps < 1) throw InvalidParams("reps must be >= 1");
    if (cfg.h_list.empty()) throw InvalidParams("grid of |H| values must be non-empty");
    std::ostringstream os;
    const std::string model = cfg.model == gen::Model::Master ? "master" : "shuffle";
    const bool hr_track = cfg.track == Track::HR;

    auto prefix_hdr = [&](bool per_inst) {
        os << "track,model,n_residents,n_hospitals,pref_len,capacity,"
           << (per_inst ? "rep,seed" : "reps,ok_reps,seed_base");
    };
    auto prefix_row = [&](int32_t H, const std::string& tail) {
        os << (hr_track ? "hr" : "hrlq") << ',' << model << ',' << cfg.n_residents << ','
           << H << ',' << cfg.pref_len << ','
           << (cfg.capacity > 0 ? cfg.capacity
                                : std::max(1, cfg.n_residents / std::max(1, static_cast<int>(H))))
           << ',' << tail;
    };

    if (hr_track) {
        prefix_hdr(cfg.per_instance);
        os << ",s_ms,s_mp,delta_mp,bp_mp,delta1_mp,deltar_mp"
           << ",s_mm,delta_mm,bp_mm,delta1_mm,deltar_mm";
        if (cfg.variance && !cfg.per_instance) os << ",s_ms_var,delta_mp_var";
        os << '\n';
        for (int gi = 0; gi < static_cast<int>(cfg.h_list.size()); ++gi) {
            int32_t H = cfg.h_list[gi];
            std::vector<HrRepResult> res;
            parallel_reps(cfg.reps, cfg.threads, res, [&](int rep) {
                return run_hr_rep(cfg, H, rep_seed(cfg.seed_base, gi, rep));
            });
            if (cfg.per_instance) {
                for (int rep = 0; rep < cfg.reps; ++rep) {
                    const auto& r = res[rep];
                    prefix_row(H, std::to_string(rep) + "," + std::to_string(r.seed));
                    os << ',' << r.s_ms << ',' << r.mp.size << ','
                       << metrics::render2_or_na(r.mp.delta_size_pct) << ','
                       << metrics::render2_or_na(r.mp.bp_pct) << ','
                       << metrics::render2_or_na(r.mp.delta_r1_pct) << ','
                       << metrics::render2_or_na(r.mp.delta_votes_pct) << ','
                       << r.mm.size << ','
                       << metrics::render2_or_na(r.mm.delta_size_pct) << ','
                       << metrics::render2_or_na(r.mm.bp_pct) << ','
                       << metrics::render2_or_na(r.mm.delta_r1_pct) << ','
                       << metrics::render2_or_na(r.mm.delta_votes_pct) << '\n';
                }
            } else {
                MeanAcc s_ms, s_mp, d_mp, bp_mp, d1_mp, dr_mp;
                MeanAcc s_mm, d_mm, bp_mm, d1_mm, dr_mm;
                for (const auto& r : res) {
                    s_ms.add(r.s_ms);
                    s_mp.add(r.mp.size);
                    d_mp.add_opt(r.mp.delta_size_pct);
                    bp_mp.add_opt(r.mp.bp_pct);
                    d1_mp.add_opt(r.mp.delta_r1_pct);
                    dr_mp.add_opt(r.mp.delta_votes_pct);
                    s_mm.add(r.mm.size);
                    d_mm.add_opt(r.mm.delta_size_pct);
                    bp_mm.add_opt(r.mm.bp_pct);
                    d1_mm.add_opt(r.mm.delta_r1_pct);
                    dr_mm.add_opt(r.mm.delta_votes_pct);
                }
                prefix_row(H, std::to_string(cfg.reps) + "," + std::to_string(cfg.reps) +
                                  "," + std::to_string(cfg.seed_base));
                os << ',' << s_ms.mean2() << ',' << s_mp.mean2() << ',' << d_mp.mean2()
                   << ',' << bp_mp.mean2() << ',' << d1_mp.mean2() << ',' << dr_mp.mean2()
                   << ',' << s_mm.mean2() << ',' << d_mm.mean2() << ',' << bp_mm.mean2()
                   << ',' << d1_mm.mean2() << ',' << dr_mm.mean2();
                if (cfg.variance) os << ',' << s_ms.var2() << ',' << d_mp.var2();
                os << '\n';
            }
        }
        return os.str();
    }

    prefix_hdr(cfg.per_instance);
    if (cfg.per_instance)
        os << ",status,def_ms,s_mp,s_me,bpc_mp,br_mp,r1_mp";
    else
        os << ",def_ms,s_mp,s_me,me_reps,bpc_mp,br_mp,r1_mp";
    if (cfg.variance && !cfg.per_instance) os << ",def_ms_var,bpc_mp_var";
    os << '\n';
    for (int gi = 0; gi < static_cast<int>(cfg.h_list.size()); ++gi) {
        int32_t H = cfg.h_list[gi];
        std::vector<HrlqRepResult> res;
        parallel_reps(cfg.reps, cfg.threads, res, [&](int rep) {
            return run_hrlq_rep(cfg, H, rep_seed(cfg.seed_base, gi, rep));
        });
        if (cfg.per_instance) {
            for (int rep = 0; rep < cfg.reps; ++rep) {
                const auto& r = res[rep];
                prefix_row(H, std::to_string(rep) + "," + std::to_string(r.seed));
                if (!r.ok) {
                    os << ",retries_exhausted,NA,NA,NA,NA,NA,NA\n";
                    continue;
                }
                os << ",ok," << r.def_ms << ',' << r.s_mp << ','
                   << (r.s_me ? std::to_string(*r.s_me) : std::string("NA")) << ','
                   << r.bpc << ',' << r.br << ',' << r.r1 << '\n';
            }
        } else {
            MeanAcc def_ms, s_mp, s_me, bpc, br, r1;
            int ok = 0;
            for (const auto& r : res) {
                if (!r.ok) continue;
                ++ok;
                def_ms.add(r.def_ms);
                s_mp.add(r.s_mp);
                if (r.s_me) s_me.add(*r.s_me);
                bpc.add(r.bpc);
                br.add(r.br);
                r1.add(r.r1);
            }
            prefix_row(H, std::to_string(cfg.reps) + "," + std::to_string(ok) + "," +
                              std::to_string(cfg.seed_base));
            os << ',' << def_ms.mean2() << ',' << s_mp.mean2() << ',' << s_me.mean2()
               << ',' << s_me.n << ',' << bpc.mean2() << ',' << br.mean2() << ','
               << r1.mean2();
            if (cfg.variance) os << ',' << def_ms.var2() << ',' << bpc.var2();
            os << '\n';
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

struct FixtureReport {
    std::vector<std::string> lines;  // "PASS|FAIL  fixture  check  expected  got"
    int failures = 0;
};

namespace detail {

inline std::string show_matching(const Matching& m) {
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(m[i]);
    }
    return s + "]";
}

inline void check(FixtureReport& rep, const std::string& fixture, const std::string& what,
                  const std::string& expected, const std::string& got) {
    bool ok = expected == got;
    if (!ok) ++rep.failures;
    rep.lines.push_back((ok ? "PASS  " : "FAIL  ") + fixture + "  " + what +
                        "  expected=" + expected + "  got=" + got);
}

}  // namespace detail

// Every stored expectation of the bundled examples, re-derived end to end.
inline FixtureReport run_fixture_suite() {
    using namespace detail;
    using fixtures::ex_lower_quota;
    FixtureReport rep;

    {
        Instance g = ex_lower_quota();
        Matching m1 = hr::gs_hospital(g);
        check(rep, "lower-quota", "stable size (quotas ignored)", "2",
              std::to_string(matching_size(m1)));
        check(rep, "lower-quota", "stable deficiency", "1",
              std::to_string(metrics::deficiency(g, m1)));
        check(rep, "lower-quota", "popular feasible matching",
              show_matching(fixtures::ex_lower_quota_popular()),
              show_matching(hrlq::hrlq_popular(g)));
        auto yk = envyfree::yokoi(g);
        check(rep, "lower-quota", "envy-free core", show_matching(fixtures::ex_lower_quota_envy_free()),
              yk ? show_matching(*yk) : "none");
        auto me = envyfree::maximal_envy_free(g);
        check(rep, "lower-quota", "maximal envy-free",
              show_matching(fixtures::ex_lower_quota_max_envy_free()),
              me ? show_matching(*me) : "none");
        auto bp2 = metrics::blocking_pairs(g, fixtures::ex_lower_quota_popular());
        std::string bp2s;
        for (auto [r, h] : bp2) bp2s += "(" + std::to_string(r) + "," + std::to_string(h) + ")";
        check(rep, "lower-quota", "blocking pairs of popular", "(1,0)", bp2s);
        auto bp3 = metrics::blocking_pairs(g, fixtures::ex_lower_quota_alt());
        std::string bp3s;
        for (auto [r, h] : bp3) bp3s += "(" + std::to_string(r) + "," + std::to_string(h) + ")";
        check(rep, "lower-quota", "blocking pairs of alternative", "(0,0)", bp3s);
    }
    {
        Instance g = fixtures::ex_size_vs_rank1();
        Matching ms = hr::gs_resident(g);
        check(rep, "size-vs-rank1", "stable matching (unique)",
              show_matching(fixtures::ex_size_vs_rank1_stable()), show_matching(ms));
        check(rep, "size-vs-rank1", "stable rank-1 count", "3",
              std::to_string(metrics::rank1_count(g, ms)));
        Matching mp = hr::max_card_popular(g);
        check(rep, "size-vs-rank1", "max-card popular matching",
              show_matching(fixtures::ex_size_vs_rank1_popular()), show_matching(mp));
        check(rep, "size-vs-rank1", "popular rank-1 count", "2",
              std::to_string(metrics::rank1_count(g, mp)));
        check(rep, "size-vs-rank1", "vote margin stable-vs-popular", "1",
              std::to_string(metrics::resident_vote_margin(g, ms, mp)));
        auto cert = oracle::is_popular(g, mp, oracle::Domain::MaxCardinalityMatchings);
        check(rep, "size-vs-rank1", "popular among largest", "popular",
              cert.popular ? "popular" : "defeated");
    }
    {
        Instance g = fixtures::ex_size_gap();
        Matching ms = hr::gs_resident(g);
        check(rep, "size-gap", "stable size", "4", std::to_string(matching_size(ms)));
        check(rep, "size-gap", "stable has no blocking pair", "0",
              std::to_string(metrics::blocking_pairs(g, ms).size()));
        Matching mp = hr::max_card_popular(g);
        check(rep, "size-gap", "max-card popular size", "5",
              std::to_string(matching_size(mp)));
        check(rep, "size-gap", "maximum matching size", "5",
              std::to_string(oracle::max_matching_size(g)));
        auto cert = oracle::is_popular(g, mp, oracle::Domain::MaxCardinalityMatchings);
        check(rep, "size-gap", "popular among largest", "popular",
              cert.popular ? "popular" : "defeated");
    }
    {
        Instance g = fixtures::ex_no_envy_free();
        auto yk = envyfree::yokoi(g);
        check(rep, "no-envy-free", "envy-free core", "none",
              yk ? show_matching(*yk) : "none");
        bool any = false;
        for (const auto& m : oracle::enumerate_matchings(g, oracle::Domain::FeasibleMatchings))
            if (oracle::is_envy_free(g, m)) any = true;
        check(rep, "no-envy-free", "enumeration finds envy-free", "none",
              any ? "some" : "none");
    }
    return rep;
}

}  // namespace hrmatch::harness
