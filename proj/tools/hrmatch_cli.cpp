// Command-line front end: generate instances, run solvers, compute metrics,
// verify properties against the brute-force oracle, run experiment grids,
// ingest external HRC files, and run the bundled fixture suite.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible instance.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include "hrmatch/hrmatch.hpp"

using namespace hrmatch;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot write " + out_path);
    f << text;
}

struct Options {
    uint64_t seed = 1;
    std::string out;
    std::string format = "csv";

    // generate / experiment
    std::string model = "master";
    int residents = 0, hospitals = 0, pref_len = 0, capacity = 0;
    bool with_lq = false, filtered = false;
    int max_retries = 30;
    std::string track = "hrlq";
    std::vector<int32_t> h_list;
    int reps = 10, threads = 0;
    bool per_instance = false, variance = false;

    // solve / metrics / verify
    std::string instance_path, matching_path, baseline_path, algo, property;
    std::string trace_path, witness_path, input_path;
    int level_cap = 0;
};

gen::GeneratorParams make_params(const Options& o, int32_t H, uint64_t seed) {
    gen::GeneratorParams p;
    p.model = o.model == "shuffle" ? gen::Model::Shuffle : gen::Model::Master;
    p.n_residents = o.residents;
    p.n_hospitals = H;
    p.pref_len = o.pref_len;
    p.capacity = o.capacity;
    p.seed = seed;
    return p;
}

int cmd_generate(const Options& o) {
    gen::GeneratorParams p = make_params(o, o.hospitals, o.seed);
    Instance g;
    if (o.filtered)
        g = gen::gen_hrlq_filtered(p, o.max_retries);
    else if (o.with_lq)
        g = gen::assign_lower_quotas(gen::generate(p), p);
    else
        g = gen::generate(p);
    std::string hdr = "# model=" + o.model + " residents=" + std::to_string(p.n_residents) +
                      " hospitals=" + std::to_string(p.n_hospitals) +
                      " k=" + std::to_string(p.pref_len) +
                      " capacity=" + std::to_string(gen::effective_capacity(p)) +
                      " seed=" + std::to_string(p.seed) +
                      (o.filtered ? " filtered=feasible-no-stable" : "") + "\n";
    emit(o.out, hdr + io::serialize_instance(g));
    return 0;
}

int cmd_solve(const Options& o) {
    Instance g = io::parse_instance(slurp(o.instance_path));
    Matching m;
    std::string status;
    if (o.algo == "gs-res") {
        m = hr::gs_resident(g);
    } else if (o.algo == "gs-hosp") {
        m = hr::gs_hospital(g);
    } else if (o.algo == "max-popular") {
        m = hr::max_card_popular(g);
    } else if (o.algo == "popular-max") {
        m = hr::popular_among_maxcard(g, o.level_cap > 0 ? o.level_cap : -1);
    } else if (o.algo == "hrlq-popular") {
        if (o.trace_path.empty()) {
            m = hrlq::hrlq_popular(g);
        } else {
            hrlq::Result res = hrlq::trace(g);
            m = res.matching;
            std::string log;
            for (const auto& e : res.trace) {
                static const char* names[] = {"propose", "accept", "reject", "bump",
                                              "level-up"};
                log += std::string(names[static_cast<int>(e.kind)]) + " h" +
                       std::to_string(e.hospital + 1);
                if (e.resident >= 0) log += " r" + std::to_string(e.resident + 1);
                if (e.kind == hrlq::TraceEvent::Kind::Accept ||
                    e.kind == hrlq::TraceEvent::Kind::LevelUp)
                    log += " level=" + std::to_string(e.detail);
                if (e.kind == hrlq::TraceEvent::Kind::Bump)
                    log += " by=h" + std::to_string(e.detail + 1);
                log += "\n";
            }
            std::ofstream f(o.trace_path, std::ios::binary);
            if (!f) throw Error("cannot write " + o.trace_path);
            f << log;
        }
    } else if (o.algo == "envy-free-yokoi" || o.algo == "envy-free-maximal") {
        auto res = o.algo == "envy-free-yokoi" ? envyfree::yokoi(g)
                                               : envyfree::maximal_envy_free(g);
        if (!res) {
            emit(o.out, "status=NO_ENVY_FREE\n");
            return 0;
        }
        m = *res;
    } else {
        std::cerr << "unknown --algo " << o.algo << "\n";
        return 1;
    }
    emit(o.out, io::serialize_matching(g, m));
    return 0;
}

int cmd_metrics(const Options& o) {
    Instance g = io::parse_instance(slurp(o.instance_path));
    Matching m = io::parse_matching(g, slurp(o.matching_path));
    std::ostringstream os;
    if (o.baseline_path.empty()) {
        metrics::MetricsReport rep = metrics::report(g, m);
        os << "size,bpc,br,r1,deficiency\n"
           << rep.size << ',' << rep.bpc << ',' << rep.br << ',' << rep.r1 << ','
           << rep.deficiency << '\n';
    } else {
        Matching base = io::parse_matching(g, slurp(o.baseline_path));
        metrics::MetricsReport rep = metrics::paired_report(g, m, base);
        os << "size,bpc,br,r1,deficiency,delta_size_pct,delta_r1_pct,delta_votes_pct,"
              "bp_pct\n"
           << rep.size << ',' << rep.bpc << ',' << rep.br << ',' << rep.r1 << ','
           << rep.deficiency << ',' << metrics::render2_or_na(rep.delta_size_pct) << ','
           << metrics::render2_or_na(rep.delta_r1_pct) << ','
           << metrics::render2_or_na(rep.delta_votes_pct) << ','
           << metrics::render2_or_na(rep.bp_pct) << '\n';
    }
    emit(o.out, os.str());
    return 0;
}

int cmd_verify(const Options& o) {
    Instance g = io::parse_instance(slurp(o.instance_path));
    Matching m = io::parse_matching(g, slurp(o.matching_path));
    bool verdict = false;
    std::string witness;
    if (o.property == "stable") {
        verdict = is_valid(g, m) && metrics::blocking_pairs(g, m).empty();
    } else if (o.property == "feasible") {
        verdict = is_feasible(g, m);
    } else if (o.property == "popular-all" || o.property == "popular-feasible") {
        auto cert = oracle::is_popular(g, m,
                                       o.property == "popular-all"
                                           ? oracle::Domain::AllMatchings
                                           : oracle::Domain::FeasibleMatchings);
        verdict = cert.popular;
        if (!cert.popular && cert.witness)
            witness = "# challenger margin=" + std::to_string(cert.witness_margin) +
                      "\n" + io::serialize_matching(g, *cert.witness);
    } else if (o.property == "envy-free") {
        verdict = is_valid(g, m) && oracle::is_envy_free(g, m);
    } else if (o.property == "maximal-envy-free") {
        verdict = oracle::is_maximal_envy_free(g, m);
    } else {
        std::cerr << "unknown --property " << o.property << "\n";
        return 1;
    }
    if (!witness.empty() && !o.witness_path.empty()) {
        std::ofstream f(o.witness_path, std::ios::binary);
        if (!f) throw Error("cannot write " + o.witness_path);
        f << witness;
    }
    emit(o.out, "property=" + o.property + " verdict=" + (verdict ? "true" : "false") +
                    "\n");
    return 0;
}

int cmd_experiment(const Options& o) {
    harness::ExperimentConfig cfg;
    cfg.track = o.track == "hr" ? harness::Track::HR : harness::Track::HRLQ;
    cfg.model = o.model == "shuffle" ? gen::Model::Shuffle : gen::Model::Master;
    cfg.n_residents = o.residents;
    cfg.h_list = o.h_list;
    cfg.pref_len = o.pref_len;
    cfg.capacity = o.capacity;
    cfg.reps = o.reps;
    cfg.seed_base = o.seed;
    cfg.max_retries = o.max_retries;
    cfg.per_instance = o.per_instance;
    cfg.variance = o.variance;
    cfg.threads = o.threads;
    emit(o.out, harness::run_experiment(cfg));
    return 0;
}

int cmd_ingest(const Options& o) {
    io::IngestResult res = io::ingest_hrc(slurp(o.input_path));
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    emit(o.out, io::serialize_instance(res.instance));
    return 0;
}

int cmd_fixtures(const Options& o) {
    harness::FixtureReport rep = harness::run_fixture_suite();
    std::string text;
    for (const auto& l : rep.lines) text += l + "\n";
    text += std::to_string(rep.lines.size() - rep.failures) + "/" +
            std::to_string(rep.lines.size()) + " fixture checks passed\n";
    emit(o.out, text);
    return rep.failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hospital-Residents matching toolkit"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--seed", o.seed, "Base RNG seed")->capture_default_str();
    app.add_option("--out", o.out, "Output file (default stdout)");
    app.add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"csv"}))
        ->capture_default_str();

    auto* g = app.add_subcommand("generate", "Generate a synthetic instance");
    g->add_option("--model", o.model, "master|shuffle")
        ->check(CLI::IsMember({"master", "shuffle"}))
        ->capture_default_str();
    g->add_option("--residents", o.residents, "Number of residents")->required();
    g->add_option("--hospitals", o.hospitals, "Number of hospitals")->required();
    g->add_option("-k,--pref-len", o.pref_len, "Preference list length")->required();
    g->add_option("--capacity", o.capacity, "Uniform capacity (default |R|/|H|)");
    g->add_flag("--lq", o.with_lq, "Assign lower quotas");
    g->add_flag("--filtered", o.filtered,
                "Retry until the instance is feasible with no stable matching "
                "(implies --lq)");
    g->add_option("--max-retries", o.max_retries, "Filter attempts")
        ->capture_default_str();

    auto* s = app.add_subcommand("solve", "Run a solver on an instance");
    s->add_option("--instance", o.instance_path, "Instance file")->required();
    s->add_option("--algo", o.algo,
                  "gs-res|gs-hosp|max-popular|popular-max|hrlq-popular|"
                  "envy-free-yokoi|envy-free-maximal")
        ->required();
    s->add_option("--level-cap", o.level_cap, "Level cap for popular-max");
    s->add_option("--trace", o.trace_path, "Write hrlq-popular event log here");

    auto* m = app.add_subcommand("metrics", "Metrics of a matching as one CSV row");
    m->add_option("--instance", o.instance_path, "Instance file")->required();
    m->add_option("--matching", o.matching_path, "Matching file")->required();
    m->add_option("--baseline", o.baseline_path, "Baseline matching for percentages");

    auto* v = app.add_subcommand("verify", "Oracle-check a property of a matching");
    v->add_option("--instance", o.instance_path, "Instance file")->required();
    v->add_option("--matching", o.matching_path, "Matching file")->required();
    v->add_option("--property", o.property,
                  "stable|feasible|popular-all|popular-feasible|envy-free|"
                  "maximal-envy-free")
        ->required();
    v->add_option("--witness", o.witness_path, "Write defeating challenger here");

    auto* e = app.add_subcommand("experiment", "Run a seeded experiment grid to CSV");
    e->add_option("--track", o.track, "hr|hrlq")
        ->check(CLI::IsMember({"hr", "hrlq"}))
        ->capture_default_str();
    e->add_option("--model", o.model, "master|shuffle")
        ->check(CLI::IsMember({"master", "shuffle"}))
        ->capture_default_str();
    e->add_option("--residents", o.residents, "Number of residents")->required();
    e->add_option("--hospitals", o.h_list, "Grid of |H| values")
        ->required()
        ->delimiter(',');
    e->add_option("-k,--pref-len", o.pref_len, "Preference list length")->required();
    e->add_option("--capacity", o.capacity, "Uniform capacity (default |R|/|H|)");
    e->add_option("--reps", o.reps, "Instances per grid point")->capture_default_str();
    e->add_option("--max-retries", o.max_retries, "HRLQ filter attempts")
        ->capture_default_str();
    e->add_option("--threads", o.threads, "Worker threads (0 = auto)");
    e->add_flag("--per-instance", o.per_instance, "Emit one row per instance");
    e->add_flag("--variance", o.variance, "Append sample-variance columns");

    auto* i = app.add_subcommand("ingest-hrc", "Convert an HRC file to HRLQ v1");
    i->add_option("--input", o.input_path, "HRC file")->required();

    auto* f = app.add_subcommand("fixtures", "Run the bundled fixture suite");
    // Let --seed/--out/--format appear after the subcommand as well.
    for (CLI::App* sc : {g, s, m, v, e, i, f}) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return 1;
    }

    try {
        if (g->parsed()) return cmd_generate(o);
        if (s->parsed()) return cmd_solve(o);
        if (m->parsed()) return cmd_metrics(o);
        if (v->parsed()) return cmd_verify(o);
        if (e->parsed()) return cmd_experiment(o);
        if (i->parsed()) return cmd_ingest(o);
        return cmd_fixtures(o);
    } catch (const InfeasibleInstance& ex) {
        std::cerr << "infeasible: " << ex.what() << "\n";
        return 3;
    } catch (const gen::InfeasibleQuotaBudget& ex) {
        std::cerr << "infeasible: " << ex.what() << "\n";
        return 3;
    } catch (const gen::RetriesExhausted& ex) {
        std::cerr << "infeasible: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
