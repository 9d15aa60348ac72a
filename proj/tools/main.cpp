#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "latticeflow/observables.hpp"
#include "latticeflow/verify.hpp"
#include "run_spec.hpp"

using namespace lf;
using lf::cli::json;
using lf::cli::RunSpec;

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void apply_thread_cap() {
    const char* env = std::getenv("LATTICEFLOW_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    long t = std::strtol(env, &end, 10);
    if (*end || t < 1) throw Usage("LATTICEFLOW_THREADS must be a positive integer");
    omp_set_num_threads((int)std::min<long>(t, omp_get_max_threads()));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Usage("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Config from a manifest: a JSON manifest or a CSV whose first line is "# manifest {...}".
json config_from_manifest(const std::string& path) {
    std::string text = slurp(path);
    const std::string tag = "# manifest ";
    if (text.rfind(tag, 0) == 0) text = text.substr(tag.size(), text.find('\n') - tag.size());
    json m;
    try {
        m = json::parse(text);
    } catch (const json::exception&) {
        throw Error(Err::BadInput, path + " is not a manifest");
    }
    if (!m.contains("config")) throw Error(Err::BadInput, path + " has no config entry");
    return m["config"];
}

// Options shared by the model-driven subcommands. Only options given on the command line
// end up in the flag object, so config files and flags can be merged and checked for conflicts.
struct ModelOpts {
    std::string config_path, manifest_path, out_path;
    double x, a, b, c, pa, pb, q, lambda, rho;
    int n, k, chains, glauber_passes, cluster_pairs, m, block;
    long sweeps, burn_in, thin;
    uint64_t seed, budget;
    std::string model, bc, domain, observable;
    std::vector<std::pair<CLI::Option*, std::string>> opts;

    template <class T>
    void add(CLI::App* app, const std::string& flag, T& v, const std::string& key, const std::string& help) {
        opts.push_back({app->add_option(flag, v, help), key});
    }

    void attach(CLI::App* app, bool with_out) {
        app->add_option("--config", config_path, "JSON config file");
        app->add_option("--manifest", manifest_path, "rerun from a manifest (JSON, or CSV with a manifest line)");
        if (with_out) app->add_option("--out", out_path, "output file (default stdout); a .manifest.json sidecar is written next to it");
        add(app, "--model", model, "model", "loop-o2 | six-vertex | fk | bkw");
        add(app, "--x", x, "x", "loop O(2) edge weight");
        add(app, "--a", a, "a", "six-vertex weight a");
        add(app, "--b", b, "b", "six-vertex weight b");
        add(app, "--c", c, "c", "six-vertex weight c");
        add(app, "--pa", pa, "pa", "FK edge probability on class a");
        add(app, "--pb", pb, "pb", "FK edge probability on class b");
        add(app, "--q", q, "q", "FK cluster weight");
        add(app, "--lambda", lambda, "lambda", "BKW parameter in [0, pi/3]");
        add(app, "--n", n, "n", "torus size / annulus scale / ball radius");
        add(app, "--k", k, "k", "BKW winding index");
        add(app, "--domain", domain, "domain", "domain as JSON, e.g. {\"type\":\"hex_ball\",\"radius\":4}");
        add(app, "--bc", bc, "bc", "boundary: r+w+, r+, w-, free ... (fk: free|wired)");
        add(app, "--seed", seed, "seed", "RNG seed");
        add(app, "--sweeps", sweeps, "sweeps", "sweeps per chain");
        add(app, "--burn-in", burn_in, "burn_in", "discarded sweeps");
        add(app, "--thin", thin, "thin", "record every thin-th sweep");
        add(app, "--chains", chains, "chains", "independent chains (RNG streams 0..chains-1)");
        add(app, "--glauber-passes", glauber_passes, "glauber_passes", "Glauber passes per sweep");
        add(app, "--cluster-pairs", cluster_pairs, "cluster_pairs", "cluster sweep pairs per sweep");
        add(app, "--budget", budget, "budget", "enumeration budget");
        add(app, "--observable", observable, "observable", "crossing | alpha | variance | decomposition");
        add(app, "--m", m, "m", "rhombus size");
        add(app, "--rho", rho, "rho", "alpha_n ball ratio (> 2)");
        add(app, "--block", block, "block", "jackknife block size");
    }

    RunSpec resolve() const {
        json flags = json::object();
        for (auto& [opt, key] : opts) {
            if (!opt->count()) continue;
            std::string v = opt->as<std::string>();
            if (key == "domain") {
                try {
                    flags[key] = json::parse(v);
                } catch (const json::exception&) {
                    throw Error(Err::BadInput, "--domain is not valid JSON");
                }
            } else if (key == "model" || key == "bc" || key == "observable") {
                flags[key] = v;
            } else if (key == "seed" || key == "budget") {
                flags[key] = opt->as<uint64_t>();
            } else if (key == "n" || key == "k" || key == "chains" || key == "glauber_passes" ||
                       key == "cluster_pairs" || key == "m" || key == "block" || key == "sweeps" ||
                       key == "burn_in" || key == "thin") {
                flags[key] = opt->as<long>();
            } else {
                flags[key] = opt->as<double>();
            }
        }
        if (!config_path.empty() && !manifest_path.empty()) throw Error(Err::ConflictingFlags, "--config and --manifest are exclusive");
        json cfg = json::object();
        if (!manifest_path.empty()) cfg = config_from_manifest(manifest_path);
        else if (!config_path.empty()) {
            try {
                cfg = json::parse(slurp(config_path));
            } catch (const json::exception& e) {
                throw Error(Err::BadInput, std::string("config is not valid JSON: ") + e.what());
            }
        }
        return lf::cli::parse_config(cfg, flags);
    }
};

void warn(const RunSpec& s) {
    for (auto& w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

// Writes `body` to out_path (or stdout) and the wall-clock manifest sidecar next to it.
void emit(const RunSpec& s, const std::string& out_path, const std::string& body) {
    if (out_path.empty()) {
        std::fwrite(body.data(), 1, body.size(), stdout);
        return;
    }
    std::ofstream(out_path, std::ios::binary) << body;
    std::ofstream(out_path + ".manifest.json") << lf::cli::manifest(s, true).dump(2) << "\n";
}

std::string manifest_line(const RunSpec& s) { return "# manifest " + lf::cli::manifest(s, false).dump() + "\n"; }

json cplx_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

int cmd_enumerate(const ModelOpts& o) {
    RunSpec s = o.resolve();
    warn(s);
    json out = {{"manifest", lf::cli::manifest(s, false)}};
    ExactDistribution ex;
    if (s.model == "loop-o2") {
        ex = exact_loop_spins(hex_domain_from_json(s.domain.dump()), s.x, s.boundary(), s.budget);
    } else if (s.model == "six-vertex") {
        ex = exact_six_vertex(square_domain_from_json(s.domain.dump()), {s.a, s.b, s.c}, s.boundary(), s.budget);
    } else if (s.model == "fk") {
        ex = exact_fk(fk_graph_black(square_domain_from_json(s.domain.dump())), {s.pa, s.pb, s.q}, s.bc == "wired",
                      s.budget);
    } else {
        BKWResult r = bkw_partition_functions(s.torus_n, s.k, {s.lambda}, s.budget);
        out["z_n"] = cplx_json(r.z_n);
        out["z_nk"] = cplx_json(r.z_nk);
        emit(s, o.out_path, out.dump(2) + "\n");
        return 0;
    }
    out["Z"] = ex.Z;
    out["num_states"] = ex.states.size();
    json st = json::array();
    for (size_t i = 0; i < ex.states.size(); ++i) st.push_back({ex.states[i], ex.probs[i]});
    out["states"] = st;
    emit(s, o.out_path, out.dump(2) + "\n");
    return 0;
}

int central_square(const SquareDomain& d) {
    int u = d.square_index({0, 0});
    return u >= 0 ? u : 0;
}

// One CSV block per chain: sweep_index plus the model's per-sample observables.
std::string sample_chain(const RunSpec& s, int chain) {
    std::string out;
    char buf[256];
    ChainConfig cfg = s.chain_config(chain);
    if (s.model == "loop-o2") {
        HexDomain d = hex_domain_from_json(s.domain.dump());
        int u = std::max(d.face_index({0, 0}), 0);
        LoopChain ch(d, s.x, s.boundary());
        run_chain(ch, cfg, [&](long t, LoopChain& c, Rng&) {
            auto h = spins_to_height(d, c.s);
            auto w = loops_of_spins(d, c.s);
            int edges = 0;
            for (char e : w.edge) edges += e;
            std::snprintf(buf, sizeof buf, "%d,%ld,%d,%d,%d\n", chain, t, h.h[u], loops_around(d, w, u), edges);
            out += buf;
        });
    } else if (s.model == "six-vertex") {
        SquareDomain d = square_domain_from_json(s.domain.dump());
        int u = central_square(d);
        SixVChain ch(d, {s.a, s.b, s.c}, s.boundary());
        run_chain(ch, cfg, [&](long t, SixVChain& c, Rng&) {
            auto h = spins_to_height_6v(d, c.s);
            long sq = 0;
            for (int v : h.h) sq += (long)v * v;
            std::snprintf(buf, sizeof buf, "%d,%ld,%d,%ld\n", chain, t, h.h[u], sq);
            out += buf;
        });
    } else {
        FKGraph g = fk_graph_black(square_domain_from_json(s.domain.dump()));
        FKParams p{s.pa, s.pb, s.q};
        FKChain ch(g, p, s.bc == "wired");
        run_chain(ch, cfg, [&](long t, FKChain& c, Rng&) {
            int open = 0;
            for (char e : c.c.eta) open += e;
            std::snprintf(buf, sizeof buf, "%d,%ld,%d,%d\n", chain, t, open, fk_clusters(g, c.c));
            out += buf;
        });
    }
    return out;
}

int cmd_sample(const ModelOpts& o) {
    RunSpec s = o.resolve();
    if (s.model == "bkw") throw Usage("sample does not apply to the bkw model; use bkw-check");
    warn(s);
    std::string body = manifest_line(s);
    if (s.model == "loop-o2") body += "chain,sweep_index,h_center,loops_around_center,loop_edges\n";
    else if (s.model == "six-vertex") body += "chain,sweep_index,h_center,sum_h_squared\n";
    else body += "chain,sweep_index,open_edges,clusters\n";
    std::vector<std::string> parts(s.chains);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < s.chains; ++i) parts[i] = sample_chain(s, i);
    for (auto& p : parts) body += p;
    emit(s, o.out_path, body);
    return 0;
}

std::string measure_chain(const RunSpec& s, int chain) {
    ChainConfig cfg = s.chain_config(chain);
    std::string out, name = "chain=" + std::to_string(chain);
    auto obs = s.observable.empty() ? std::string(s.model == "six-vertex" ? "decomposition" : "variance") : s.observable;
    if (obs == "decomposition") {
        if (s.model != "six-vertex") throw Usage("decomposition needs --model six-vertex");
        auto r = variance_decomposition(square_domain_from_json(s.domain.dump()), {s.a, s.b, s.c}, cfg);
        out += csv_row("var_h", name, 0, r.var_h);
        out += csv_row("n_minus_1", name, 0, r.n_minus_1);
        out += csv_row("var_start", name, 0, r.var_start);
        out += csv_row("rhs", name, 0, r.rhs);
        return out;
    }
    if (s.model != "loop-o2") throw Usage(obs + " needs --model loop-o2");
    if (obs == "crossing") {
        out += csv_row("crossing_h", name, s.m, crossing_probability(s.x, s.m, cfg).est);
    } else if (obs == "alpha") {
        out += csv_row("alpha", name, s.torus_n, alpha_n(s.torus_n, s.rho, s.x, cfg).est);
    } else {
        auto r = center_variance(s.torus_n, s.x, cfg);
        out += csv_row("var_h", name, s.torus_n, r.var_h);
        out += csv_row("loops_around", name, s.torus_n, r.loops);
    }
    return out;
}

int cmd_measure(const ModelOpts& o) {
    RunSpec s = o.resolve();
    if (s.model == "fk" || s.model == "bkw") throw Usage("measure supports loop-o2 and six-vertex");
    warn(s);
    std::string body = manifest_line(s) + csv_header();
    std::vector<std::string> parts(s.chains);
    std::vector<std::string> errs(s.chains);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < s.chains; ++i) {
        try {
            parts[i] = measure_chain(s, i);
        } catch (const std::exception& e) {
            errs[i] = e.what();
        }
    }
    for (int i = 0; i < s.chains; ++i)
        if (!errs[i].empty()) throw Usage(errs[i]);
    for (auto& p : parts) body += p;
    emit(s, o.out_path, body);
    return 0;
}

int cmd_bkw(int n, int k, double lambda, uint64_t budget) {
    RunSpec s = lf::cli::parse_config({{"model", "bkw"}, {"n", n}, {"k", k}, {"lambda", lambda}, {"budget", budget}});
    BKWParams p{s.lambda};
    BKWResult r = bkw_partition_functions(s.torus_n, s.k, p, s.budget);
    std::complex<double> spin = torus_spin_observable(s.torus_n, s.k, p, s.budget);
    double err = std::abs(r.z_nk / r.z_n - spin);
    json out = {{"n", s.torus_n}, {"k", s.k}, {"lambda", s.lambda}, {"z_n", cplx_json(r.z_n)},
                {"z_nk", cplx_json(r.z_nk)}, {"spin_obs", cplx_json(spin)}, {"abs_error", err},
                {"tolerance", 1e-10}, {"pass", err < 1e-10}};
    std::cout << out.dump(2) << "\n";
    return err < 1e-10 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latticeflow: loop O(2), six-vertex and random-cluster samplers and exact oracles"};
    app.set_version_flag("--version", lf::cli::kToolVersion);
    app.require_subcommand(1);

    ModelOpts enum_o, sample_o, measure_o;
    auto* en = app.add_subcommand("enumerate", "exact distribution by exhaustive enumeration (JSON)");
    enum_o.attach(en, true);
    auto* sa = app.add_subcommand("sample", "run Markov chains and emit per-sweep observables (CSV)");
    sample_o.attach(sa, true);
    auto* me = app.add_subcommand("measure", "estimate an observable with jackknife errors (CSV)");
    measure_o.attach(me, true);

    auto* ve = app.add_subcommand("verify", "run the acceptance checks");
    std::string level = "quick", mutation, report;
    uint64_t vseed = VerifyOptions{}.seed;
    std::vector<int> only;
    ve->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    ve->add_option("--mutate", mutation, "corrupt one ingredient")->check(CLI::IsMember(known_mutations()));
    ve->add_option("--report", report, "write the JSON report here (default stdout)");
    ve->add_option("--only", only, "criterion ids to run");
    ve->add_option("--seed", vseed, "base seed");

    auto* bk = app.add_subcommand("bkw-check", "compare the torus partition-function ratio with the spin observable");
    int bn = 1, bk_k = 1;
    double blam = 0;
    uint64_t bbudget = kDefaultBudget;
    bk->add_option("--n", bn, "torus size (2n x 2n)");
    bk->add_option("--k", bk_k, "winding index");
    bk->add_option("--lambda", blam, "lambda in [0, pi/3]");
    bk->add_option("--budget", bbudget, "enumeration budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        apply_thread_cap();
        if (*en) return cmd_enumerate(enum_o);
        if (*sa) return cmd_sample(sample_o);
        if (*me) return cmd_measure(measure_o);
        if (*bk) return cmd_bkw(bn, bk_k, blam, bbudget);
        if (*ve) {
            VerifyOptions opt;
            opt.level = level == "full" ? Level::Full : Level::Quick;
            opt.mutation = mutation;
            opt.only = only;
            opt.seed = vseed;
            int failed = 0;
            auto rs = run_criteria(opt, [&](const CheckResult& r) {
                std::fprintf(stderr, "%s\n", format_line(r).c_str());
                failed += !r.passed;
            });
            std::string js = report_json(rs, opt);
            if (report.empty()) std::cout << js << "\n";
            else std::ofstream(report) << js << "\n";
            for (auto& r : rs)
                if (!r.passed) std::fprintf(stderr, "failed: %d %s\n", r.id, r.name.c_str());
            return failed ? 1 : 0;
        }
    } catch (const Usage& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
