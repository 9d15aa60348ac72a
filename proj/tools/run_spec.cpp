#include "run_spec.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <set>

#include "latticeflow/lattice.hpp"
#include "latticeflow/rng.hpp"

namespace lf::cli {

namespace {

const std::set<std::string> kCommon = {"model", "domain", "bc", "seed", "sweeps", "burn_in", "thin", "chains",
                                       "glauber_passes", "cluster_pairs", "budget", "observable", "m", "rho",
                                       "block", "n"};
const std::set<std::string> kLoop = {"x"};
const std::set<std::string> kSix = {"a", "b", "c"};
const std::set<std::string> kFK = {"pa", "pb", "q"};
const std::set<std::string> kBKW = {"lambda", "k"};

void range(bool ok, const std::string& what) {
    if (!ok) throw Error(Err::OutOfRange, what);
}

}  // namespace

RunSpec parse_config(const json& config, const json& flags) {
    if (!config.is_object() || !flags.is_object()) throw Error(Err::BadInput, "config must be a JSON object");
    json j = config;
    for (auto it = flags.begin(); it != flags.end(); ++it) {
        if (j.contains(it.key()) && j[it.key()] != it.value())
            throw Error(Err::ConflictingFlags, "'" + it.key() + "' given in the config and as a flag with different values");
        j[it.key()] = it.value();
    }
    RunSpec s;
    s.model = j.value("model", std::string("loop-o2"));
    const std::set<std::string>* own = nullptr;
    if (s.model == "loop-o2") own = &kLoop;
    else if (s.model == "six-vertex") own = &kSix;
    else if (s.model == "fk") own = &kFK;
    else if (s.model == "bkw") own = &kBKW;
    else throw Error(Err::OutOfRange, "unknown model '" + s.model + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (kCommon.count(key) || own->count(key)) continue;
        if (kLoop.count(key) || kSix.count(key) || kFK.count(key) || kBKW.count(key))
            throw Error(Err::ConflictingFlags, "'" + key + "' does not apply to model " + s.model);
        throw Error(Err::UnknownField, "unknown config field '" + key + "'");
    }
    try {
        s.x = j.value("x", s.x);
        s.a = j.value("a", s.a);
        s.b = j.value("b", s.b);
        s.c = j.value("c", s.c);
        s.pa = j.value("pa", s.pa);
        s.pb = j.value("pb", s.pb);
        s.q = j.value("q", s.q);
        s.lambda = j.value("lambda", s.lambda);
        s.torus_n = j.value("n", s.torus_n);
        s.k = j.value("k", s.k);
        s.seed = j.value("seed", s.seed);
        s.sweeps = j.value("sweeps", s.sweeps);
        s.burn_in = j.value("burn_in", s.burn_in);
        s.thin = j.value("thin", s.thin);
        s.chains = j.value("chains", s.chains);
        s.glauber_passes = j.value("glauber_passes", s.glauber_passes);
        s.cluster_pairs = j.value("cluster_pairs", s.cluster_pairs);
        s.budget = j.value("budget", s.budget);
        s.observable = j.value("observable", s.observable);
        s.m = j.value("m", s.m);
        s.rho = j.value("rho", s.rho);
        s.block = j.value("block", s.block);
        s.bc = j.value("bc", std::string(s.model == "fk" ? "free" : "r+w+"));
        if (j.contains("domain")) s.domain = j["domain"].is_string() ? json::parse(j["domain"].get<std::string>()) : j["domain"];
    } catch (const json::exception& e) {
        throw Error(Err::BadInput, std::string("malformed config value: ") + e.what());
    }

    range(s.x > 0, "x must be positive");
    range(s.a > 0 && s.b > 0 && s.c > 0, "a, b, c must be positive");
    range(s.pa >= 0 && s.pa <= 1 && s.pb >= 0 && s.pb <= 1, "p_a, p_b must lie in [0,1]");
    range(s.q > 0, "q must be positive");
    range(s.lambda >= 0 && s.lambda <= M_PI / 3 + 1e-12, "lambda must lie in [0, pi/3]");
    range(s.torus_n >= 1 && s.k >= 0, "need n >= 1 and k >= 0");
    range(s.burn_in >= 0 && s.sweeps > s.burn_in, "need sweeps > burn_in >= 0");
    range(s.thin >= 1, "thin must be at least 1");
    range(s.chains >= 1, "chains must be at least 1");
    range(s.glauber_passes >= 0 && s.cluster_pairs >= 0, "schedule entries must be nonnegative");
    range(s.budget >= 1, "budget must be positive");
    range(s.m >= 1, "m must be at least 1");
    range(s.rho > 2, "rho must exceed 2");
    range(s.block >= 1, "block must be at least 1");
    if (!s.observable.empty())
        range(s.observable == "crossing" || s.observable == "alpha" || s.observable == "variance" ||
                  s.observable == "decomposition",
              "unknown observable '" + s.observable + "'");

    if (s.model == "fk") {
        range(s.bc == "free" || s.bc == "wired", "FK boundary condition must be free or wired");
    } else {
        try {
            s.bc = bc_name(parse_bc(s.bc));
        } catch (const Error& e) {
            throw Error(Err::OutOfRange, e.what());
        }
    }
    if (s.domain.is_null()) {
        if (s.model == "loop-o2") s.domain = {{"type", "hex_ball"}, {"radius", 4}};
        else if (s.model != "bkw") s.domain = {{"type", "even_diamond"}, {"radius", 4}};
    }
    if (s.model == "loop-o2") hex_domain_from_json(s.domain.dump());
    else if (s.model != "bkw") square_domain_from_json(s.domain.dump());

    if (s.model == "loop-o2") {
        LoopParams p{2.0, s.x};
        s.warnings = regime_warnings(p);
        s.superdual_regime = p.superdual_regime();
        s.fkg_regime = p.fkg_regime();
    } else if (s.model == "six-vertex") {
        SixVParams p{s.a, s.b, s.c};
        s.warnings = regime_warnings(p);
        s.superdual_regime = p.superdual_regime();
        s.fkg_regime = p.fkg_regime();
    } else if (s.model == "fk") {
        FKParams p{s.pa, s.pb, s.q};
        s.warnings = regime_warnings(p);
        s.fkg_regime = p.fkg_regime();
    }
    return s;
}

RunSpec parse_config_text(const std::string& text, const json& flags) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Err::BadInput, std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j, flags);
}

json RunSpec::to_json() const {
    json j = {{"model", model}, {"seed", seed}, {"sweeps", sweeps}, {"burn_in", burn_in}, {"thin", thin},
              {"chains", chains}, {"glauber_passes", glauber_passes}, {"cluster_pairs", cluster_pairs},
              {"budget", budget}, {"bc", bc}, {"m", m}, {"rho", rho}, {"block", block}, {"n", torus_n}};
    if (!domain.is_null()) j["domain"] = domain;
    if (!observable.empty()) j["observable"] = observable;
    if (model == "loop-o2") j["x"] = x;
    if (model == "six-vertex") { j["a"] = a; j["b"] = b; j["c"] = c; }
    if (model == "fk") { j["pa"] = pa; j["pb"] = pb; j["q"] = q; }
    if (model == "bkw") { j["lambda"] = lambda; j["k"] = k; }
    return j;
}

ChainConfig RunSpec::chain_config(int chain_index) const {
    ChainConfig c;
    c.seed = seed;
    c.stream = (uint64_t)chain_index;
    c.sweeps = sweeps;
    c.burn_in = burn_in;
    c.thinning = thin;
    c.glauber_passes = glauber_passes;
    c.cluster_pairs = cluster_pairs;
    return c;
}

std::string config_hash(const RunSpec& s) {
    std::string body = s.to_json().dump();
    std::string blob = "blob " + std::to_string(body.size()) + std::string(1, '\0') + body;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

json manifest(const RunSpec& s, bool with_wall_clock) {
    json m = {{"tool_version", kToolVersion},
              {"rng", kRngName},
              {"config_hash", config_hash(s)},
              {"config", s.to_json()},
              {"schedule", {{"glauber_passes", s.glauber_passes}, {"cluster_pairs", s.cluster_pairs}}}};
    if (!s.warnings.empty()) m["warnings"] = s.warnings;
    if (with_wall_clock) {
        std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        m["wall_clock"] = buf;
    }
    return m;
}

}  // namespace lf::cli
