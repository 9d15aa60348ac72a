#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bc.hpp"
#include "loop_o2.hpp"
#include "random_cluster.hpp"
#include "rng.hpp"
#include "six_vertex.hpp"

namespace lf {

struct ChainConfig {
    uint64_t seed = 1;
    uint64_t stream = 0;
    long sweeps = 1000;
    long burn_in = 100;
    long thinning = 1;
    // schedule per sweep: this many Glauber passes over every site and colour, then this many
    // black+white cluster sweep pairs
    int glauber_passes = 1;
    int cluster_pairs = 1;
    void validate() const;
};

struct ExactDistribution {
    std::vector<std::string> states;
    std::vector<double> probs;
    double Z = 0;
    double prob(const std::string& s) const;
};

struct Empirical {
    std::map<std::string, long> counts;
    long total = 0;
    void add(const std::string& s) { ++counts[s]; ++total; }
};

// canonical encodings
std::string encode(const SpinPair& s);
std::string encode(const SpinPair6V& s);
std::string encode(const FKConfig& c);
std::string encode(const LipschitzFn& h);
std::string encode(const LoopConfig& w);

inline constexpr size_t kEnumBudget = size_t(1) << 26;

std::vector<SpinPair> enumerate_spin_pairs(const HexDomain& d, BC bc, size_t budget = kEnumBudget);
std::vector<SpinPair6V> enumerate_spins_6v(const SquareDomain& d, BC bc, size_t budget = kEnumBudget);
// loop configurations on the loopable edges (every vertex of degree 0 or 2)
std::vector<LoopConfig> enumerate_loop_configs(const HexDomain& d, size_t budget = kEnumBudget);

ExactDistribution exact_loop_spins(const HexDomain& d, double x, BC bc, size_t budget = kEnumBudget);
ExactDistribution exact_lipschitz(const HexDomain& d, double x, size_t budget = kEnumBudget);
ExactDistribution exact_loops(const HexDomain& d, const LoopParams& p, size_t budget = kEnumBudget);
ExactDistribution exact_six_vertex(const SquareDomain& d, const SixVParams& p, BC bc, size_t budget = kEnumBudget);
ExactDistribution exact_fk(const FKGraph& g, const FKParams& p, bool wired, size_t budget = kEnumBudget);
ExactDistribution exact_fk_serial(const FKGraph& g, const FKParams& p, bool wired, size_t budget = kEnumBudget);

double tv_distance(const Empirical& emp, const ExactDistribution& ex);

// ---------------------------------------------------------------- kernels

// conditional probability that the chosen spin is +1 (0 or 1 when frozen by consistency or the boundary)
double glauber_plus_prob(const HexDomain& d, const SpinPair& s, int face, bool white, double x, BC bc);
void glauber_step(const HexDomain& d, SpinPair& s, int face, bool white, Rng& rng, double x, BC bc);
// samples xi of colour `perc_white`, then resamples the opposite spins; requires a fixed boundary colour
void cluster_sweep(const HexDomain& d, SpinPair& s, bool perc_white, Rng& rng, double x, BC bc);
bool cluster_sweeps_allowed(BC bc);

double glauber_plus_prob_6v(const SquareDomain& d, const SpinPair6V& s, int sq, const SixVParams& p, BC bc);
void glauber_step_6v(const SquareDomain& d, SpinPair6V& s, int sq, Rng& rng, const SixVParams& p, BC bc);
void cluster_sweep_6v(const SquareDomain& d, SpinPair6V& s, bool perc_white, Rng& rng, const SixVParams& p, BC bc);

double fk_open_prob(const FKGraph& g, const FKConfig& c, int e, const FKParams& p);
void fk_heatbath_step(const FKGraph& g, FKConfig& c, int e, Rng& rng, const FKParams& p);

// ---------------------------------------------------------------- chains

struct LoopChain {
    const HexDomain* d;
    double x;
    BC bc;
    SpinPair s;
    LoopChain(const HexDomain& dom, double x_, BC bc_);
    void sweep(Rng& rng, const ChainConfig& cfg);
    std::string state() const { return encode(s); }
};

struct SixVChain {
    const SquareDomain* d;
    SixVParams p;
    BC bc;
    SpinPair6V s;
    SixVChain(const SquareDomain& dom, const SixVParams& p_, BC bc_);
    void sweep(Rng& rng, const ChainConfig& cfg);
    std::string state() const { return encode(s); }
};

struct FKChain {
    const FKGraph* g;
    FKParams p;
    FKConfig c;
    FKChain(const FKGraph& graph, const FKParams& p_, bool wired);
    void sweep(Rng& rng, const ChainConfig& cfg);
    std::string state() const { return encode(c); }
};

// Runs `cfg.sweeps` sweeps and calls record(sweep_index, chain) on every thinned sweep after burn-in.
template <class Chain, class F>
void run_chain(Chain& ch, const ChainConfig& cfg, F&& record) {
    cfg.validate();
    Rng rng = make_rng(cfg.seed, cfg.stream);
    for (long t = 0; t < cfg.sweeps; ++t) {
        ch.sweep(rng, cfg);
        if (t >= cfg.burn_in && (t - cfg.burn_in) % cfg.thinning == 0) record(t, ch, rng);
    }
}

// regime warnings for out-of-FKG or localised parameters; empty when none
std::vector<std::string> regime_warnings(const LoopParams& p);
std::vector<std::string> regime_warnings(const SixVParams& p);
std::vector<std::string> regime_warnings(const FKParams& p);

}  // namespace lf
