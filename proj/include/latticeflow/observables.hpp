#pragma once
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "loop_o2.hpp"
#include "samplers.hpp"
#include "six_vertex.hpp"

namespace lf {

struct Estimate {
    double mean = 0, std_error = 0;
    long n_samples = 0;
};

inline constexpr int kDefaultBlock = 100;

// block jackknife; blocks of `block` consecutive samples (falls back to single samples if too few blocks)
Estimate estimate_mean(const std::vector<double>& xs, int block = kDefaultBlock);
Estimate estimate_variance(const std::vector<double>& xs, int block = kDefaultBlock);
// Block jackknife for a statistic of the column sums: stat(sum x, sum x^2, count) per column.
using SumStat = std::function<double(const std::vector<double>& s1, const std::vector<double>& s2, double n)>;
Estimate jackknife(const std::vector<std::vector<double>>& cols, const SumStat& stat, int block = kDefaultBlock);

int loops_around(const HexDomain& d, const LoopConfig& w, int u);
Estimate height_variance(const std::vector<double>& samples, int block = kDefaultBlock);

bool crossing_h(const HexDomain& d, const SitePerc& xi, int m);
bool crossing_v(const HexDomain& d, const SitePerc& xi, int m);
SitePerc complement(const SitePerc& xi);

// xi circuit in Y(domain) around the face centres of `inner` and the segments joining adjacent ones
bool circuit_surrounds_faces(const HexDomain& d, const SitePerc& xi, const std::vector<int>& inner,
                             const std::vector<char>& region_y);
bool circuit_surrounds(const HexDomain& d, const SitePerc& xi, int u);
// circuit in Y(Lambda_2n) around Lambda_n; the domain must contain Lambda_2n
bool circ_event(const HexDomain& d, const SitePerc& xi, int n);

// Y-vertices (or square vertices) in neither percolation
int superduality_violations(const PercolationPair& p);
int superduality_violations(const BondPercPair& p);

struct MCResult {
    Estimate est;
    std::vector<std::string> warnings;
};

MCResult crossing_probability(double x, int m, const ChainConfig& cfg, int domain_radius = 0);
MCResult alpha_n(int n, double rho, double x, const ChainConfig& cfg);
inline constexpr double kDefaultRho = 4.0;

// Var h(center) on the radius-n ball with zero boundary heights, plus E[#loops around the center]
struct VarianceRun {
    Estimate var_h, loops;
};
VarianceRun center_variance(int n, double x, const ChainConfig& cfg);

// six-vertex alternating-circuit decomposition at the central square
struct Decomposition {
    Estimate var_h, n_minus_1, var_start, rhs;
};
Decomposition variance_decomposition(const SquareDomain& d, const SixVParams& p, const ChainConfig& cfg);

struct LogFit {
    double slope = 0, intercept = 0, slope_se = 0, ci_lo = 0, ci_hi = 0;
};
LogFit fit_log_growth(const std::vector<std::pair<int, Estimate>>& pts);

// FKG lattice condition on a distribution over +/- strings of equal length
long fkg_violations(const std::map<std::string, double>& f, double rel_tol = 1e-12);
std::map<std::string, double> black_marginal(const HexDomain& d, const ExactDistribution& ex);
std::map<std::string, double> black_marginal_6v(const SquareDomain& d, const ExactDistribution& ex);

std::string csv_header();
std::string csv_row(const std::string& observable, const std::string& name, int n, const Estimate& e);

}  // namespace lf
