#pragma once
#include <cstdint>
#include <vector>

#include "bc.hpp"
#include "lattice.hpp"
#include "rng.hpp"

namespace lf {

struct LoopParams {
    double n = 2.0;
    double x = 1.0;
    bool fkg_regime() const { return x <= 1.0; }
    bool superdual_regime() const;
};

struct LoopConfig {
    std::vector<char> edge;  // over HexDomain::edges
};

struct LipschitzFn {
    std::vector<int> h;  // over faces
};

struct SpinPair {
    std::vector<int8_t> black, white;  // over faces, values +1/-1
    bool operator==(const SpinPair& o) const { return black == o.black && white == o.white; }
};

struct PercolationPair {
    SitePerc black, white;
};

double loop_weight(const HexDomain& d, const LoopConfig& w, const LoopParams& p);
std::vector<std::vector<int>> decompose_loops(const HexDomain& d, const LoopConfig& w);

bool is_lipschitz(const HexDomain& d, const LipschitzFn& h);
SpinPair height_to_spins(const LipschitzFn& h);
LipschitzFn spins_to_height(const HexDomain& d, const SpinPair& s);
bool consistent(const HexDomain& d, const SpinPair& s);
bool satisfies_bc(const HexDomain& d, const SpinPair& s, BC bc);
LoopConfig loops_of_spins(const HexDomain& d, const SpinPair& s);
LoopConfig loops_of_height(const HexDomain& d, const LipschitzFn& h);

// |Y[sb] u Y[sw]|: Y-vertices whose triangle is not monochromatic in either spin
int wall_y_count(const HexDomain& d, const SpinPair& s);
double spin_weight(const HexDomain& d, const SpinPair& s, double x);

PercolationPair sample_percolations(const HexDomain& d, const SpinPair& s, const std::vector<double>& u, double x);
// xi^{r+} (sign=+1) or xi^{r-}: open sites whose three faces carry that spin
SitePerc split_sign(const HexDomain& d, const SitePerc& xi, const std::vector<int8_t>& spin, int sign);

double joint_weight(const HexDomain& d, const std::vector<int8_t>& sb, const std::vector<int8_t>& sw,
                    const SitePerc& xi_black, double x);

// Fair coins on the components of E_Delta(xi*); components meeting the boundary take the fixed
// value when `fixed` is nonzero.
std::vector<int8_t> resample_given_perc(const HexDomain& d, const SitePerc& xi, Rng& rng, int fixed);
std::vector<int8_t> resample_white_given_black(const HexDomain& d, const std::vector<int8_t>& sigma_black,
                                               const SitePerc& xi_black, Rng& rng, BC bc);

// all Lipschitz functions vanishing on the boundary layer
std::vector<LipschitzFn> enumerate_lipschitz(const HexDomain& d, size_t budget = size_t(1) << 26);

}  // namespace lf
