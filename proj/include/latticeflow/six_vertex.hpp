#pragma once
#include <cstdint>
#include <vector>

#include "bc.hpp"
#include "lattice.hpp"
#include "rng.hpp"

namespace lf {

struct SixVParams {
    double a = 1, b = 1, c = 1;
    bool fkg_regime() const { return a <= c && b <= c; }
    bool superdual_regime() const { return fkg_regime() && c <= a + b; }
    double dir_weight(Dir d) const { return d == Dir::A ? a : b; }
};

struct GraphHom {
    std::vector<int> h;  // over squares
};

// spin[s] is sigma_black on black squares and sigma_white on white squares
struct SpinPair6V {
    std::vector<int8_t> spin;
    bool operator==(const SpinPair6V& o) const { return spin == o.spin; }
};

// black[x]: d_x(black) open in xi_black; white[x]: d_x(white) open in xi_white; x over interior vertices
struct BondPercPair {
    std::vector<char> black, white;
};

struct VertexType {
    char cls;  // 'a', 'b' or 'c'
    int sub;   // +1/-1: sign of sigma_black at the first square of the black diagonal
};

bool is_graph_hom(const SquareDomain& d, const GraphHom& h);
VertexType vertex_type(const SquareDomain& d, const GraphHom& h, int v);
double hom_weight(const SquareDomain& d, const GraphHom& h, const SixVParams& p);

SpinPair6V height_to_spins_6v(const SquareDomain& d, const GraphHom& h);
GraphHom spins_to_height_6v(const SquareDomain& d, const SpinPair6V& s);
bool ice_rule(const SquareDomain& d, const SpinPair6V& s);
bool satisfies_bc_6v(const SquareDomain& d, const SpinPair6V& s, BC bc);
double spin_weight_6v(const SquareDomain& d, const SpinPair6V& s, const SixVParams& p);

BondPercPair sample_percolations_6v(const SquareDomain& d, const SpinPair6V& s, const std::vector<double>& u,
                                    const SixVParams& p);

// Given the percolation of one colour, resample the other colour's spins with fair coins on the
// clusters of the dual percolation; clusters meeting the boundary take `fixed` when nonzero.
// `xi` is indexed by vertex and refers to the diagonal of colour `perc_white ? white : black`.
void resample_opposite_6v(const SquareDomain& d, SpinPair6V& s, const std::vector<char>& xi, bool perc_white,
                          Rng& rng, int fixed);

struct Arrow {
    int s, t;  // adjacent squares, t east or north of s
    int dir;   // 0 north, 1 east, 2 south, 3 west
};
std::vector<Arrow> edge_orientation(const SquareDomain& d, const GraphHom& h);
// heights recovered from arrows, normalised so that square 0 has value h0
GraphHom heights_from_orientation(const SquareDomain& d, const std::vector<Arrow>& arrows, int h0);

struct Exploration {
    int N = 0;
    std::vector<std::vector<int>> circuits;  // square indices of each circuit
    std::vector<char> white;                 // colour of each circuit
};

// Alternating exploration from the boundary inwards: gamma_1 is the outermost open white circuit
// around or through u, then alternately the outermost black/white circuit strictly inside the
// previous one, stopping at a circuit that contains u.
Exploration explore_alternating_circuits(const SquareDomain& d, const BondPercPair& xi, int u);

// open circuit of colour `white` (edges given by xi per vertex) strictly surrounding square u
bool bond_circuit_surrounds(const SquareDomain& d, const std::vector<char>& xi, bool white, int u);

std::vector<GraphHom> enumerate_graph_homs(const SquareDomain& d, size_t budget = size_t(1) << 26);

}  // namespace lf
