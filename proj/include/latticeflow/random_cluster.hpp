#pragma once
#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "lattice.hpp"

namespace lf {

using cplx = std::complex<double>;

struct FKParams {
    double pa = 0.5, pb = 0.5, q = 1.0;
    bool self_dual(double tol = 1e-12) const;
    bool fkg_regime() const { return q >= 1.0; }
};

// Graph on black squares; one edge per interior vertex (the black diagonal).
struct FKGraph {
    int nv = 0;
    std::vector<std::array<int, 2>> edges;
    std::vector<Dir> cls;
    std::vector<char> boundary;  // vertices identified under wired boundary conditions
};

FKGraph fk_graph_black(const SquareDomain& d);
FKGraph fk_graph_white(const SquareDomain& d);
FKGraph fk_graph_torus(const TorusLattice& t);

struct FKConfig {
    std::vector<char> eta;
    bool wired = false;
};

int fk_clusters(const FKGraph& g, const FKConfig& c);
double fk_weight(const FKGraph& g, const FKConfig& c, const FKParams& p);
FKConfig dual_config(const FKConfig& c);
double self_dual_p(double q);
bool two_point_connected(const FKGraph& g, const FKConfig& c, int u, int v);

// ------------------------------------------------------------------ torus loops

struct TorusLoop {
    std::vector<int> verts;  // visited vertices in traversal order
    std::vector<int> slots;  // exit slot taken at each visited vertex (0 up, 1 right, 2 down, 3 left)
    int turn = 0;            // left minus right turns in the reference orientation
    int cross_row = 0;       // signed crossings of the horizontal dual cycle
    int cross_col = 0;       // signed crossings of the vertical dual cycle
    bool contractible() const { return cross_row == 0 && cross_col == 0; }
};

struct TorusLoopConfig {
    int n = 1;
    std::vector<TorusLoop> loops;
    int num_contractible() const;
    int num_noncontractible() const { return (int)loops.size() - num_contractible(); }
};

// eta indexed by torus vertex: 1 if the black diagonal through the vertex is open
TorusLoopConfig loops_from_fk(const TorusLattice& t, const std::vector<char>& eta);
int walk_crossings(const TorusLattice& t, const TorusLoop& l, int k);
bool loop_surrounds(const TorusLattice& t, const TorusLoop& l, int i, int j);

double p8(int m);
double p8_binomial(int m);
double w_prime(const TorusLoopConfig& L, double q);
double cos_product_observable(const TorusLattice& t, const TorusLoopConfig& L, int k, double lambda);
// exact conditional expectation over orientations of the non-contractible loops
cplx e_lnon(const TorusLattice& t, const TorusLoopConfig& L, int k);

struct BKWParams {
    double lambda = 0.0;
    double c() const;
    double sqrt_q() const;
};

struct BKWResult {
    cplx z_n, z_nk;
};

inline constexpr size_t kDefaultBudget = size_t(1) << 26;

// oriented-loop enumeration; parallel over a fixed partition with ordered reduction
BKWResult bkw_partition_functions(int n, int k, const BKWParams& p, size_t budget = kDefaultBudget);
BKWResult bkw_partition_functions_serial(int n, int k, const BKWParams& p, size_t budget = kDefaultBudget);
// unoriented loop expansion with w' (z_n) and the cosine-product form (z_nk)
BKWResult bkw_loop_expansion(int n, int k, const BKWParams& p, size_t budget = kDefaultBudget);

cplx torus_spin_observable(int n, int k, const BKWParams& p, size_t budget = kDefaultBudget);
cplx torus_spin_observable_serial(int n, int k, const BKWParams& p, size_t budget = kDefaultBudget);

}  // namespace lf
