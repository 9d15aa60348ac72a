#include "latticeflow/random_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

#include "latticeflow/dsu.hpp"

namespace lf {

bool FKParams::self_dual(double tol) const {
    return std::abs(pa / (1 - pa) * pb / (1 - pb) - q) <= tol * std::max(1.0, q);
}

static FKGraph graph_of(const SquareDomain& d, bool white) {
    FKGraph g;
    std::vector<int> id(d.num_squares(), -1);
    for (int s = 0; s < d.num_squares(); ++s)
        if (d.black(s) != white) {
            id[s] = g.nv++;
            g.boundary.push_back(d.is_boundary[s]);
        }
    for (auto& x : d.verts) {
        if (white) {
            g.edges.push_back({id[x.wu], id[x.wv]});
            g.cls.push_back(x.wdir);
        } else {
            g.edges.push_back({id[x.bu], id[x.bv]});
            g.cls.push_back(x.bdir);
        }
    }
    return g;
}

FKGraph fk_graph_black(const SquareDomain& d) { return graph_of(d, false); }
FKGraph fk_graph_white(const SquareDomain& d) { return graph_of(d, true); }

FKGraph fk_graph_torus(const TorusLattice& t) {
    FKGraph g;
    std::vector<int> id(t.num_sites(), -1);
    for (int s = 0; s < t.num_sites(); ++s)
        if (t.black_site(s)) id[s] = g.nv++;
    g.boundary.assign(g.nv, 0);
    for (int v = 0; v < t.num_sites(); ++v) {
        auto e = t.black_diag(v);
        g.edges.push_back({id[e[0]], id[e[1]]});
        int i = v % t.L, j = v / t.L;
        g.cls.push_back((i + j) % 2 == 0 ? Dir::A : Dir::B);
    }
    return g;
}

static void build_dsu(const FKGraph& g, const FKConfig& c, Dsu& dsu, int skip = -1) {
    dsu.reset(g.nv + 1);  // extra node stands for the wired boundary
    if (c.wired)
        for (int v = 0; v < g.nv; ++v)
            if (g.boundary[v]) dsu.unite(v, g.nv);
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (e != skip && c.eta[e]) dsu.unite(g.edges[e][0], g.edges[e][1]);
}

int fk_clusters(const FKGraph& g, const FKConfig& c) {
    Dsu dsu;
    build_dsu(g, c, dsu);
    bool any_boundary = false;
    for (int v = 0; v < g.nv; ++v) any_boundary |= (bool)g.boundary[v];
    return (c.wired && any_boundary) ? dsu.count() : dsu.count() - 1;
}

double fk_weight(const FKGraph& g, const FKConfig& c, const FKParams& p) {
    double w = 1.0;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        double pe = g.cls[e] == Dir::A ? p.pa : p.pb;
        w *= c.eta[e] ? pe : 1.0 - pe;
    }
    return w * std::pow(p.q, (double)fk_clusters(g, c));
}

FKConfig dual_config(const FKConfig& c) {
    FKConfig d;
    d.eta.resize(c.eta.size());
    for (size_t e = 0; e < c.eta.size(); ++e) d.eta[e] = !c.eta[e];
    d.wired = !c.wired;
    return d;
}

double self_dual_p(double q) {
    if (!(q > 0)) throw Error(Err::OutOfRange, "q must be positive");
    return std::sqrt(q) / (1.0 + std::sqrt(q));
}

bool two_point_connected(const FKGraph& g, const FKConfig& c, int u, int v) {
    Dsu dsu;
    build_dsu(g, c, dsu);
    return dsu.same(u, v);
}

// ------------------------------------------------------------------ torus loops

static const int kSx[4] = {0, 1, 0, -1}, kSy[4] = {1, 0, -1, 0};

// pairing at a torus vertex: returns the partner slot
static inline int partner(const TorusLattice& t, const std::vector<char>& eta, int v, int slot) {
    int i = v % t.L, j = v / t.L;
    bool even = (i + j) % 2 == 0;
    bool pairA = (eta[v] != 0) == even;  // A: {down,right},{up,left}; B: {down,left},{up,right}
    static const int A[4] = {3, 2, 1, 0}, B[4] = {1, 0, 3, 2};
    return pairA ? A[slot] : B[slot];
}

int TorusLoopConfig::num_contractible() const {
    int c = 0;
    for (auto& l : loops) c += l.contractible();
    return c;
}

TorusLoopConfig loops_from_fk(const TorusLattice& t, const std::vector<char>& eta) {
    TorusLoopConfig out;
    out.n = t.n;
    std::vector<char> used(t.num_edges(), 0);
    for (int e0 = 0; e0 < t.num_edges(); ++e0) {
        if (used[e0]) continue;
        // start at the lower endpoint of a vertical edge (leaving up) or the left endpoint of a horizontal edge
        int s0 = e0 / 2, i = s0 % t.L, j = s0 / t.L;
        int v0, slot0;
        if (e0 % 2 == 0) { v0 = t.id(i, j - 1); slot0 = 0; }
        else { v0 = t.id(i - 1, j); slot0 = 1; }
        TorusLoop l;
        int v = v0, slot = slot0;
        do {
            int e = t.slot_edge(v, slot);
            used[e] = 1;
            l.verts.push_back(v);
            l.slots.push_back(slot);
            if (e % 2 == 0 && (e / 2) / t.L == 0) l.cross_row += slot == 0 ? 1 : -1;
            if (e % 2 == 1 && (e / 2) % t.L == 0) l.cross_col += slot == 3 ? 1 : -1;
            int w = t.slot_target(v, slot);
            int in = (slot + 2) % 4;
            int nxt = partner(t, eta, w, in);
            int cr = kSx[slot] * kSy[nxt] - kSy[slot] * kSx[nxt];
            l.turn += cr;
            v = w;
            slot = nxt;
        } while (!(v == v0 && slot == slot0));
        out.loops.push_back(std::move(l));
    }
    return out;
}

int walk_crossings(const TorusLattice& t, const TorusLoop& l, int k) {
    std::vector<int> mult(t.L, 0);
    for (int i = 0; i < 2 * k; ++i) ++mult[i % t.L];
    int c = 0;
    for (size_t s = 0; s < l.verts.size(); ++s) {
        int e = t.slot_edge(l.verts[s], l.slots[s]);
        if (e % 2 == 0 && (e / 2) / t.L == 0) c += mult[(e / 2) % t.L] * (l.slots[s] == 0 ? 1 : -1);
    }
    return c;
}

bool loop_surrounds(const TorusLattice& t, const TorusLoop& l, int i, int j) {
    // lift the loop to the plane in doubled coordinates: corners odd, square centres even
    std::vector<std::pair<long, long>> poly;
    long x = 2 * (l.verts[0] % t.L) + 1, y = 2 * (l.verts[0] / t.L) + 1;
    long xmin = x, xmax = x, ymin = y, ymax = y;
    for (size_t s = 0; s < l.verts.size(); ++s) {
        poly.push_back({x, y});
        x += 2 * kSx[l.slots[s]];
        y += 2 * kSy[l.slots[s]];
        xmin = std::min(xmin, x); xmax = std::max(xmax, x);
        ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
    long P = 2L * t.L;
    auto winding = [&](long px, long py) {
        int w = 0;
        for (size_t s = 0; s < poly.size(); ++s) {
            auto [x1, y1] = poly[s];
            auto [x2, y2] = poly[(s + 1) % poly.size()];
            if (x1 != x2 || x1 < px) continue;
            if (y1 < py && y2 > py) ++w;
            if (y1 > py && y2 < py) --w;
        }
        return w;
    };
    long cx0 = 2L * (((i % t.L) + t.L) % t.L), cy0 = 2L * (((j % t.L) + t.L) % t.L);
    for (long cx = cx0 - P * ((cx0 - xmin) / P + 1); cx <= xmax; cx += P)
        for (long cy = cy0 - P * ((cy0 - ymin) / P + 1); cy <= ymax; cy += P)
            if (cx > xmin && cy > ymin && winding(cx, cy) != 0) return true;
    return false;
}

double p8(int m) {
    if (m < 0) throw Error(Err::OutOfRange, "negative step count");
    if (m % 2) throw Error(Err::OddStepCount, "p8 is only used for even step counts");
    // (1/8) sum_j cos(pi j/4)^m with the cosines of the 8th roots of unity taken exactly:
    // j=0,4 give 1; j=2,6 give 0 (m>0); odd j give (1/sqrt 2)^m = 2^(-m/2)
    double s = 2.0 + (m == 0 ? 2.0 : 0.0) + 4.0 * std::ldexp(1.0, -m / 2);
    return s / 8.0;
}

double p8_binomial(int m) {
    if (m < 0) throw Error(Err::OutOfRange, "negative step count");
    if (m % 2) throw Error(Err::OddStepCount, "p8 is only used for even step counts");
    // count walks with j up-steps whose endpoint 2j - m lies in 8Z
    double count = 0, binom = 1;
    for (int j = 0; j <= m; ++j) {
        if (((2 * j - m) % 8 + 8) % 8 == 0) count += binom;
        binom = binom * (m - j) / (j + 1);
    }
    return count / std::ldexp(1.0, m);
}

double w_prime(const TorusLoopConfig& L, double q) {
    int nc = L.num_contractible(), nn = L.num_noncontractible();
    return std::pow(std::sqrt(q), nc) * std::ldexp(1.0, nn) * p8(nn);
}

double cos_product_observable(const TorusLattice& t, const TorusLoopConfig& L, int k, double lambda) {
    double prod = 1.0;
    for (auto& l : L.loops) {
        if (!l.contractible()) continue;
        int s = (int)loop_surrounds(t, l, 0, 0) - (int)loop_surrounds(t, l, 2 * k, 0);
        prod *= std::cos(lambda + M_PI / 8.0 * s) / std::cos(lambda);
    }
    return prod;
}

static inline bool in8(int a) { return ((a % 8) + 8) % 8 == 0; }

cplx e_lnon(const TorusLattice& t, const TorusLoopConfig& L, int k) {
    std::vector<const TorusLoop*> non;
    for (auto& l : L.loops)
        if (!l.contractible()) non.push_back(&l);
    int m = (int)non.size();
    std::vector<int> wc(m);
    for (int i = 0; i < m; ++i) wc[i] = walk_crossings(t, *non[i], k);
    cplx s = 0;
    long cnt = 0;
    for (long mask = 0; mask < (1L << m); ++mask) {
        int r = 0, c = 0, w = 0;
        for (int i = 0; i < m; ++i) {
            int e = (mask >> i & 1) ? -1 : 1;
            r += e * non[i]->cross_row;
            c += e * non[i]->cross_col;
            w += e * wc[i];
        }
        if (!in8(r) || !in8(c)) continue;
        s += std::polar(1.0, M_PI / 8.0 * w);
        ++cnt;
    }
    return cnt ? s / (double)cnt : cplx(0);
}

double BKWParams::c() const { return 2.0 * std::cos(lambda / 2.0); }
double BKWParams::sqrt_q() const { return 2.0 * std::cos(lambda); }

static void check_bkw_args(int n, int k, const BKWParams& p, size_t budget) {
    if (n < 1 || k < 0) throw Error(Err::OutOfRange, "need n >= 1 and k >= 0");
    if (p.lambda < 0 || p.lambda > M_PI / 3 + 1e-12) throw Error(Err::OutOfRange, "lambda must lie in [0, pi/3]");
    if (4L * n * n > 40 || (size_t(1) << (4 * n * n)) > budget)
        throw Error(Err::TooLarge, "torus enumeration exceeds the budget");
}

// oriented-loop sum for one pairing configuration
static void oriented_terms(const TorusLattice& t, const std::vector<char>& eta, int k, double lambda,
                           size_t budget, cplx& zn, cplx& znk) {
    auto L = loops_from_fk(t, eta);
    int m = (int)L.loops.size();
    if (m > 40 || (size_t(1) << m) > budget) throw Error(Err::TooLarge, "orientation count exceeds the budget");
    std::vector<int> wc(m);
    for (int i = 0; i < m; ++i) wc[i] = walk_crossings(t, L.loops[i], k);
    for (long mask = 0; mask < (1L << m); ++mask) {
        int turn = 0, r = 0, c = 0, w = 0;
        for (int i = 0; i < m; ++i) {
            int e = (mask >> i & 1) ? -1 : 1;
            turn += e * L.loops[i].turn;
            r += e * L.loops[i].cross_row;
            c += e * L.loops[i].cross_col;
            w += e * wc[i];
        }
        if (!in8(r) || !in8(c)) continue;
        cplx a = std::polar(1.0, lambda / 4.0 * turn);
        zn += a;
        znk += a * std::polar(1.0, M_PI / 8.0 * w);
    }
}

BKWResult bkw_partition_functions_serial(int n, int k, const BKWParams& p, size_t budget) {
    check_bkw_args(n, k, p, budget);
    TorusLattice t(n);
    int V = t.num_sites();
    long total = 1L << V;
    const long chunks = std::min<long>(total, 256);
    BKWResult r{0, 0};
    std::vector<char> eta(V);
    // same partition and summation order as the parallel version, so results match bit for bit
    for (long ch = 0; ch < chunks; ++ch) {
        cplx z = 0, zk = 0;
        for (long mask = total * ch / chunks; mask < total * (ch + 1) / chunks; ++mask) {
            for (int v = 0; v < V; ++v) eta[v] = mask >> v & 1;
            oriented_terms(t, eta, k, p.lambda, budget, z, zk);
        }
        r.z_n += z;
        r.z_nk += zk;
    }
    return r;
}

BKWResult bkw_partition_functions(int n, int k, const BKWParams& p, size_t budget) {
    check_bkw_args(n, k, p, budget);
    TorusLattice t(n);
    int V = t.num_sites();
    long total = 1L << V;
    const long chunks = std::min<long>(total, 256);
    std::vector<cplx> pz(chunks, 0), pk(chunks, 0);
#pragma omp parallel for schedule(dynamic)
    for (long ch = 0; ch < chunks; ++ch) {
        std::vector<char> eta(V);
        long lo = total * ch / chunks, hi = total * (ch + 1) / chunks;
        for (long mask = lo; mask < hi; ++mask) {
            for (int v = 0; v < V; ++v) eta[v] = mask >> v & 1;
            oriented_terms(t, eta, k, p.lambda, budget, pz[ch], pk[ch]);
        }
    }
    BKWResult r{0, 0};
    for (long ch = 0; ch < chunks; ++ch) { r.z_n += pz[ch]; r.z_nk += pk[ch]; }
    return r;
}

BKWResult bkw_loop_expansion(int n, int k, const BKWParams& p, size_t budget) {
    check_bkw_args(n, k, p, budget);
    TorusLattice t(n);
    int V = t.num_sites();
    double q = p.sqrt_q() * p.sqrt_q();
    BKWResult r{0, 0};
    std::vector<char> eta(V);
    for (long mask = 0; mask < (1L << V); ++mask) {
        for (int v = 0; v < V; ++v) eta[v] = mask >> v & 1;
        auto L = loops_from_fk(t, eta);
        double w = w_prime(L, q);
        r.z_n += w;
        r.z_nk += w * cos_product_observable(t, L, k, p.lambda) * e_lnon(t, L, k);
    }
    return r;
}

// ------------------------------------------------------------------ torus spins

namespace {

struct SpinTorus {
    TorusLattice t;
    std::vector<int> black, white;       // site ids of each colour
    std::vector<int> pos;                // position of a site within its colour list
    std::vector<std::array<int, 4>> dg;  // per vertex: black diag (2), white diag (2)
    std::vector<int> row, col, walk;     // walks as site sequences
    explicit SpinTorus(int n, int k) : t(n) {
        pos.assign(t.num_sites(), 0);
        for (int s = 0; s < t.num_sites(); ++s) {
            auto& lst = t.black_site(s) ? black : white;
            pos[s] = (int)lst.size();
            lst.push_back(s);
        }
        for (int v = 0; v < t.num_sites(); ++v) {
            auto b = t.black_diag(v), w = t.white_diag(v);
            dg.push_back({b[0], b[1], w[0], w[1]});
        }
        for (int i = 0; i <= t.L; ++i) row.push_back(t.id(i, 0));
        for (int j = 0; j <= t.L; ++j) col.push_back(t.id(0, j));
        for (int i = 0; i <= 2 * k; ++i) walk.push_back(t.id(i, 0));
    }
    int spin(long bm, long wm, int s) const {
        long m = t.black_site(s) ? bm : wm;
        return (m >> pos[s] & 1) ? -1 : 1;
    }
    int integral(long bm, long wm, const std::vector<int>& path) const {
        int tot = 0;
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            int a = path[i], b = path[i + 1];
            if (t.black_site(a)) tot += spin(bm, wm, a) * spin(bm, wm, b);
            else tot -= spin(bm, wm, a) * spin(bm, wm, b);
        }
        return tot;
    }
    // returns false if the ice rule fails; otherwise the weight and phase contributions
    bool term(long bm, long wm, double invc, double& w, cplx& ph) const {
        int walls = 0;
        for (auto& d : dg) {
            bool bd = spin(bm, wm, d[0]) != spin(bm, wm, d[1]);
            bool wd = spin(bm, wm, d[2]) != spin(bm, wm, d[3]);
            if (bd && wd) return false;
            walls += bd || wd;
        }
        if (!in8(integral(bm, wm, row)) || !in8(integral(bm, wm, col))) return false;
        w = std::pow(invc, walls);
        ph = std::polar(1.0, M_PI / 8.0 * integral(bm, wm, walk));
        return true;
    }
};

void check_spin_args(int n, int k, const BKWParams& p, size_t budget) {
    if (n < 1 || k < 0) throw Error(Err::OutOfRange, "need n >= 1 and k >= 0");
    if (p.lambda < 0 || p.lambda > M_PI / 3 + 1e-12) throw Error(Err::OutOfRange, "lambda must lie in [0, pi/3]");
    if (4L * n * n > 40 || (size_t(1) << (4 * n * n)) > budget)
        throw Error(Err::TooLarge, "spin enumeration exceeds the budget");
}

}  // namespace

cplx torus_spin_observable_serial(int n, int k, const BKWParams& p, size_t budget) {
    check_spin_args(n, k, p, budget);
    SpinTorus st(n, k);
    long nb = 1L << st.black.size(), nw = 1L << st.white.size();
    double invc = 1.0 / p.c();
    double Z = 0;
    cplx num = 0;
    for (long bm = 0; bm < nb; ++bm) {
        double z = 0;
        cplx nm = 0;
        for (long wm = 0; wm < nw; ++wm) {
            double w;
            cplx ph;
            if (!st.term(bm, wm, invc, w, ph)) continue;
            z += w;
            nm += w * ph;
        }
        Z += z;
        num += nm;
    }
    return num / Z;
}

cplx torus_spin_observable(int n, int k, const BKWParams& p, size_t budget) {
    check_spin_args(n, k, p, budget);
    SpinTorus st(n, k);
    long nb = 1L << st.black.size(), nw = 1L << st.white.size();
    double invc = 1.0 / p.c();
    std::vector<double> pz(nb, 0);
    std::vector<cplx> pn(nb, 0);
#pragma omp parallel for schedule(dynamic)
    for (long bm = 0; bm < nb; ++bm)
        for (long wm = 0; wm < nw; ++wm) {
            double w;
            cplx ph;
            if (!st.term(bm, wm, invc, w, ph)) continue;
            pz[bm] += w;
            pn[bm] += w * ph;
        }
    double Z = 0;
    cplx num = 0;
    for (long bm = 0; bm < nb; ++bm) { Z += pz[bm]; num += pn[bm]; }
    return num / Z;
}

}  // namespace lf
