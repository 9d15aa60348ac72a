#include "latticeflow/loop_o2.hpp"

#include <cmath>
#include <deque>

#include "latticeflow/dsu.hpp"

namespace lf {

bool LoopParams::superdual_regime() const { return x >= 1.0 / std::sqrt(2.0) - 1e-15 && x <= 1.0; }

BC parse_bc(const std::string& s0) {
    std::string s;
    for (char c : s0) s += (c == 'b') ? 'r' : c;
    if (s == "free") return {0, 0};
    BC bc;
    size_t i = 0;
    while (i < s.size()) {
        if (i + 1 >= s.size()) throw Error(Err::OutOfRange, "bad boundary condition '" + s0 + "'");
        char col = s[i], sg = s[i + 1];
        int v = sg == '+' ? 1 : sg == '-' ? -1 : 0;
        if (!v || (col != 'r' && col != 'w')) throw Error(Err::OutOfRange, "bad boundary condition '" + s0 + "'");
        (col == 'r' ? bc.black : bc.white) = v;
        i += 2;
    }
    return bc;
}

std::string bc_name(BC bc) {
    if (!bc.any_fixed()) return "free";
    std::string s;
    if (bc.black) s += bc.black > 0 ? "r+" : "r-";
    if (bc.white) s += bc.white > 0 ? "w+" : "w-";
    return s;
}

static int num_vertices(const HexDomain& d) { return d.num_y() + (int)d.down_faces.size(); }

static void check_loop_config(const HexDomain& d, const LoopConfig& w, std::vector<int>& deg) {
    deg.assign(num_vertices(d), 0);
    for (int e = 0; e < (int)d.edges.size(); ++e) {
        if (!w.edge[e]) continue;
        const HexEdge& he = d.edges[e];
        if (!he.loopable) throw Error(Err::InvalidDegree, "loop edge touches the domain boundary");
        ++deg[he.up];
        ++deg[he.down];
    }
    for (int v : deg)
        if (v != 0 && v != 2) throw Error(Err::InvalidDegree, "vertex of degree " + std::to_string(v));
}

std::vector<std::vector<int>> decompose_loops(const HexDomain& d, const LoopConfig& w) {
    std::vector<int> deg;
    check_loop_config(d, w, deg);
    std::vector<std::array<int, 2>> inc(deg.size(), {-1, -1});
    for (int e = 0; e < (int)d.edges.size(); ++e) {
        if (!w.edge[e]) continue;
        for (int v : {d.edges[e].up, d.edges[e].down}) (inc[v][0] < 0 ? inc[v][0] : inc[v][1]) = e;
    }
    std::vector<char> used(d.edges.size(), 0);
    std::vector<std::vector<int>> loops;
    for (int e0 = 0; e0 < (int)d.edges.size(); ++e0) {
        if (!w.edge[e0] || used[e0]) continue;
        std::vector<int> cyc;
        int e = e0, v = d.edges[e0].up;
        while (!used[e]) {
            used[e] = 1;
            cyc.push_back(e);
            int nv = d.edges[e].up == v ? d.edges[e].down : d.edges[e].up;
            e = inc[nv][0] == e ? inc[nv][1] : inc[nv][0];
            v = nv;
        }
        loops.push_back(std::move(cyc));
    }
    return loops;
}

double loop_weight(const HexDomain& d, const LoopConfig& w, const LoopParams& p) {
    auto loops = decompose_loops(d, w);
    long ne = 0;
    for (auto& c : loops) ne += (long)c.size();
    return std::pow(p.n, (double)loops.size()) * std::pow(p.x, (double)ne);
}

bool is_lipschitz(const HexDomain& d, const LipschitzFn& h) {
    for (auto& e : d.edges)
        if (std::abs(h.h[e.f] - h.h[e.g]) > 1) return false;
    return true;
}

static int mod4(int a) { return ((a % 4) + 4) % 4; }

SpinPair height_to_spins(const LipschitzFn& h) {
    SpinPair s;
    s.black.resize(h.h.size());
    s.white.resize(h.h.size());
    for (size_t f = 0; f < h.h.size(); ++f) {
        int r = mod4(h.h[f]);
        s.black[f] = (r == 0 || r == 1) ? 1 : -1;
        s.white[f] = (r == 0 || r == 3) ? 1 : -1;
    }
    return s;
}

bool consistent(const HexDomain& d, const SpinPair& s) {
    for (auto& e : d.edges)
        if (s.black[e.f] != s.black[e.g] && s.white[e.f] != s.white[e.g]) return false;
    return true;
}

bool satisfies_bc(const HexDomain& d, const SpinPair& s, BC bc) {
    for (int f : d.boundary_faces) {
        if (bc.black && s.black[f] != bc.black) return false;
        if (bc.white && s.white[f] != bc.white) return false;
    }
    return true;
}

static int spin_class(const SpinPair& s, int f) {
    if (s.black[f] > 0) return s.white[f] > 0 ? 0 : 1;
    return s.white[f] > 0 ? 3 : 2;
}

LipschitzFn spins_to_height(const HexDomain& d, const SpinPair& s) {
    if (!consistent(d, s)) throw Error(Err::InconsistentPair, "spin pair violates consistency");
    if (!satisfies_bc(d, s, {1, 1})) throw Error(Err::NotRepresentable, "pair is not ++ on the boundary");
    int F = d.num_faces();
    LipschitzFn h;
    h.h.assign(F, 0);
    std::vector<char> seen(F, 0);
    std::deque<int> q;
    for (int f : d.boundary_faces) { seen[f] = 1; q.push_back(f); }
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        for (int g : d.nbr[f]) {
            if (g < 0 || seen[g]) continue;
            int diff = mod4(spin_class(s, g) - spin_class(s, f));
            h.h[g] = h.h[f] + (diff == 3 ? -1 : diff);
            seen[g] = 1;
            q.push_back(g);
        }
    }
    // cycle consistency: every edge must agree with the integrated increments
    for (auto& e : d.edges) {
        int diff = mod4(spin_class(s, e.g) - spin_class(s, e.f));
        if (h.h[e.g] - h.h[e.f] != (diff == 3 ? -1 : diff))
            throw Error(Err::NotRepresentable, "increments do not integrate to a height function");
    }
    for (int f : d.boundary_faces)
        if (h.h[f] != 0) throw Error(Err::NotRepresentable, "boundary heights are not zero");
    return h;
}

LoopConfig loops_of_spins(const HexDomain& d, const SpinPair& s) {
    if (!consistent(d, s)) throw Error(Err::InconsistentPair, "spin pair violates consistency");
    LoopConfig w;
    w.edge.assign(d.edges.size(), 0);
    for (size_t e = 0; e < d.edges.size(); ++e) {
        int f = d.edges[e].f, g = d.edges[e].g;
        w.edge[e] = (s.black[f] != s.black[g]) || (s.white[f] != s.white[g]);
    }
    return w;
}

LoopConfig loops_of_height(const HexDomain& d, const LipschitzFn& h) {
    LoopConfig w;
    w.edge.assign(d.edges.size(), 0);
    for (size_t e = 0; e < d.edges.size(); ++e) w.edge[e] = h.h[d.edges[e].f] != h.h[d.edges[e].g];
    return w;
}

static inline bool mono(const std::vector<int8_t>& s, const std::array<int, 3>& t) {
    return s[t[0]] == s[t[1]] && s[t[1]] == s[t[2]];
}

int wall_y_count(const HexDomain& d, const SpinPair& s) {
    int c = 0;
    for (auto& t : d.y_faces) c += !(mono(s.black, t) && mono(s.white, t));
    return c;
}

double spin_weight(const HexDomain& d, const SpinPair& s, double x) {
    if (!consistent(d, s)) throw Error(Err::InconsistentPair, "spin pair violates consistency");
    return std::pow(x * x, (double)wall_y_count(d, s));
}

PercolationPair sample_percolations(const HexDomain& d, const SpinPair& s, const std::vector<double>& u, double x) {
    if (!consistent(d, s)) throw Error(Err::InconsistentPair, "spin pair violates consistency");
    int NY = d.num_y();
    PercolationPair p;
    p.black.open.assign(NY, 0);
    p.white.open.assign(NY, 0);
    double x2 = x * x;
    for (int y = 0; y < NY; ++y) {
        const auto& t = d.y_faces[y];
        if (!mono(s.black, t)) {
            p.white.open[y] = 1;
        } else if (!mono(s.white, t)) {
            p.black.open[y] = 1;
        } else {
            p.black.open[y] = u[y] <= x2;
            p.white.open[y] = u[y] > 1.0 - x2;
        }
    }
    return p;
}

SitePerc split_sign(const HexDomain& d, const SitePerc& xi, const std::vector<int8_t>& spin, int sign) {
    SitePerc r;
    r.open.assign(d.num_y(), 0);
    for (int y = 0; y < d.num_y(); ++y) r.open[y] = xi.open[y] && spin[d.y_faces[y][0]] == sign;
    return r;
}

double joint_weight(const HexDomain& d, const std::vector<int8_t>& sb, const std::vector<int8_t>& sw,
                    const SitePerc& xi, double x) {
    SpinPair s{sb, sw};
    if (!consistent(d, s)) return 0.0;
    double x2 = x * x;
    long open = 0, closed_free = 0, yb = 0;
    for (int y = 0; y < d.num_y(); ++y) {
        const auto& t = d.y_faces[y];
        bool bm = mono(sb, t);
        if (xi.open[y]) {
            if (!bm) return 0.0;
            ++open;
        } else {
            if (!mono(sw, t)) return 0.0;
            if (bm) ++closed_free; else ++yb;
        }
    }
    return std::pow(x2, (double)open) * std::pow(1.0 - x2, (double)closed_free) * std::pow(x2, (double)yb);
}

std::vector<int8_t> resample_given_perc(const HexDomain& d, const SitePerc& xi, Rng& rng, int fixed) {
    int F = d.num_faces();
    Dsu dsu(F);
    for (int y = 0; y < d.num_y(); ++y) {
        if (xi.open[y]) continue;
        const auto& t = d.y_faces[y];
        dsu.unite(t[0], t[1]);
        dsu.unite(t[0], t[2]);
    }
    std::vector<int8_t> val(F, 0), out(F);
    if (fixed)
        for (int f : d.boundary_faces) val[dsu.find(f)] = (int8_t)fixed;
    for (int f = 0; f < F; ++f) {
        int r = dsu.find(f);
        if (!val[r]) val[r] = coin(rng) ? 1 : -1;
        out[f] = val[r];
    }
    return out;
}

std::vector<int8_t> resample_white_given_black(const HexDomain& d, const std::vector<int8_t>& sb,
                                               const SitePerc& xi, Rng& rng, BC bc) {
    for (int y = 0; y < d.num_y(); ++y)
        if (xi.open[y] && !mono(sb, d.y_faces[y]))
            throw Error(Err::IncompatibleInput, "black spins not constant on an open black site");
    return resample_given_perc(d, xi, rng, bc.white);
}

std::vector<LipschitzFn> enumerate_lipschitz(const HexDomain& d, size_t budget) {
    int F = d.num_faces();
    std::vector<int> order;
    std::vector<char> placed(F, 0);
    std::deque<int> q;
    for (int f : d.boundary_faces) { placed[f] = 1; q.push_back(f); }
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        for (int g : d.nbr[f])
            if (g >= 0 && !placed[g]) { placed[g] = 1; order.push_back(g); q.push_back(g); }
    }
    std::vector<LipschitzFn> out;
    std::vector<int> h(F, 0);
    std::vector<char> set(F, 0);
    for (int f : d.boundary_faces) set[f] = 1;
    // recursive backtracking over the interior faces in BFS order
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == order.size()) {
            if (out.size() >= budget) throw Error(Err::TooLarge, "Lipschitz enumeration exceeds budget");
            out.push_back({h});
            return;
        }
        int f = order[i];
        int lo = -1 << 20, hi = 1 << 20;
        for (int g : d.nbr[f])
            if (g >= 0 && set[g]) { lo = std::max(lo, h[g] - 1); hi = std::min(hi, h[g] + 1); }
        set[f] = 1;
        for (int v = lo; v <= hi; ++v) {
            h[f] = v;
            self(self, i + 1);
        }
        set[f] = 0;
        h[f] = 0;
    };
    rec(rec, 0);
    return out;
}

}  // namespace lf
