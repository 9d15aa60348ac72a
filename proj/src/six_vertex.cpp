#include "latticeflow/six_vertex.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>

#include "latticeflow/dsu.hpp"

namespace lf {

static int mod4(int a) { return ((a % 4) + 4) % 4; }

bool is_graph_hom(const SquareDomain& d, const GraphHom& h) {
    for (int s = 0; s < d.num_squares(); ++s) {
        if (((h.h[s] % 2) + 2) % 2 != (d.black(s) ? 0 : 1)) return false;
        for (int t : d.nbr[s])
            if (t >= 0 && std::abs(h.h[s] - h.h[t]) != 1) return false;
    }
    return true;
}

VertexType vertex_type(const SquareDomain& d, const GraphHom& h, int v) {
    const SqVertex& x = d.verts[v];
    bool bdis = h.h[x.bu] != h.h[x.bv];
    bool wdis = h.h[x.wu] != h.h[x.wv];
    if (bdis && wdis) throw Error(Err::IceRuleViolated, "both diagonals disagree");
    int sub = mod4(h.h[x.bu]) == 0 ? 1 : -1;
    if (!bdis && !wdis) return {'c', sub};
    Dir wall = bdis ? x.wdir : x.bdir;
    return {wall == Dir::A ? 'a' : 'b', sub};
}

double hom_weight(const SquareDomain& d, const GraphHom& h, const SixVParams& p) {
    double w = 1.0;
    for (int v = 0; v < d.num_vertices(); ++v) {
        char c = vertex_type(d, h, v).cls;
        w *= c == 'a' ? p.a : c == 'b' ? p.b : p.c;
    }
    return w;
}

SpinPair6V height_to_spins_6v(const SquareDomain& d, const GraphHom& h) {
    SpinPair6V s;
    s.spin.resize(d.num_squares());
    for (int q = 0; q < d.num_squares(); ++q) {
        int r = mod4(h.h[q]);
        s.spin[q] = d.black(q) ? (r == 0 ? 1 : -1) : (r == 1 ? 1 : -1);
    }
    return s;
}

bool ice_rule(const SquareDomain& d, const SpinPair6V& s) {
    for (auto& x : d.verts)
        if (s.spin[x.bu] != s.spin[x.bv] && s.spin[x.wu] != s.spin[x.wv]) return false;
    return true;
}

bool satisfies_bc_6v(const SquareDomain& d, const SpinPair6V& s, BC bc) {
    for (int q = 0; q < d.num_squares(); ++q) {
        if (!d.is_boundary[q]) continue;
        int want = d.black(q) ? bc.black : bc.white;
        if (want && s.spin[q] != want) return false;
    }
    return true;
}

static int cls6(const SquareDomain& d, const SpinPair6V& s, int q) {
    if (d.black(q)) return s.spin[q] > 0 ? 0 : 2;
    return s.spin[q] > 0 ? 1 : 3;
}

GraphHom spins_to_height_6v(const SquareDomain& d, const SpinPair6V& s) {
    if (!ice_rule(d, s)) throw Error(Err::IceRuleViolated, "spin pair violates the ice rule");
    if (!satisfies_bc_6v(d, s, {1, 1})) throw Error(Err::NotRepresentable, "pair is not ++ on the boundary");
    int S = d.num_squares();
    GraphHom h;
    h.h.assign(S, 0);
    std::vector<char> seen(S, 0);
    std::deque<int> q;
    for (int a = 0; a < S; ++a)
        if (d.is_boundary[a]) { h.h[a] = d.black(a) ? 0 : 1; seen[a] = 1; q.push_back(a); }
    if (q.empty()) { h.h[0] = cls6(d, s, 0); seen[0] = 1; q.push_back(0); }
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (int b : d.nbr[a]) {
            if (b < 0 || seen[b]) continue;
            h.h[b] = h.h[a] + (mod4(cls6(d, s, b) - cls6(d, s, a)) == 1 ? 1 : -1);
            seen[b] = 1;
            q.push_back(b);
        }
    }
    for (int a = 0; a < S; ++a)
        for (int b : d.nbr[a]) {
            if (b < 0) continue;
            int step = mod4(cls6(d, s, b) - cls6(d, s, a)) == 1 ? 1 : -1;
            if (h.h[b] - h.h[a] != step) throw Error(Err::NotRepresentable, "increments do not integrate");
        }
    return h;
}

double spin_weight_6v(const SquareDomain& d, const SpinPair6V& s, const SixVParams& p) {
    double w = 1.0;
    for (auto& x : d.verts) {
        bool bdis = s.spin[x.bu] != s.spin[x.bv];
        bool wdis = s.spin[x.wu] != s.spin[x.wv];
        if (bdis && wdis) throw Error(Err::IceRuleViolated, "spin pair violates the ice rule");
        if (bdis) w *= p.dir_weight(x.wdir) / p.c;
        else if (wdis) w *= p.dir_weight(x.bdir) / p.c;
    }
    return w;
}

BondPercPair sample_percolations_6v(const SquareDomain& d, const SpinPair6V& s, const std::vector<double>& u,
                                    const SixVParams& p) {
    int V = d.num_vertices();
    BondPercPair r;
    r.black.assign(V, 0);
    r.white.assign(V, 0);
    for (int v = 0; v < V; ++v) {
        const SqVertex& x = d.verts[v];
        bool bdis = s.spin[x.bu] != s.spin[x.bv];
        bool wdis = s.spin[x.wu] != s.spin[x.wv];
        if (bdis && wdis) throw Error(Err::IceRuleViolated, "spin pair violates the ice rule");
        if (bdis) {
            r.white[v] = 1;
        } else if (wdis) {
            r.black[v] = 1;
        } else {
            double tb = p.dir_weight(x.bdir) / p.c, tw = p.dir_weight(x.wdir) / p.c;
            r.black[v] = u[v] <= tb;
            r.white[v] = u[v] > 1.0 - tw;
        }
    }
    return r;
}

void resample_opposite_6v(const SquareDomain& d, SpinPair6V& s, const std::vector<char>& xi, bool perc_white,
                          Rng& rng, int fixed) {
    int S = d.num_squares();
    Dsu dsu(S);
    for (int v = 0; v < d.num_vertices(); ++v) {
        if (xi[v]) continue;
        const SqVertex& x = d.verts[v];
        if (perc_white) dsu.unite(x.bu, x.bv);
        else dsu.unite(x.wu, x.wv);
    }
    bool target_black = perc_white;
    std::vector<int8_t> val(S, 0);
    if (fixed)
        for (int q = 0; q < S; ++q)
            if (d.is_boundary[q] && d.black(q) == target_black) val[dsu.find(q)] = (int8_t)fixed;
    for (int q = 0; q < S; ++q) {
        if (d.black(q) != target_black) continue;
        int r = dsu.find(q);
        if (!val[r]) val[r] = coin(rng) ? 1 : -1;
        s.spin[q] = val[r];
    }
}

std::vector<Arrow> edge_orientation(const SquareDomain& d, const GraphHom& h) {
    std::vector<Arrow> out;
    for (int s = 0; s < d.num_squares(); ++s) {
        int e = d.nbr[s][0], n = d.nbr[s][2];
        // larger height on the right of the arrow
        if (e >= 0) out.push_back({s, e, h.h[e] > h.h[s] ? 0 : 2});
        if (n >= 0) out.push_back({s, n, h.h[n] > h.h[s] ? 3 : 1});
    }
    return out;
}

GraphHom heights_from_orientation(const SquareDomain& d, const std::vector<Arrow>& arrows, int h0) {
    int S = d.num_squares();
    std::vector<std::vector<std::pair<int, int>>> adj(S);
    for (auto& a : arrows) {
        int up;  // +1 if t is higher than s
        if (a.dir == 0 || a.dir == 2) up = a.dir == 0 ? 1 : -1;
        else up = a.dir == 3 ? 1 : -1;
        adj[a.s].push_back({a.t, up});
        adj[a.t].push_back({a.s, -up});
    }
    GraphHom g;
    g.h.assign(S, 0);
    std::vector<char> seen(S, 0);
    std::deque<int> q{0};
    g.h[0] = h0;
    seen[0] = 1;
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (auto [b, st] : adj[a])
            if (!seen[b]) { seen[b] = 1; g.h[b] = g.h[a] + st; q.push_back(b); }
    }
    return g;
}

// ---------------------------------------------------------------- circuits

namespace {

struct Plane {
    int i0, j0, w, h;
    int idx(int i, int j) const { return (j - j0) * w + (i - i0); }
    bool inside(int i, int j) const { return i >= i0 && j >= j0 && i < i0 + w && j < j0 + h; }
};

Plane make_plane(const SquareDomain& d) {
    int imin = INT_MAX, imax = INT_MIN, jmin = INT_MAX, jmax = INT_MIN;
    for (auto s : d.squares) {
        imin = std::min(imin, s.i); imax = std::max(imax, s.i);
        jmin = std::min(jmin, s.j); jmax = std::max(jmax, s.j);
    }
    return {imin - 2, jmin - 2, imax - imin + 5, jmax - jmin + 5};
}

const int kDi[4] = {1, 1, -1, -1}, kDj[4] = {1, -1, 1, -1};

// Cells of the opposite colour to `white` that can be reached from far away without crossing an
// open diagonal of colour `white` whose endpoints both lie in `inS`.
std::vector<char> exterior(const SquareDomain& d, const Plane& P, const std::vector<char>& inS,
                           const std::vector<char>& xi, bool white) {
    std::vector<char> ext((size_t)P.w * P.h, 0);
    std::deque<std::pair<int, int>> q;
    int opp_parity = white ? 0 : 1;  // parity of the cells we move through
    auto seed = [&](int i, int j) {
        if ((((i + j) % 2) + 2) % 2 != opp_parity || ext[P.idx(i, j)]) return;
        ext[P.idx(i, j)] = 1;
        q.push_back({i, j});
    };
    for (int i = P.i0; i < P.i0 + P.w; ++i) { seed(i, P.j0); seed(i, P.j0 + P.h - 1); }
    for (int j = P.j0; j < P.j0 + P.h; ++j) { seed(P.i0, j); seed(P.i0 + P.w - 1, j); }
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop_front();
        for (int t = 0; t < 4; ++t) {
            int a = i + kDi[t], b = j + kDj[t];
            if (!P.inside(a, b) || ext[P.idx(a, b)]) continue;
            int v = d.vertex_index({std::min(i, a), std::min(j, b)});
            if (v >= 0 && xi[v]) {
                const SqVertex& x = d.verts[v];
                int u1 = white ? x.wu : x.bu, u2 = white ? x.wv : x.bv;
                if (inS[u1] && inS[u2]) continue;
            }
            ext[P.idx(a, b)] = 1;
            q.push_back({a, b});
        }
    }
    return ext;
}

// connected set of non-exterior cells (diagonal moves) containing (i,j)
std::vector<char> hole(const Plane& P, const std::vector<char>& ext, int i, int j) {
    std::vector<char> H((size_t)P.w * P.h, 0);
    std::deque<std::pair<int, int>> q{{i, j}};
    H[P.idx(i, j)] = 1;
    while (!q.empty()) {
        auto [a, b] = q.front();
        q.pop_front();
        for (int t = 0; t < 4; ++t) {
            int c = a + kDi[t], e = b + kDj[t];
            if (!P.inside(c, e) || ext[P.idx(c, e)] || H[P.idx(c, e)]) continue;
            H[P.idx(c, e)] = 1;
            q.push_back({c, e});
        }
    }
    return H;
}

}  // namespace

bool bond_circuit_surrounds(const SquareDomain& d, const std::vector<char>& xi, bool white, int u) {
    Plane P = make_plane(d);
    std::vector<char> all(d.num_squares(), 1);
    auto ext = exterior(d, P, all, xi, white);
    Sq q = d.squares[u];
    if (d.black(u) == !white) {
        // u has the circuit's colour: strictly surrounded iff none of its edge neighbours is exterior
        const int ei[4] = {1, -1, 0, 0}, ej[4] = {0, 0, 1, -1};
        for (int t = 0; t < 4; ++t)
            if (ext[P.idx(q.i + ei[t], q.j + ej[t])]) return false;
        return true;
    }
    return !ext[P.idx(q.i, q.j)];
}

Exploration explore_alternating_circuits(const SquareDomain& d, const BondPercPair& xi, int u) {
    Exploration out;
    Plane P = make_plane(d);
    int S = d.num_squares();
    std::vector<char> inS(S, 1);
    bool white = true;
    Sq us = d.squares[u];
    bool u_white = !d.black(u);
    const int ei[4] = {1, -1, 0, 0}, ej[4] = {0, 0, 1, -1};
    while (true) {
        const auto& x = white ? xi.white : xi.black;
        auto ext = exterior(d, P, inS, x, white);
        std::vector<char> H;
        if (u_white == white) {
            int free_nb = -1;
            bool touches_ext = false;
            for (int t = 0; t < 4; ++t) {
                int a = us.i + ei[t], b = us.j + ej[t];
                if (ext[P.idx(a, b)]) touches_ext = true;
                else free_nb = t;
            }
            if (free_nb < 0 || touches_ext) {
                // u lies on the outermost circuit, or is the one-face circuit itself
                ++out.N;
                out.white.push_back(white);
                if (free_nb < 0) {
                    out.circuits.push_back({u});
                } else {
                    H = hole(P, ext, us.i + ei[free_nb], us.j + ej[free_nb]);
                    std::vector<int> g;
                    for (int s = 0; s < S; ++s) {
                        if (!inS[s] || d.black(s) == white) continue;
                        bool in_h = false, out_h = false;
                        for (int t = 0; t < 4; ++t) {
                            Sq c = d.squares[s];
                            (H[P.idx(c.i + ei[t], c.j + ej[t])] ? in_h : out_h) = true;
                        }
                        if (in_h && out_h) g.push_back(s);
                    }
                    out.circuits.push_back(g);
                }
                return out;
            }
            H = hole(P, ext, us.i + ei[free_nb], us.j + ej[free_nb]);
        } else {
            if (ext[P.idx(us.i, us.j)]) return out;
            H = hole(P, ext, us.i, us.j);
        }
        // u strictly inside: record the circuit and continue in its interior with the other colour
        std::vector<int> g;
        std::vector<char> next(S, 0);
        for (int s = 0; s < S; ++s) {
            Sq c = d.squares[s];
            if (d.black(s) == white) {  // cells of the opposite colour
                next[s] = H[P.idx(c.i, c.j)];
                continue;
            }
            if (!inS[s]) continue;
            int cnt = 0;
            for (int t = 0; t < 4; ++t) cnt += H[P.idx(c.i + ei[t], c.j + ej[t])];
            if (cnt == 4) next[s] = 1;
            else if (cnt > 0) g.push_back(s);
        }
        ++out.N;
        out.white.push_back(white);
        out.circuits.push_back(g);
        inS.swap(next);
        white = !white;
    }
}

std::vector<GraphHom> enumerate_graph_homs(const SquareDomain& d, size_t budget) {
    int S = d.num_squares();
    std::vector<int> order;
    std::vector<char> placed(S, 0);
    std::deque<int> q;
    for (int s = 0; s < S; ++s)
        if (d.is_boundary[s]) { placed[s] = 1; q.push_back(s); }
    if (q.empty()) throw Error(Err::BadInput, "domain has no boundary squares");
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (int t : d.nbr[s])
            if (t >= 0 && !placed[t]) { placed[t] = 1; order.push_back(t); q.push_back(t); }
    }
    std::vector<int> h(S, 0);
    std::vector<char> set(S, 0);
    for (int s = 0; s < S; ++s)
        if (d.is_boundary[s]) { set[s] = 1; h[s] = d.black(s) ? 0 : 1; }
    std::vector<GraphHom> out;
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == order.size()) {
            if (out.size() >= budget) throw Error(Err::TooLarge, "homomorphism enumeration exceeds budget");
            out.push_back({h});
            return;
        }
        int s = order[i];
        int cand[2] = {INT_MIN, INT_MIN};
        bool first = true;
        for (int t : d.nbr[s]) {
            if (t < 0 || !set[t]) continue;
            int c0 = h[t] - 1, c1 = h[t] + 1;
            if (first) { cand[0] = c0; cand[1] = c1; first = false; continue; }
            for (int& c : cand)
                if (c != INT_MIN && c != c0 && c != c1) c = INT_MIN;
        }
        set[s] = 1;
        for (int c : cand) {
            if (c == INT_MIN) continue;
            h[s] = c;
            self(self, i + 1);
        }
        set[s] = 0;
    };
    rec(rec, 0);
    return out;
}

}  // namespace lf
