#include "latticeflow/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "latticeflow/dsu.hpp"

namespace lf {

void ChainConfig::validate() const {
    if (burn_in < 0 || sweeps <= burn_in) throw Error(Err::OutOfRange, "need sweeps > burn_in >= 0");
    if (thinning < 1) throw Error(Err::OutOfRange, "thinning must be at least 1");
    if (glauber_passes < 0 || cluster_pairs < 0) throw Error(Err::OutOfRange, "negative schedule entry");
}

double ExactDistribution::prob(const std::string& s) const {
    for (size_t i = 0; i < states.size(); ++i)
        if (states[i] == s) return probs[i];
    return 0.0;
}

std::string encode(const SpinPair& s) {
    std::string r(s.black.size(), '?');
    for (size_t f = 0; f < r.size(); ++f) {
        int c = s.black[f] > 0 ? (s.white[f] > 0 ? 0 : 1) : (s.white[f] > 0 ? 3 : 2);
        r[f] = char('a' + c);
    }
    return r;
}

std::string encode(const SpinPair6V& s) {
    std::string r(s.spin.size(), '?');
    for (size_t q = 0; q < r.size(); ++q) r[q] = s.spin[q] > 0 ? '+' : '-';
    return r;
}

std::string encode(const FKConfig& c) {
    std::string r(c.eta.size(), '0');
    for (size_t e = 0; e < r.size(); ++e) r[e] = c.eta[e] ? '1' : '0';
    return r;
}

std::string encode(const LipschitzFn& h) {
    std::string r;
    for (size_t f = 0; f < h.h.size(); ++f) {
        if (f) r += ',';
        r += std::to_string(h.h[f]);
    }
    return r;
}

std::string encode(const LoopConfig& w) {
    std::string r(w.edge.size(), '0');
    for (size_t e = 0; e < r.size(); ++e) r[e] = w.edge[e] ? '1' : '0';
    return r;
}

// ---------------------------------------------------------------- enumeration

static std::vector<int> bfs_order(const HexDomain& d) {
    std::vector<int> order;
    std::vector<char> seen(d.num_faces(), 0);
    std::deque<int> q;
    for (int f0 = 0; f0 < d.num_faces(); ++f0) {
        if (seen[f0]) continue;
        seen[f0] = 1;
        q.push_back(f0);
        while (!q.empty()) {
            int f = q.front();
            q.pop_front();
            order.push_back(f);
            for (int g : d.nbr[f])
                if (g >= 0 && !seen[g]) { seen[g] = 1; q.push_back(g); }
        }
    }
    return order;
}

std::vector<SpinPair> enumerate_spin_pairs(const HexDomain& d, BC bc, size_t budget) {
    int F = d.num_faces();
    auto order = bfs_order(d);
    std::vector<char> set(F, 0);
    SpinPair cur{std::vector<int8_t>(F, 1), std::vector<int8_t>(F, 1)};
    std::vector<SpinPair> out;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == F) {
            if (out.size() >= budget) throw Error(Err::TooLarge, "spin enumeration exceeds budget");
            out.push_back(cur);
            return;
        }
        int f = order[i];
        for (int sb : {1, -1}) {
            if (d.is_boundary[f] && bc.black && sb != bc.black) continue;
            for (int sw : {1, -1}) {
                if (d.is_boundary[f] && bc.white && sw != bc.white) continue;
                bool ok = true;
                for (int g : d.nbr[f])
                    if (g >= 0 && set[g] && cur.black[g] != sb && cur.white[g] != sw) { ok = false; break; }
                if (!ok) continue;
                cur.black[f] = (int8_t)sb;
                cur.white[f] = (int8_t)sw;
                set[f] = 1;
                self(self, i + 1);
                set[f] = 0;
            }
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<SpinPair6V> enumerate_spins_6v(const SquareDomain& d, BC bc, size_t budget) {
    int S = d.num_squares();
    std::vector<char> set(S, 0);
    SpinPair6V cur{std::vector<int8_t>(S, 1)};
    std::vector<SpinPair6V> out;
    auto ok_at = [&](int v) {
        const SqVertex& x = d.verts[v];
        for (int q : {x.sw, x.se, x.nw, x.ne})
            if (!set[q]) return true;
        return !(cur.spin[x.bu] != cur.spin[x.bv] && cur.spin[x.wu] != cur.spin[x.wv]);
    };
    auto rec = [&](auto&& self, int q) -> void {
        if (q == S) {
            if (out.size() >= budget) throw Error(Err::TooLarge, "spin enumeration exceeds budget");
            out.push_back(cur);
            return;
        }
        int want = d.is_boundary[q] ? (d.black(q) ? bc.black : bc.white) : 0;
        for (int v : {1, -1}) {
            if (want && v != want) continue;
            cur.spin[q] = (int8_t)v;
            set[q] = 1;
            bool ok = true;
            for (int cv : d.corner_v[q])
                if (cv >= 0 && !ok_at(cv)) { ok = false; break; }
            if (ok) self(self, q + 1);
            set[q] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<LoopConfig> enumerate_loop_configs(const HexDomain& d, size_t budget) {
    std::vector<int> le;
    for (int e = 0; e < (int)d.edges.size(); ++e)
        if (d.edges[e].loopable) le.push_back(e);
    int NV = d.num_y() + (int)d.down_faces.size();
    std::vector<int> last(NV, -1), deg(NV, 0);
    for (int i = 0; i < (int)le.size(); ++i) {
        last[d.edges[le[i]].up] = i;
        last[d.edges[le[i]].down] = i;
    }
    LoopConfig cur;
    cur.edge.assign(d.edges.size(), 0);
    std::vector<LoopConfig> out;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == (int)le.size()) {
            if (out.size() >= budget) throw Error(Err::TooLarge, "loop enumeration exceeds budget");
            out.push_back(cur);
            return;
        }
        const HexEdge& he = d.edges[le[i]];
        for (int on : {0, 1}) {
            if (on && (deg[he.up] == 2 || deg[he.down] == 2)) continue;
            deg[he.up] += on;
            deg[he.down] += on;
            cur.edge[le[i]] = (char)on;
            bool ok = true;
            for (int v : {he.up, he.down})
                if (last[v] == i && deg[v] == 1) ok = false;
            if (ok) self(self, i + 1);
            deg[he.up] -= on;
            deg[he.down] -= on;
            cur.edge[le[i]] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

static void normalise(ExactDistribution& ex) {
    ex.Z = 0;
    for (double w : ex.probs) ex.Z += w;
    for (double& w : ex.probs) w /= ex.Z;
}

ExactDistribution exact_loop_spins(const HexDomain& d, double x, BC bc, size_t budget) {
    ExactDistribution ex;
    for (auto& s : enumerate_spin_pairs(d, bc, budget)) {
        ex.states.push_back(encode(s));
        ex.probs.push_back(spin_weight(d, s, x));
    }
    normalise(ex);
    return ex;
}

ExactDistribution exact_lipschitz(const HexDomain& d, double x, size_t budget) {
    ExactDistribution ex;
    for (auto& h : enumerate_lipschitz(d, budget)) {
        long walls = 0;
        for (auto& e : d.edges) walls += h.h[e.f] != h.h[e.g];
        ex.states.push_back(encode(h));
        ex.probs.push_back(std::pow(x, (double)walls));
    }
    normalise(ex);
    return ex;
}

ExactDistribution exact_loops(const HexDomain& d, const LoopParams& p, size_t budget) {
    ExactDistribution ex;
    for (auto& w : enumerate_loop_configs(d, budget)) {
        ex.states.push_back(encode(w));
        ex.probs.push_back(loop_weight(d, w, p));
    }
    normalise(ex);
    return ex;
}

ExactDistribution exact_six_vertex(const SquareDomain& d, const SixVParams& p, BC bc, size_t budget) {
    ExactDistribution ex;
    for (auto& s : enumerate_spins_6v(d, bc, budget)) {
        ex.states.push_back(encode(s));
        ex.probs.push_back(spin_weight_6v(d, s, p));
    }
    normalise(ex);
    return ex;
}

static void check_fk_budget(const FKGraph& g, size_t budget) {
    if (g.edges.size() > 40 || (size_t(1) << g.edges.size()) > budget)
        throw Error(Err::TooLarge, "FK enumeration exceeds budget");
}

ExactDistribution exact_fk(const FKGraph& g, const FKParams& p, bool wired, size_t budget) {
    check_fk_budget(g, budget);
    int E = (int)g.edges.size();
    long total = 1L << E;
    ExactDistribution ex;
    ex.states.resize(total);
    ex.probs.resize(total);
#pragma omp parallel for schedule(static)
    for (long m = 0; m < total; ++m) {
        FKConfig c;
        c.wired = wired;
        c.eta.resize(E);
        for (int e = 0; e < E; ++e) c.eta[e] = m >> e & 1;
        ex.states[m] = encode(c);
        ex.probs[m] = fk_weight(g, c, p);
    }
    normalise(ex);
    return ex;
}

ExactDistribution exact_fk_serial(const FKGraph& g, const FKParams& p, bool wired, size_t budget) {
    check_fk_budget(g, budget);
    int E = (int)g.edges.size();
    ExactDistribution ex;
    FKConfig c;
    c.wired = wired;
    c.eta.resize(E);
    for (long m = 0; m < (1L << E); ++m) {
        for (int e = 0; e < E; ++e) c.eta[e] = m >> e & 1;
        ex.states.push_back(encode(c));
        ex.probs.push_back(fk_weight(g, c, p));
    }
    normalise(ex);
    return ex;
}

double tv_distance(const Empirical& emp, const ExactDistribution& ex) {
    if (emp.total <= 0) throw Error(Err::InsufficientSamples, "empty empirical distribution");
    size_t len = ex.states.empty() ? 0 : ex.states[0].size();
    std::unordered_map<std::string, double> p;
    for (size_t i = 0; i < ex.states.size(); ++i) {
        if (ex.states[i].size() != len) throw Error(Err::EncodingMismatch, "exact states of mixed length");
        p[ex.states[i]] += ex.probs[i];
    }
    double tv = 0;
    for (auto& [s, n] : emp.counts) {
        if (s.size() != len) throw Error(Err::EncodingMismatch, "empirical state encoding differs from exact");
        double ph = (double)n / emp.total;
        auto it = p.find(s);
        if (it == p.end()) tv += ph;
        else { tv += std::abs(ph - it->second); it->second = -1; }
    }
    for (auto& [s, q] : p)
        if (q >= 0) tv += q;
    return 0.5 * tv;
}

// ---------------------------------------------------------------- hex kernels

double glauber_plus_prob(const HexDomain& d, const SpinPair& s, int f, bool white, double x, BC bc) {
    int fixed = white ? bc.white : bc.black;
    if (d.is_boundary[f] && fixed) return fixed > 0 ? 1.0 : 0.0;
    double w[2];
    for (int k = 0; k < 2; ++k) {
        int v = k == 0 ? 1 : -1;
        auto B = [&](int g) { return (!white && g == f) ? v : (int)s.black[g]; };
        auto W = [&](int g) { return (white && g == f) ? v : (int)s.white[g]; };
        bool ok = true;
        for (int g : d.nbr[f])
            if (g >= 0 && B(f) != B(g) && W(f) != W(g)) { ok = false; break; }
        int walls = 0;
        for (int y : d.face_y[f]) {
            if (y < 0) continue;
            auto& t = d.y_faces[y];
            bool mb = B(t[0]) == B(t[1]) && B(t[1]) == B(t[2]);
            bool mw = W(t[0]) == W(t[1]) && W(t[1]) == W(t[2]);
            walls += !(mb && mw);
        }
        w[k] = ok ? std::pow(x * x, (double)walls) : 0.0;
    }
    return w[0] / (w[0] + w[1]);
}

void glauber_step(const HexDomain& d, SpinPair& s, int f, bool white, Rng& rng, double x, BC bc) {
    double pp = glauber_plus_prob(d, s, f, white, x, bc);
    double u = uniform01(rng);
    (white ? s.white : s.black)[f] = u < pp ? 1 : -1;
}

bool cluster_sweeps_allowed(BC bc) { return bc.any_fixed(); }

void cluster_sweep(const HexDomain& d, SpinPair& s, bool perc_white, Rng& rng, double x, BC bc) {
    if (!cluster_sweeps_allowed(bc)) return;
    std::vector<double> u(d.num_y());
    for (auto& v : u) v = uniform01(rng);
    auto xi = sample_percolations(d, s, u, x);
    if (perc_white) s.black = resample_given_perc(d, xi.white, rng, bc.black);
    else s.white = resample_given_perc(d, xi.black, rng, bc.white);
}

// ---------------------------------------------------------------- six-vertex kernels

double glauber_plus_prob_6v(const SquareDomain& d, const SpinPair6V& s, int q, const SixVParams& p, BC bc) {
    int fixed = d.black(q) ? bc.black : bc.white;
    if (d.is_boundary[q] && fixed) return fixed > 0 ? 1.0 : 0.0;
    double w[2];
    for (int k = 0; k < 2; ++k) {
        int v = k == 0 ? 1 : -1;
        auto S = [&](int r) { return r == q ? v : (int)s.spin[r]; };
        double wk = 1.0;
        for (int cv : d.corner_v[q]) {
            if (cv < 0) continue;
            const SqVertex& x = d.verts[cv];
            bool bd = S(x.bu) != S(x.bv), wd = S(x.wu) != S(x.wv);
            if (bd && wd) { wk = 0; break; }
            if (bd) wk *= p.dir_weight(x.wdir) / p.c;
            else if (wd) wk *= p.dir_weight(x.bdir) / p.c;
        }
        w[k] = wk;
    }
    return w[0] / (w[0] + w[1]);
}

void glauber_step_6v(const SquareDomain& d, SpinPair6V& s, int q, Rng& rng, const SixVParams& p, BC bc) {
    double pp = glauber_plus_prob_6v(d, s, q, p, bc);
    double u = uniform01(rng);
    s.spin[q] = u < pp ? 1 : -1;
}

void cluster_sweep_6v(const SquareDomain& d, SpinPair6V& s, bool perc_white, Rng& rng, const SixVParams& p, BC bc) {
    if (!cluster_sweeps_allowed(bc)) return;
    std::vector<double> u(d.num_vertices());
    for (auto& v : u) v = uniform01(rng);
    auto xi = sample_percolations_6v(d, s, u, p);
    resample_opposite_6v(d, s, perc_white ? xi.white : xi.black, perc_white, rng, perc_white ? bc.black : bc.white);
}

// ---------------------------------------------------------------- FK kernel

double fk_open_prob(const FKGraph& g, const FKConfig& c, int e, const FKParams& p) {
    Dsu dsu(g.nv + 1);
    if (c.wired)
        for (int v = 0; v < g.nv; ++v)
            if (g.boundary[v]) dsu.unite(v, g.nv);
    for (int f = 0; f < (int)g.edges.size(); ++f)
        if (f != e && c.eta[f]) dsu.unite(g.edges[f][0], g.edges[f][1]);
    double pe = g.cls[e] == Dir::A ? p.pa : p.pb;
    if (dsu.same(g.edges[e][0], g.edges[e][1])) return pe;
    return pe / (pe + (1 - pe) * p.q);
}

void fk_heatbath_step(const FKGraph& g, FKConfig& c, int e, Rng& rng, const FKParams& p) {
    double po = fk_open_prob(g, c, e, p);
    c.eta[e] = uniform01(rng) < po;
}

// ---------------------------------------------------------------- chains

LoopChain::LoopChain(const HexDomain& dom, double x_, BC bc_) : d(&dom), x(x_), bc(bc_) {
    s.black.assign(dom.num_faces(), (int8_t)(bc.black ? bc.black : 1));
    s.white.assign(dom.num_faces(), (int8_t)(bc.white ? bc.white : 1));
}

void LoopChain::sweep(Rng& rng, const ChainConfig& cfg) {
    for (int k = 0; k < cfg.glauber_passes; ++k)
        for (int f = 0; f < d->num_faces(); ++f) {
            glauber_step(*d, s, f, false, rng, x, bc);
            glauber_step(*d, s, f, true, rng, x, bc);
        }
    for (int k = 0; k < cfg.cluster_pairs; ++k) {
        cluster_sweep(*d, s, false, rng, x, bc);
        cluster_sweep(*d, s, true, rng, x, bc);
    }
}

SixVChain::SixVChain(const SquareDomain& dom, const SixVParams& p_, BC bc_) : d(&dom), p(p_), bc(bc_) {
    s.spin.resize(dom.num_squares());
    for (int q = 0; q < dom.num_squares(); ++q) {
        int v = dom.black(q) ? bc.black : bc.white;
        s.spin[q] = (int8_t)(v ? v : 1);
    }
}

void SixVChain::sweep(Rng& rng, const ChainConfig& cfg) {
    for (int k = 0; k < cfg.glauber_passes; ++k)
        for (int q = 0; q < d->num_squares(); ++q) glauber_step_6v(*d, s, q, rng, p, bc);
    for (int k = 0; k < cfg.cluster_pairs; ++k) {
        cluster_sweep_6v(*d, s, false, rng, p, bc);
        cluster_sweep_6v(*d, s, true, rng, p, bc);
    }
}

FKChain::FKChain(const FKGraph& graph, const FKParams& p_, bool wired) : g(&graph), p(p_) {
    c.wired = wired;
    c.eta.assign(graph.edges.size(), 0);
}

void FKChain::sweep(Rng& rng, const ChainConfig&) {
    for (int e = 0; e < (int)g->edges.size(); ++e) fk_heatbath_step(*g, c, e, rng, p);
}

std::vector<std::string> regime_warnings(const LoopParams& p) {
    std::vector<std::string> w;
    if (p.x > 1) w.push_back("x > 1: outside the FKG regime, positive association not guaranteed");
    if (p.x < 1 / std::sqrt(2.0) - 1e-15) w.push_back("x < 1/sqrt(2): super-duality not guaranteed");
    return w;
}

std::vector<std::string> regime_warnings(const SixVParams& p) {
    std::vector<std::string> w;
    if (p.c < std::max(p.a, p.b)) w.push_back("c < max(a,b): outside the FKG regime");
    if (p.c > p.a + p.b) w.push_back("c > a+b: localised regime, super-duality not guaranteed");
    return w;
}

std::vector<std::string> regime_warnings(const FKParams& p) {
    std::vector<std::string> w;
    if (p.q < 1) w.push_back("q < 1: FKG inequality fails");
    return w;
}

}  // namespace lf
