#include "latticeflow/observables.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <unordered_set>

namespace lf {

Estimate jackknife(const std::vector<std::vector<double>>& cols, const SumStat& stat, int block) {
    size_t n = cols.empty() ? 0 : cols[0].size();
    if (n < 2) throw Error(Err::InsufficientSamples, "need at least 2 samples");
    size_t C = cols.size();
    if (block < 1) block = 1;
    size_t nb = n / block;
    if (nb < 2) { block = 1; nb = n; }
    std::vector<double> s1(C, 0), s2(C, 0);
    std::vector<std::vector<double>> b1(nb, std::vector<double>(C, 0)), b2 = b1;
    for (size_t c = 0; c < C; ++c)
        for (size_t i = 0; i < n; ++i) {
            double v = cols[c][i];
            s1[c] += v;
            s2[c] += v * v;
            size_t b = i / block;
            if (b < nb) { b1[b][c] += v; b2[b][c] += v * v; }
        }
    Estimate e;
    e.n_samples = (long)n;
    e.mean = stat(s1, s2, (double)n);
    std::vector<double> th(nb);
    double avg = 0;
    for (size_t b = 0; b < nb; ++b) {
        std::vector<double> t1(C), t2(C);
        for (size_t c = 0; c < C; ++c) { t1[c] = s1[c] - b1[b][c]; t2[c] = s2[c] - b2[b][c]; }
        th[b] = stat(t1, t2, (double)(n - block));
        avg += th[b];
    }
    avg /= nb;
    double ss = 0;
    for (double t : th) ss += (t - avg) * (t - avg);
    e.std_error = std::sqrt((double)(nb - 1) / nb * ss);
    return e;
}

static double mean_stat(const std::vector<double>& s1, const std::vector<double>&, double n) { return s1[0] / n; }
static double var_stat(const std::vector<double>& s1, const std::vector<double>& s2, double n) {
    return std::max(0.0, (s2[0] - s1[0] * s1[0] / n) / (n - 1));
}

Estimate estimate_mean(const std::vector<double>& xs, int block) { return jackknife({xs}, mean_stat, block); }
Estimate estimate_variance(const std::vector<double>& xs, int block) { return jackknife({xs}, var_stat, block); }
Estimate height_variance(const std::vector<double>& samples, int block) { return estimate_variance(samples, block); }

int loops_around(const HexDomain& d, const LoopConfig& w, int u) {
    int F = d.num_faces();
    std::vector<int> dist(F, INT32_MAX);
    std::deque<int> q;
    for (int f : d.boundary_faces) { dist[f] = 0; q.push_back(f); }
    while (!q.empty()) {
        int f = q.front();
        q.pop_front();
        for (int k = 0; k < 6; ++k) {
            int g = d.nbr[f][k];
            if (g < 0) continue;
            int c = w.edge[d.face_edge[f][k]] ? 1 : 0;
            if (dist[f] + c < dist[g]) {
                dist[g] = dist[f] + c;
                if (c) q.push_back(g); else q.push_front(g);
            }
        }
    }
    return dist[u];
}

// ---------------------------------------------------------------- crossings

static constexpr int kTriDirs[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};

static bool rhombus_crossing(const HexDomain& d, const SitePerc& xi, int m, bool horizontal) {
    if (m < 1) throw Error(Err::OutOfRange, "rhombus size must be >= 1");
    int W = 2 * m + 1;
    std::vector<char> open(W * W, 0), seen(W * W, 0);
    for (int l = -m; l <= m; ++l)
        for (int k = -m; k <= m; ++k) {
            int y = d.y_index({k, l});
            if (y < 0) throw Error(Err::RhombusOutOfDomain, "rhombus R_" + std::to_string(m) + " leaves the domain");
            open[(l + m) * W + (k + m)] = xi.open[y];
        }
    std::deque<int> q;
    for (int t = 0; t < W; ++t) {
        int id = horizontal ? t * W : t;  // k = -m column or l = -m row
        if (open[id]) { seen[id] = 1; q.push_back(id); }
    }
    while (!q.empty()) {
        int id = q.front();
        q.pop_front();
        int a = id % W, b = id / W;
        if ((horizontal ? a : b) == W - 1) return true;
        for (auto& dd : kTriDirs) {
            int a2 = a + dd[0], b2 = b + dd[1];
            if (a2 < 0 || b2 < 0 || a2 >= W || b2 >= W) continue;
            int j = b2 * W + a2;
            if (open[j] && !seen[j]) { seen[j] = 1; q.push_back(j); }
        }
    }
    return false;
}

bool crossing_h(const HexDomain& d, const SitePerc& xi, int m) { return rhombus_crossing(d, xi, m, true); }
bool crossing_v(const HexDomain& d, const SitePerc& xi, int m) { return rhombus_crossing(d, xi, m, false); }

SitePerc complement(const SitePerc& xi) {
    SitePerc r;
    r.open.resize(xi.open.size());
    for (size_t i = 0; i < r.open.size(); ++i) r.open[i] = !xi.open[i];
    return r;
}

// ---------------------------------------------------------------- circuits

namespace {

// triangle of the Y-triangulation: type 0 is T(k,l) around face (k,l), type 1 is D(k,l) at a down vertex
struct Tri {
    int type, k, l;
    std::array<FaceCoord, 3> ys() const {
        if (type == 0) return {FaceCoord{k, l}, FaceCoord{k - 1, l}, FaceCoord{k, l - 1}};
        return {FaceCoord{k, l}, FaceCoord{k + 1, l}, FaceCoord{k, l + 1}};
    }
    // neighbours across the edges (ys[i], ys[j]) in the order (0,1), (0,2), (1,2)
    std::array<Tri, 3> nbrs() const {
        if (type == 0) return {Tri{1, k - 1, l}, Tri{1, k, l - 1}, Tri{1, k - 1, l - 1}};
        return {Tri{0, k + 1, l}, Tri{0, k, l + 1}, Tri{0, k + 1, l + 1}};
    }
    long long key() const { return ((long long)(k + (1 << 20)) << 22 | (long long)(l + (1 << 20))) << 1 | type; }
};

}  // namespace

bool circuit_surrounds_faces(const HexDomain& d, const SitePerc& xi, const std::vector<int>& inner,
                             const std::vector<char>& region_y) {
    auto yid = [&](FaceCoord c) {
        int y = d.y_index(c);
        return (y >= 0 && region_y[y]) ? y : -1;
    };
    auto escapes = [&](const Tri& t) {
        for (auto c : t.ys())
            if (yid(c) < 0) return true;
        return false;
    };
    std::unordered_set<long long> seen;
    std::deque<Tri> q;
    auto push = [&](Tri t) {
        if (seen.insert(t.key()).second) q.push_back(t);
    };
    std::set<FaceCoord> in;
    for (int f : inner) in.insert(d.faces[f]);
    for (auto p : in) {
        push(Tri{0, p.k, p.l});
        // down vertices around p: (k-1,l), (k,l-1), (k-1,l-1)
        for (auto v : {FaceCoord{p.k - 1, p.l}, FaceCoord{p.k, p.l - 1}, FaceCoord{p.k - 1, p.l - 1}}) {
            int cnt = in.count({v.k + 1, v.l}) + in.count({v.k, v.l + 1}) + in.count({v.k + 1, v.l + 1});
            if (cnt >= 2) push(Tri{1, v.k, v.l});
        }
    }
    static constexpr int E[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    while (!q.empty()) {
        Tri t = q.front();
        q.pop_front();
        if (escapes(t)) return false;
        auto ys = t.ys();
        auto nb = t.nbrs();
        for (int e = 0; e < 3; ++e) {
            int a = yid(ys[E[e][0]]), b = yid(ys[E[e][1]]);
            if (a >= 0 && b >= 0 && xi.open[a] && xi.open[b]) continue;
            push(nb[e]);
        }
    }
    return true;
}

bool circuit_surrounds(const HexDomain& d, const SitePerc& xi, int u) {
    return circuit_surrounds_faces(d, xi, {u}, std::vector<char>(d.num_y(), 1));
}

bool circ_event(const HexDomain& d, const SitePerc& xi, int n) {
    if (n < 1) throw Error(Err::OutOfRange, "annulus size must be >= 1");
    std::vector<int> inner;
    int outer_count = 0;
    for (int f = 0; f < d.num_faces(); ++f) {
        int r = hex_distance(d.faces[f]);
        if (r <= n) inner.push_back(f);
        if (r <= 2 * n) ++outer_count;
    }
    if (outer_count != 3 * 2 * n * (2 * n + 1) + 1)
        throw Error(Err::AnnulusOutOfDomain, "Lambda_" + std::to_string(2 * n) + " is not inside the domain");
    std::vector<char> region(d.num_y(), 0);
    for (int y = 0; y < d.num_y(); ++y) {
        bool ok = true;
        for (int f : d.y_faces[y]) ok = ok && hex_distance(d.faces[f]) <= 2 * n;
        region[y] = ok;
    }
    return circuit_surrounds_faces(d, xi, inner, region);
}

int superduality_violations(const PercolationPair& p) {
    int v = 0;
    for (size_t y = 0; y < p.black.open.size(); ++y) v += !p.black.open[y] && !p.white.open[y];
    return v;
}

int superduality_violations(const BondPercPair& p) {
    int v = 0;
    for (size_t x = 0; x < p.black.size(); ++x) v += !p.black[x] && !p.white[x];
    return v;
}

// ---------------------------------------------------------------- MC observables

static std::vector<double> uniforms(Rng& rng, int n) {
    std::vector<double> u(n);
    for (auto& v : u) v = uniform01(rng);
    return u;
}

MCResult crossing_probability(double x, int m, const ChainConfig& cfg, int domain_radius) {
    if (m < 1) throw Error(Err::OutOfRange, "rhombus size must be >= 1");
    int R = domain_radius > 0 ? domain_radius : 4 * m;
    HexDomain d = hex_ball(R);
    if (d.y_index({m, m}) < 0 || d.y_index({-m, -m}) < 0)
        throw Error(Err::RhombusOutOfDomain, "rhombus R_" + std::to_string(m) + " leaves the domain");
    MCResult res;
    res.warnings = regime_warnings(LoopParams{2.0, x});
    LoopChain ch(d, x, BC{1, 0});
    std::vector<double> hits;
    run_chain(ch, cfg, [&](long, LoopChain& c, Rng& rng) {
        auto xi = sample_percolations(d, c.s, uniforms(rng, d.num_y()), x);
        hits.push_back(crossing_h(d, split_sign(d, xi.black, c.s.black, 1), m));
    });
    res.est = estimate_mean(hits);
    return res;
}

MCResult alpha_n(int n, double rho, double x, const ChainConfig& cfg) {
    if (!(rho > 2)) throw Error(Err::OutOfRange, "rho must exceed 2");
    if (n < 1) throw Error(Err::OutOfRange, "n must be >= 1");
    HexDomain d = hex_ball((int)std::ceil(rho * n - 1e-9));
    MCResult res;
    res.warnings = regime_warnings(LoopParams{2.0, x});
    LoopChain ch(d, x, BC{-1, 0});
    std::vector<double> hits;
    run_chain(ch, cfg, [&](long, LoopChain& c, Rng& rng) {
        auto xi = sample_percolations(d, c.s, uniforms(rng, d.num_y()), x);
        hits.push_back(circ_event(d, split_sign(d, xi.black, c.s.black, 1), n));
    });
    res.est = estimate_mean(hits);
    return res;
}

VarianceRun center_variance(int n, double x, const ChainConfig& cfg) {
    HexDomain d = hex_ball(n);
    int u = d.face_index({0, 0});
    LoopChain ch(d, x, BC{1, 1});
    std::vector<double> hs, ls;
    run_chain(ch, cfg, [&](long, LoopChain& c, Rng&) {
        hs.push_back(spins_to_height(d, c.s).h[u]);
        ls.push_back(loops_around(d, loops_of_spins(d, c.s), u));
    });
    return {estimate_variance(hs), estimate_mean(ls)};
}

static int central_square(const SquareDomain& d) {
    int u = d.square_index({0, 0});
    if (u >= 0) return u;
    double ci = 0, cj = 0;
    for (auto& s : d.squares) { ci += s.i; cj += s.j; }
    ci /= d.num_squares();
    cj /= d.num_squares();
    double best = 1e300;
    for (int q = 0; q < d.num_squares(); ++q) {
        double dd = std::hypot(d.squares[q].i - ci, d.squares[q].j - cj);
        if (dd < best) { best = dd; u = q; }
    }
    return u;
}

Decomposition variance_decomposition(const SquareDomain& d, const SixVParams& p, const ChainConfig& cfg) {
    int u = central_square(d);
    SixVChain ch(d, p, BC{1, 1});
    std::vector<double> hs, nm, st;
    run_chain(ch, cfg, [&](long, SixVChain& c, Rng& rng) {
        auto h = spins_to_height_6v(d, c.s);
        auto xi = sample_percolations_6v(d, c.s, uniforms(rng, d.num_vertices()), p);
        auto ex = explore_alternating_circuits(d, xi, u);
        hs.push_back(h.h[u]);
        nm.push_back(std::max(ex.N - 1, 0));
        st.push_back(ex.N > 0 ? h.h[ex.circuits[0][0]] : 0);
    });
    Decomposition r;
    r.var_h = estimate_variance(hs);
    r.n_minus_1 = estimate_mean(nm);
    r.var_start = estimate_variance(st);
    r.rhs = jackknife({nm, st}, [](const std::vector<double>& s1, const std::vector<double>& s2, double n) {
        return s1[0] / n + (s2[1] - s1[1] * s1[1] / n) / (n - 1);
    });
    return r;
}

LogFit fit_log_growth(const std::vector<std::pair<int, Estimate>>& pts) {
    std::set<int> ns;
    for (auto& p : pts) ns.insert(p.first);
    if (ns.size() < 3) throw Error(Err::InsufficientPoints, "need at least 3 distinct n");
    bool weighted = true;
    for (auto& p : pts) weighted = weighted && p.second.std_error > 0;
    size_t N = pts.size();
    std::vector<double> X(N), Y(N), W(N);
    for (size_t i = 0; i < N; ++i) {
        X[i] = std::log((double)pts[i].first);
        Y[i] = pts[i].second.mean;
        W[i] = weighted ? 1.0 / (pts[i].second.std_error * pts[i].second.std_error) : 1.0;
    }
    double sw = 0, sx = 0, sy = 0;
    for (size_t i = 0; i < N; ++i) { sw += W[i]; sx += W[i] * X[i]; sy += W[i] * Y[i]; }
    double xm = sx / sw, ym = sy / sw, sxx = 0, sxy = 0;
    for (size_t i = 0; i < N; ++i) {
        sxx += W[i] * (X[i] - xm) * (X[i] - xm);
        sxy += W[i] * (X[i] - xm) * (Y[i] - ym);
    }
    LogFit f;
    f.slope = sxy / sxx;
    f.intercept = ym - f.slope * xm;
    if (weighted) {
        f.slope_se = std::sqrt(1.0 / sxx);
    } else {
        double rss = 0;
        for (size_t i = 0; i < N; ++i) {
            double r = Y[i] - f.intercept - f.slope * X[i];
            rss += r * r;
        }
        f.slope_se = N > 2 ? std::sqrt(rss / (N - 2) / sxx) : 0.0;
    }
    f.ci_lo = f.slope - 1.96 * f.slope_se;
    f.ci_hi = f.slope + 1.96 * f.slope_se;
    return f;
}

long fkg_violations(const std::map<std::string, double>& f, double rel_tol) {
    std::vector<std::pair<std::string, double>> v(f.begin(), f.end());
    auto get = [&](const std::string& s) {
        auto it = f.find(s);
        return it == f.end() ? 0.0 : it->second;
    };
    long bad = 0;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j) {
            const std::string &a = v[i].first, &b = v[j].first;
            if (a.size() != b.size()) throw Error(Err::EncodingMismatch, "marginal strings differ in length");
            std::string hi = a, lo = a;
            for (size_t k = 0; k < a.size(); ++k) {
                bool pa = a[k] == '+', pb = b[k] == '+';
                hi[k] = (pa || pb) ? '+' : '-';
                lo[k] = (pa && pb) ? '+' : '-';
            }
            double lhs = get(hi) * get(lo), rhs = v[i].second * v[j].second;
            if (lhs < rhs * (1 - rel_tol)) ++bad;
        }
    return bad;
}

std::map<std::string, double> black_marginal(const HexDomain& d, const ExactDistribution& ex) {
    std::map<std::string, double> m;
    for (size_t i = 0; i < ex.states.size(); ++i) {
        std::string b(d.num_faces(), '+');
        for (int f = 0; f < d.num_faces(); ++f) b[f] = (ex.states[i][f] == 'a' || ex.states[i][f] == 'b') ? '+' : '-';
        m[b] += ex.probs[i];
    }
    return m;
}

std::map<std::string, double> black_marginal_6v(const SquareDomain& d, const ExactDistribution& ex) {
    std::map<std::string, double> m;
    for (size_t i = 0; i < ex.states.size(); ++i) {
        std::string b;
        for (int q = 0; q < d.num_squares(); ++q)
            if (d.black(q)) b += ex.states[i][q];
        m[b] += ex.probs[i];
    }
    return m;
}

std::string csv_header() { return "observable,name,n,mean,std_error,n_samples\n"; }

std::string csv_row(const std::string& observable, const std::string& name, int n, const Estimate& e) {
    char buf[128];
    std::snprintf(buf, sizeof buf, ",%d,%.17g,%.17g,%ld\n", n, e.mean, e.std_error, e.n_samples);
    return observable + "," + name + buf;
}

}  // namespace lf
