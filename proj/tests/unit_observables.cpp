#include <doctest.h>

#include <cmath>
#include <functional>

#include "latticeflow/dsu.hpp"
#include "latticeflow/observables.hpp"

using namespace lf;

static bool throws_code(const std::function<void()>& f, Err code) {
    try {
        f();
    } catch (const Error& e) {
        return e.code == code;
    }
    return false;
}

TEST_CASE("loops_around") {
    HexDomain d = hex_ball(3);
    int u = d.face_index({0, 0});
    LoopConfig w{std::vector<char>(d.edges.size(), 0)};
    CHECK(loops_around(d, w, u) == 0);
    for (int e : d.face_edge[u]) w.edge[e] = 1;
    CHECK(loops_around(d, w, u) == 1);
    // second loop: the ring between distance 1 and 2
    for (size_t e = 0; e < d.edges.size(); ++e) {
        int a = hex_distance(d.faces[d.edges[e].f]), b = hex_distance(d.faces[d.edges[e].g]);
        if (std::min(a, b) == 1 && std::max(a, b) == 2) w.edge[e] = 1;
    }
    CHECK(loops_around(d, w, u) == 2);
    CHECK(loops_around(d, w, d.face_index({1, 0})) == 1);
    CHECK(loops_around(d, w, d.face_index({2, 0})) == 0);
}

TEST_CASE("jackknife estimates") {
    std::vector<double> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(i % 2);
    auto m = estimate_mean(xs, 10);
    CHECK(m.mean == doctest::Approx(0.5));
    CHECK(m.n_samples == 1000);
    CHECK(m.std_error == doctest::Approx(0.0).epsilon(1e-12));
    auto v = estimate_variance(xs, 1);
    CHECK(v.mean == doctest::Approx(0.25 * 1000 / 999.0));

    // iid samples: single-sample jackknife error of the mean is s/sqrt(n)
    std::vector<double> ys = {1, 4, 2, 8, 5, 7};
    double mu = 27.0 / 6, s2 = 0;
    for (double y : ys) s2 += (y - mu) * (y - mu);
    s2 /= 5;
    auto e = estimate_mean(ys, 1);
    CHECK(e.mean == doctest::Approx(mu));
    CHECK(e.std_error == doctest::Approx(std::sqrt(s2 / 6)).epsilon(1e-12));
    CHECK(throws_code([] { estimate_mean({1.0}); }, Err::InsufficientSamples));
}

TEST_CASE("fit_log_growth") {
    std::vector<std::pair<int, Estimate>> pts;
    for (int n : {2, 4, 8, 16}) pts.push_back({n, Estimate{2 * std::log(n) + 0.3, 0.01, 100}});
    auto f = fit_log_growth(pts);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(f.ci_lo < 2.0);
    CHECK(f.ci_hi > 2.0);

    std::vector<std::pair<int, Estimate>> flat;
    for (int n : {2, 4, 8}) flat.push_back({n, Estimate{1.0 + (n == 4 ? 0.01 : 0.0), 0.02, 100}});
    auto g = fit_log_growth(flat);
    CHECK(g.ci_lo <= 0.0);
    CHECK(g.ci_hi >= 0.0);

    std::vector<std::pair<int, Estimate>> two = {{2, {}}, {4, {}}, {4, {}}};
    CHECK(throws_code([&] { fit_log_growth(two); }, Err::InsufficientPoints));
}

TEST_CASE("crossing duality and rhombus bounds") {
    HexDomain d = hex_ball(5);
    Rng rng = make_rng(7);
    for (int t = 0; t < 500; ++t) {
        SitePerc xi;
        for (int y = 0; y < d.num_y(); ++y) xi.open.push_back(uniform01(rng) < 0.5);
        for (int m = 1; m <= 2; ++m) CHECK(crossing_h(d, xi, m) != crossing_v(d, complement(xi), m));
    }
    SitePerc all{std::vector<char>(d.num_y(), 1)};
    CHECK(crossing_h(d, all, 2));
    CHECK(crossing_v(d, all, 2));
    CHECK(throws_code([&] { crossing_h(d, all, 6); }, Err::RhombusOutOfDomain));
    CHECK(throws_code([&] { crossing_probability(1.0, 2, ChainConfig{}, 2); }, Err::RhombusOutOfDomain));
}

// ------------------------------------------------------------- circuit oracle

namespace {

struct Pt {
    double x, y;
};

Pt y_position(FaceCoord tri) {
    double x = 0, y = 0;
    for (auto f : YVertex{tri}.faces()) {
        x += f.k + f.l / 2.0;
        y += f.l * std::sqrt(3.0) / 2;
    }
    return {x / 3, y / 3};
}

bool inside(const std::vector<Pt>& poly, Pt p) {
    bool in = false;
    for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if ((poly[i].y > p.y) != (poly[j].y > p.y) &&
            p.x < (poly[j].x - poly[i].x) * (p.y - poly[i].y) / (poly[j].y - poly[i].y) + poly[i].x)
            in = !in;
    }
    return in;
}

// bitmasks of every simple cycle of the Y-triangulation whose polygon contains point p
std::vector<uint64_t> surrounding_cycles(const HexDomain& d, Pt p) {
    int Y = d.num_y();
    std::vector<std::vector<int>> adj(Y);
    const int off[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    for (int y = 0; y < Y; ++y)
        for (auto& o : off) {
            int z = d.y_index({d.y_coord[y].k + o[0], d.y_coord[y].l + o[1]});
            if (z >= 0) adj[y].push_back(z);
        }
    std::vector<uint64_t> out;
    std::vector<int> path;
    std::vector<char> vis(Y, 0);
    std::function<void(int, int)> dfs = [&](int s, int v) {
        for (int w : adj[v]) {
            if (w == s && path.size() > 2) {
                std::vector<Pt> poly;
                uint64_t mask = 0;
                for (int q : path) {
                    poly.push_back(y_position(d.y_coord[q]));
                    mask |= uint64_t(1) << q;
                }
                if (inside(poly, p)) out.push_back(mask);
            } else if (w > s && !vis[w]) {
                vis[w] = 1;
                path.push_back(w);
                dfs(s, w);
                path.pop_back();
                vis[w] = 0;
            }
        }
    };
    for (int s = 0; s < Y; ++s) {
        vis[s] = 1;
        path = {s};
        dfs(s, s);
        vis[s] = 0;
    }
    return out;
}

}  // namespace

TEST_CASE("circuit_surrounds agrees with a cycle enumeration oracle") {
    HexDomain d = hex_ball(2);
    int Y = d.num_y();
    REQUIRE(Y <= 20);
    for (FaceCoord c : {FaceCoord{0, 0}, FaceCoord{1, 0}, FaceCoord{0, -1}}) {
        int u = d.face_index(c);
        auto cycles = surrounding_cycles(d, {c.k + c.l / 2.0, c.l * std::sqrt(3.0) / 2});
        REQUIRE(!cycles.empty());
        long hits = 0;
        for (uint64_t m = 0; m < (uint64_t(1) << Y); ++m) {
            SitePerc xi;
            for (int y = 0; y < Y; ++y) xi.open.push_back(m >> y & 1);
            bool want = false;
            for (uint64_t cy : cycles) want = want || (cy & m) == cy;
            bool got = circuit_surrounds(d, xi, u);
            CHECK(got == want);
            hits += got;
        }
        CHECK(hits > 0);
    }
    SitePerc none{std::vector<char>(Y, 0)}, all{std::vector<char>(Y, 1)};
    CHECK_FALSE(circuit_surrounds(d, none, d.face_index({0, 0})));
    CHECK(circuit_surrounds(d, all, d.face_index({0, 0})));
}

// ------------------------------------------------------------- exact x = 1 oracles

namespace {

// At x = 1 every consistent spin pair has weight one. Given the black spins, the white spins must be
// constant across each edge where the black spins differ, so the black marginal is proportional to
// 2^(components of the faces joined along those edges). The percolation is xi_black = [black mono].
double exact_black_event(const HexDomain& d, int fixed, const std::function<bool(const SitePerc&)>& event) {
    std::vector<int> inner;
    for (int f = 0; f < d.num_faces(); ++f)
        if (!d.is_boundary[f]) inner.push_back(f);
    std::vector<int8_t> sb(d.num_faces(), (int8_t)fixed);
    double Z = 0, num = 0;
    for (long m = 0; m < (1L << inner.size()); ++m) {
        for (size_t i = 0; i < inner.size(); ++i) sb[inner[i]] = (m >> i & 1) ? 1 : -1;
        Dsu dsu(d.num_faces());
        int comps = d.num_faces();
        for (auto& e : d.edges)
            if (sb[e.f] != sb[e.g] && dsu.unite(e.f, e.g)) --comps;
        double w = std::ldexp(1.0, comps);
        SitePerc xi;
        xi.open.resize(d.num_y());
        for (int y = 0; y < d.num_y(); ++y) {
            auto& f = d.y_faces[y];
            xi.open[y] = sb[f[0]] == 1 && sb[f[1]] == 1 && sb[f[2]] == 1;
        }
        Z += w;
        if (event(xi)) num += w;
    }
    return num / Z;
}

ChainConfig small_chain(uint64_t stream) {
    ChainConfig c;
    c.seed = 99;
    c.stream = stream;
    c.sweeps = 40000;
    c.burn_in = 1000;
    return c;
}

}  // namespace

TEST_CASE("crossing probability at x = 1 matches exact enumeration") {
    HexDomain d = hex_ball(3);
    double exact = exact_black_event(d, 1, [&](const SitePerc& xi) { return crossing_h(d, xi, 1); });
    auto mc = crossing_probability(1.0, 1, small_chain(1), 3);
    INFO("exact " << exact << " mc " << mc.est.mean << " +- " << mc.est.std_error);
    CHECK(exact >= 0.25);
    CHECK(std::abs(mc.est.mean - exact) < 4 * mc.est.std_error + 1e-3);
    CHECK(mc.warnings.empty());
}

TEST_CASE("alpha_1 at x = 1 matches exact enumeration") {
    HexDomain d = hex_ball(3);
    double exact = exact_black_event(d, -1, [&](const SitePerc& xi) { return circ_event(d, xi, 1); });
    auto mc = alpha_n(1, 3.0, 1.0, small_chain(2));
    INFO("exact " << exact << " mc " << mc.est.mean << " +- " << mc.est.std_error);
    CHECK(exact > 0);
    CHECK(std::abs(mc.est.mean - exact) < 4 * mc.est.std_error + 1e-3);
    CHECK(throws_code([&] { circ_event(hex_ball(3), SitePerc{std::vector<char>(hex_ball(3).num_y(), 1)}, 2); },
                      Err::AnnulusOutOfDomain));
    CHECK(throws_code([] { alpha_n(1, 2.0, 1.0, ChainConfig{}); }, Err::OutOfRange));
}

TEST_CASE("annulus circuit under plus boundary matches exact enumeration") {
    HexDomain d = hex_ball(3);
    double exact = exact_black_event(d, 1, [&](const SitePerc& xi) { return circ_event(d, xi, 1); });
    LoopChain ch(d, 1.0, BC{1, 0});
    std::vector<double> hits;
    run_chain(ch, small_chain(3), [&](long, LoopChain& c, Rng& rng) {
        std::vector<double> u(d.num_y());
        for (auto& v : u) v = uniform01(rng);
        auto xi = sample_percolations(d, c.s, u, 1.0);
        hits.push_back(circ_event(d, split_sign(d, xi.black, c.s.black, 1), 1));
    });
    auto e = estimate_mean(hits);
    INFO("exact " << exact << " mc " << e.mean << " +- " << e.std_error);
    CHECK(exact > 0.2);
    CHECK(exact < 0.99);
    CHECK(std::abs(e.mean - exact) < 4 * e.std_error + 1e-3);
}

TEST_CASE("csv format") {
    CHECK(csv_header() == "observable,name,n,mean,std_error,n_samples\n");
    CHECK(csv_row("alpha", "chain=0", 3, Estimate{0.5, 0.25, 10}) == "alpha,chain=0,3,0.5,0.25,10\n");
}
