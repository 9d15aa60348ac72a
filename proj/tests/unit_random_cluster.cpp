#include <doctest.h>

#include <cmath>
#include <set>

#include "latticeflow/random_cluster.hpp"
#include "latticeflow/samplers.hpp"

using namespace lf;

namespace {

FKGraph path_graph(int nv, std::vector<Dir> cls) {
    FKGraph g;
    g.nv = nv;
    for (int i = 0; i + 1 < nv; ++i) g.edges.push_back({i, i + 1});
    g.cls = cls;
    g.boundary.assign(nv, 0);
    return g;
}

std::vector<char> bits(int mask, int n) {
    std::vector<char> v(n);
    for (int i = 0; i < n; ++i) v[i] = mask >> i & 1;
    return v;
}

int black_rank(const TorusLattice& t, int site) {
    int r = 0;
    for (int s = 0; s < site; ++s) r += t.black_site(s);
    return r;
}

}  // namespace

TEST_CASE("fk_weight examples") {
    FKGraph g = path_graph(4, {Dir::A, Dir::B, Dir::A});
    FKParams p{0.3, 0.6, 2.5};
    FKConfig none{{0, 0, 0}, false};
    CHECK(fk_weight(g, none, p) == doctest::Approx(0.7 * 0.7 * 0.4 * std::pow(2.5, 4)).epsilon(1e-14));
    FKConfig all{{1, 1, 1}, false};
    CHECK(fk_weight(g, all, p) == doctest::Approx(0.3 * 0.3 * 0.6 * 2.5).epsilon(1e-14));
    CHECK(fk_clusters(g, none) == 4);
    CHECK(fk_clusters(g, all) == 1);
}

TEST_CASE("wired empty configuration: boundary counts as one cluster") {
    FKGraph g = fk_graph_black(even_diamond(4));
    int interior = 0;
    for (char b : g.boundary) interior += !b;
    REQUIRE(interior > 0);
    REQUIRE(interior < g.nv);
    FKParams p{0.4, 0.55, 3.0};
    FKConfig c{std::vector<char>(g.edges.size(), 0), true};
    double closed = 1;
    for (auto cl : g.cls) closed *= cl == Dir::A ? 1 - p.pa : 1 - p.pb;
    CHECK(fk_weight(g, c, p) / closed == doctest::Approx(std::pow(p.q, interior + 1)).epsilon(1e-12));
}

TEST_CASE("dual_config") {
    FKConfig none{std::vector<char>(5, 0), false};
    auto d = dual_config(none);
    for (char e : d.eta) CHECK(e == 1);
    CHECK(d.wired);
    FKConfig all{std::vector<char>(5, 1), true};
    for (char e : dual_config(all).eta) CHECK(e == 0);
    FKConfig mixed{{1, 0, 0, 1, 1}, false};
    auto back = dual_config(dual_config(mixed));
    CHECK(back.eta == mixed.eta);
    CHECK(back.wired == mixed.wired);
}

TEST_CASE("self_dual_p") {
    CHECK(self_dual_p(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(self_dual_p(4) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    for (double q : {0.3, 1.0, 2.0, 3.7, 4.0, 9.0}) {
        double p = self_dual_p(q);
        CHECK(std::abs(p / (1 - p) * p / (1 - p) - q) < 1e-14 * std::max(1.0, q));
        CHECK(FKParams{p, p, q}.self_dual());
    }
    CHECK_THROWS_AS(self_dual_p(0), Error);
}

TEST_CASE("two_point_connected") {
    FKGraph g = path_graph(4, {Dir::A, Dir::A, Dir::A});
    FKConfig none{{0, 0, 0}, false};
    CHECK(two_point_connected(g, none, 2, 2));
    CHECK_FALSE(two_point_connected(g, none, 0, 1));
    FKConfig some{{1, 1, 0}, false};
    CHECK(two_point_connected(g, some, 0, 2));
    CHECK_FALSE(two_point_connected(g, some, 0, 3));
}

TEST_CASE("free is dominated by wired") {
    FKGraph g = fk_graph_black(square_block(0, 0, 4, 4));
    FKParams p{0.45, 0.5, 2.0};
    auto fr = exact_fk(g, p, false), wi = exact_fk(g, p, true);
    auto edge_prob = [&](const ExactDistribution& ex, size_t e) {
        double s = 0;
        for (size_t i = 0; i < ex.states.size(); ++i)
            if (ex.states[i][e] == '1') s += ex.probs[i];
        return s;
    };
    for (size_t e = 0; e < g.edges.size(); ++e) CHECK(edge_prob(fr, e) <= edge_prob(wi, e) + 1e-12);
}

TEST_CASE("torus loops: empty configuration") {
    for (int n : {1, 2, 3}) {
        TorusLattice t(n);
        auto L = loops_from_fk(t, std::vector<char>(t.num_sites(), 0));
        // one small loop around each black site
        CHECK(L.loops.size() == (size_t)(2 * n * n));
        CHECK(L.num_contractible() == 2 * n * n);
        size_t steps = 0;
        for (auto& l : L.loops) steps += l.slots.size();
        CHECK(steps == (size_t)(8 * n * n));
    }
}

TEST_CASE("torus loops: every medial edge used once") {
    TorusLattice t(2);
    Rng rng = make_rng(4);
    for (int r = 0; r < 50; ++r) {
        std::vector<char> eta(t.num_sites());
        for (auto& e : eta) e = coin(rng);
        auto L = loops_from_fk(t, eta);
        std::multiset<std::pair<int, int>> used;
        for (auto& l : L.loops)
            for (size_t i = 0; i < l.verts.size(); ++i) used.insert({l.verts[i], l.slots[i]});
        CHECK(used.size() == (size_t)(8 * t.n * t.n));
        CHECK(std::set<std::pair<int, int>>(used.begin(), used.end()).size() == used.size());
    }
}

TEST_CASE("torus loops: a horizontal wrapping cluster is flanked by two loops") {
    TorusLattice t(1);
    std::vector<char> eta(t.num_sites(), 0);
    // black squares (0,0) and (1,1) joined through vertices (0,0) and (1,0): wraps horizontally
    eta[t.id(0, 0)] = 1;
    eta[t.id(1, 0)] = 1;
    auto L = loops_from_fk(t, eta);
    CHECK(L.num_noncontractible() == 2);
    for (auto& l : L.loops)
        if (!l.contractible()) CHECK(std::abs(l.cross_col) + std::abs(l.cross_row) > 0);
}

TEST_CASE("torus self-duality of the loop weight") {
    for (int n : {1, 2}) {
        TorusLattice t(n);
        int V = t.num_sites();
        for (int mask = 0; mask < (1 << V); ++mask) {
            auto eta = bits(mask, V);
            // dual configuration moved onto the black lattice by one step
            std::vector<char> dual(V);
            for (int j = 0; j < t.L; ++j)
                for (int i = 0; i < t.L; ++i) dual[t.id(i + 1, j)] = !eta[t.id(i, j)];
            auto a = loops_from_fk(t, eta), b = loops_from_fk(t, dual);
            CHECK(a.num_contractible() == b.num_contractible());
            CHECK(a.num_noncontractible() == b.num_noncontractible());
            CHECK(w_prime(a, 2.0) == w_prime(b, 2.0));
        }
    }
}

TEST_CASE("w_prime and p8") {
    TorusLoopConfig three;
    three.loops.resize(3);
    CHECK(w_prime(three, 4.0) == doctest::Approx(8.0).epsilon(1e-15));
    TorusLoopConfig two;
    two.loops.resize(2);
    for (auto& l : two.loops) l.cross_row = 1;
    CHECK(w_prime(two, 3.0) == doctest::Approx(2.0).epsilon(1e-15));

    CHECK(p8(0) == 1.0);
    CHECK(p8(2) == 0.5);
    CHECK(p8(8) == 0.28125);
    for (int m = 0; m <= 30; m += 2) {
        CHECK(p8(m) == p8_binomial(m));
        CHECK(p8(m) >= 0.25);
        CHECK(p8(m) <= 1.0);
    }
    try {
        p8(3);
        FAIL("odd step count accepted");
    } catch (const Error& e) {
        CHECK(e.code == Err::OddStepCount);
    }
}

TEST_CASE("cos_product_observable") {
    TorusLattice t(2);
    auto L = loops_from_fk(t, std::vector<char>(t.num_sites(), 0));
    TorusLoopConfig none{t.n, {}};
    CHECK(cos_product_observable(t, none, 1, 0.4) == 1.0);
    TorusLoopConfig one{t.n, {}};
    for (auto& l : L.loops)
        if (loop_surrounds(t, l, 0, 0)) one.loops.push_back(l);
    REQUIRE(one.loops.size() == 1);
    CHECK_FALSE(loop_surrounds(t, one.loops[0], 2, 0));
    CHECK(cos_product_observable(t, one, 1, 0.0) == doctest::Approx(std::cos(M_PI / 8)).epsilon(1e-14));

    // a loop around both faces contributes 1; connected faces give 1 overall
    TorusLattice t3(3);
    FKGraph g = fk_graph_torus(t3);
    int u = black_rank(t3, t3.id(0, 0)), v = black_rank(t3, t3.id(2, 0));
    Rng rng = make_rng(8);
    int seen = 0;
    for (int r = 0; r < 400; ++r) {
        std::vector<char> eta(t3.num_sites());
        for (auto& e : eta) e = uniform01(rng) < 0.45;
        if (!two_point_connected(g, FKConfig{eta, false}, u, v)) continue;
        ++seen;
        auto Lc = loops_from_fk(t3, eta);
        for (double lam : {0.0, 0.5, 1.0})
            CHECK(cos_product_observable(t3, Lc, 1, lam) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(seen > 20);
}

TEST_CASE("BKW partition functions") {
    for (int n : {1, 2}) {
        TorusLattice t(n);
        int V = t.num_sites();
        // independent loop-sum oracle at lambda = 0
        double z = 0;
        for (int mask = 0; mask < (1 << V); ++mask) {
            auto L = loops_from_fk(t, bits(mask, V));
            int nn = L.num_noncontractible();
            double pe = 0;
            for (int a = 0; a <= nn; ++a) {
                double c = std::tgamma(nn + 1.0) / (std::tgamma(a + 1.0) * std::tgamma(nn - a + 1.0));
                if ((2 * a - nn) % 8 == 0) pe += c;
            }
            z += std::pow(2.0, L.num_contractible()) * pe;
        }
        auto r = bkw_partition_functions(n, 1, {0.0});
        CHECK(r.z_n.real() == doctest::Approx(z).epsilon(1e-12));
        CHECK(std::abs(r.z_n.imag()) < 1e-9 * z);
        for (double lam : {0.0, M_PI / 6, M_PI / 3}) {
            auto a = bkw_partition_functions(n, 0, {lam});
            CHECK(std::abs(a.z_nk - a.z_n) < 1e-12 * std::abs(a.z_n));
            auto e = bkw_loop_expansion(n, 1, {lam});
            auto o = bkw_partition_functions(n, 1, {lam});
            CHECK(std::abs(e.z_n - o.z_n) < 1e-10 * std::abs(o.z_n));
            CHECK(std::abs(torus_spin_observable(n, 0, {lam}) - cplx(1.0)) < 1e-12);
            auto s = torus_spin_observable(n, 1, {lam});
            CHECK(std::abs(s.imag()) < 1e-10);
            CHECK(std::abs(o.z_nk / o.z_n - s) < 1e-10);
        }
    }
}

TEST_CASE("BKW parallel and serial agree bit for bit") {
    for (double lam : {0.0, 0.7}) {
        auto a = bkw_partition_functions(2, 1, {lam}), b = bkw_partition_functions_serial(2, 1, {lam});
        CHECK(a.z_n == b.z_n);
        CHECK(a.z_nk == b.z_nk);
        CHECK(torus_spin_observable(2, 1, {lam}) == torus_spin_observable_serial(2, 1, {lam}));
    }
}

TEST_CASE("BKW argument checks") {
    CHECK_THROWS_AS(bkw_partition_functions(1, 1, {1.2}), Error);
    try {
        bkw_partition_functions(4, 1, {0.1});
        FAIL("oversized torus accepted");
    } catch (const Error& e) {
        CHECK(e.code == Err::TooLarge);
    }
}
