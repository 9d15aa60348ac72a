#include <doctest.h>

#include <algorithm>
#include <set>

#include "latticeflow/dsu.hpp"
#include "latticeflow/lattice.hpp"

using namespace lf;

TEST_CASE("hex balls have 1, 7, 19 faces") {
    CHECK(hex_ball(0).num_faces() == 1);
    CHECK(hex_ball(1).num_faces() == 7);
    CHECK(hex_ball(2).num_faces() == 19);
    CHECK(hex_ball(3).num_faces() == 37);
    CHECK_THROWS_AS(hex_ball(-1), Error);
}

TEST_CASE("radius-1 ball: three Y-vertices around the centre") {
    HexDomain d = hex_ball(1);
    CHECK(d.num_y() == 3);
    int u = d.face_index({0, 0});
    for (int y : d.face_y[u]) CHECK(y >= 0);
    CHECK(d.boundary_faces.size() == 6);
    CHECK_FALSE(d.is_boundary[u]);
}

TEST_CASE("triangle_edges") {
    HexDomain d = hex_ball(2);
    SitePerc xi{std::vector<char>(d.num_y(), 0)};
    CHECK(triangle_edges(xi, d).empty());

    int y0 = d.y_index({0, 0});
    REQUIRE(y0 >= 0);
    xi.open[y0] = 1;
    auto e = triangle_edges(xi, d);
    REQUIRE(e.size() == 3);
    std::set<std::pair<int, int>> want;
    auto f = d.y_faces[y0];
    for (auto [a, b] : {std::pair{f[0], f[1]}, {f[0], f[2]}, {f[1], f[2]}}) want.insert({std::min(a, b), std::max(a, b)});
    std::set<std::pair<int, int>> got;
    for (int i : e) got.insert({std::min(d.edges[i].f, d.edges[i].g), std::max(d.edges[i].f, d.edges[i].g)});
    CHECK(got == want);

    // Y-vertices sharing a face are adjacent; their triangles share no edge
    int y1 = d.y_index({1, 0});
    REQUIRE(y1 >= 0);
    xi.open[y1] = 1;
    CHECK(triangle_edges(xi, d).size() == 6);
}

TEST_CASE("rhombus sizes and sides") {
    auto r0 = rhombus(0);
    CHECK(r0.verts.size() == 1);
    CHECK(r0.left == r0.verts);
    CHECK(r0.right == r0.verts);
    CHECK(r0.top == r0.verts);
    CHECK(r0.bottom == r0.verts);
    CHECK(rhombus(1).verts.size() == 9);
    auto r2 = rhombus(2);
    CHECK(r2.verts.size() == 25);
    CHECK(r2.left.size() == 5);
    for (auto v : r2.left) CHECK(v.k == -2);
}

TEST_CASE("t_neighbors") {
    auto n = t_neighbors({0, 0});
    std::set<Sq> got(n.begin(), n.end());
    std::set<Sq> want{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {2, 0}, {-2, 0}};
    CHECK(got == want);
    auto w = t_neighbors({1, 0});
    for (int i = 0; i < 6; ++i) {
        CHECK(w[i].i == n[i].i + 1);
        CHECK(w[i].j == n[i].j);
        CHECK(is_black(w[i]) == is_black({1, 0}));
    }
}

TEST_CASE("even domains") {
    // 3x3 block centred on the white square (0,1)
    auto b = square_block(-1, 0, 3, 3);
    CHECK_FALSE(is_black({0, 1}));
    CHECK_FALSE(b.even);
    CHECK(b.num_vertices() == 4);

    // a white square with its four black edge-neighbours
    auto plus = validate_even_domain({{1, 0}, {0, 0}, {2, 0}, {1, 1}, {1, -1}});
    CHECK(plus.even);
    CHECK(plus.num_vertices() == 0);

    auto one = validate_even_domain({{0, 0}});
    CHECK(one.even);
    CHECK(one.num_vertices() == 0);

    CHECK(even_diamond(2).even);
    CHECK(even_diamond(16).num_squares() == 545);
    CHECK_THROWS_AS(even_diamond(3), Error);

    try {
        validate_even_domain({{0, 0}, {2, 0}});
        FAIL("disconnected squares accepted");
    } catch (const Error& e) {
        CHECK(e.code == Err::NotSimplyConnected);
    }
    std::vector<Sq> ring;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != 1 || j != 1) ring.push_back({i, j});
    try {
        validate_even_domain(ring);
        FAIL("ring accepted");
    } catch (const Error& e) {
        CHECK(e.code == Err::NotSimplyConnected);
    }
    try {
        validate_even_domain({});
        FAIL("empty accepted");
    } catch (const Error& e) {
        CHECK(e.code == Err::EmptyDomain);
    }
}

TEST_CASE("diagonals: one black and one white diagonal per interior vertex") {
    auto d = even_diamond(4);
    std::set<std::pair<int, int>> bl, wh;
    for (auto& v : d.verts) {
        CHECK(d.black(v.bu));
        CHECK(d.black(v.bv));
        CHECK_FALSE(d.black(v.wu));
        CHECK_FALSE(d.black(v.wv));
        CHECK(v.bdir != v.wdir);
        bl.insert({v.bu, v.bv});
        wh.insert({v.wu, v.wv});
    }
    CHECK(bl.size() == d.verts.size());
    CHECK(wh.size() == d.verts.size());
}

TEST_CASE("domain JSON") {
    auto d = hex_domain_from_json(R"({"type":"hex_ball","radius":2})");
    CHECK(d.num_faces() == 19);
    auto e = hex_domain_from_json(hex_domain_to_json(d));
    CHECK(e.num_faces() == 19);
    auto s = square_domain_from_json(R"({"type":"square_block","i0":0,"j0":0,"w":3,"h":3})");
    CHECK(s.num_squares() == 9);
    CHECK(square_domain_from_json(square_domain_to_json(s)).num_vertices() == 4);
    try {
        hex_domain_from_json(R"({"type":"hex_ball","radius":2,"colour":1})");
        FAIL("unknown field accepted");
    } catch (const Error& e) {
        CHECK(e.code == Err::UnknownField);
    }
}

TEST_CASE("torus slots pair up") {
    for (int n : {1, 2, 3}) {
        TorusLattice t(n);
        std::vector<int> uses(t.num_edges(), 0);
        for (int v = 0; v < t.num_sites(); ++v)
            for (int s = 0; s < 4; ++s) {
                int w = t.slot_target(v, s);
                CHECK(t.slot_target(w, (s + 2) % 4) == v);
                CHECK(t.slot_edge(w, (s + 2) % 4) == t.slot_edge(v, s));
                ++uses[t.slot_edge(v, s)];
            }
        for (int u : uses) CHECK(u == 2);
    }
}

TEST_CASE("dsu") {
    Dsu d(5);
    CHECK(d.count() == 5);
    CHECK(d.unite(0, 1));
    CHECK_FALSE(d.unite(1, 0));
    d.unite(3, 4);
    CHECK(d.same(0, 1));
    CHECK_FALSE(d.same(1, 3));
    CHECK(d.count() == 3);
}
