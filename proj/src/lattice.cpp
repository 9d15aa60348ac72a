#include "latticeflow/lattice.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <deque>
#include <json.hpp>

namespace lf {

const char* err_name(Err e) {
    switch (e) {
        case Err::InvalidDegree: return "InvalidDegree";
        case Err::InconsistentPair: return "InconsistentPair";
        case Err::NotRepresentable: return "NotRepresentable";
        case Err::IncompatibleInput: return "IncompatibleInput";
        case Err::IceRuleViolated: return "IceRuleViolated";
        case Err::TooLarge: return "TooLarge";
        case Err::OddStepCount: return "OddStepCount";
        case Err::EncodingMismatch: return "EncodingMismatch";
        case Err::InsufficientSamples: return "InsufficientSamples";
        case Err::InsufficientPoints: return "InsufficientPoints";
        case Err::RhombusOutOfDomain: return "RhombusOutOfDomain";
        case Err::AnnulusOutOfDomain: return "AnnulusOutOfDomain";
        case Err::NotSimplyConnected: return "NotSimplyConnected";
        case Err::EmptyDomain: return "EmptyDomain";
        case Err::UnknownField: return "UnknownField";
        case Err::OutOfRange: return "OutOfRange";
        case Err::ConflictingFlags: return "ConflictingFlags";
        case Err::BadInput: return "BadInput";
    }
    return "?";
}

Error::Error(Err c, const std::string& msg) : std::runtime_error(std::string(err_name(c)) + ": " + msg), code(c) {}

void CoordGrid::init(int kmin, int kmax, int lmin, int lmax) {
    k0 = kmin;
    l0 = lmin;
    w = kmax - kmin + 1;
    h = lmax - lmin + 1;
    cell.assign((size_t)w * h, -1);
}

int hex_distance(FaceCoord a, FaceCoord b) {
    int dk = a.k - b.k, dl = a.l - b.l;
    return (std::abs(dk) + std::abs(dl) + std::abs(dk + dl)) / 2;
}

// flood fill of the complement inside a box with a margin; true if the complement is connected
template <class InSet, class Nbrs>
static bool complement_connected(int kmin, int kmax, int lmin, int lmax, InSet in, Nbrs nbrs) {
    kmin -= 1; lmin -= 1; kmax += 1; lmax += 1;
    int w = kmax - kmin + 1, h = lmax - lmin + 1;
    std::vector<char> seen((size_t)w * h, 0);
    auto idx = [&](int k, int l) { return (size_t)(l - lmin) * w + (k - kmin); };
    long total = 0;
    for (int l = lmin; l <= lmax; ++l)
        for (int k = kmin; k <= kmax; ++k) total += !in(k, l);
    std::deque<std::pair<int, int>> q{{kmin, lmin}};
    seen[idx(kmin, lmin)] = 1;
    long got = 0;
    while (!q.empty()) {
        auto [k, l] = q.front();
        q.pop_front();
        ++got;
        for (auto [dk, dl] : nbrs) {
            int a = k + dk, b = l + dl;
            if (a < kmin || a > kmax || b < lmin || b > lmax) continue;
            if (in(a, b) || seen[idx(a, b)]) continue;
            seen[idx(a, b)] = 1;
            q.push_back({a, b});
        }
    }
    return got == total;
}

HexDomain HexDomain::from_faces(std::vector<FaceCoord> fs) {
    if (fs.empty()) throw Error(Err::EmptyDomain, "no faces");
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    HexDomain d;
    d.faces = fs;
    int kmin = INT_MAX, kmax = INT_MIN, lmin = INT_MAX, lmax = INT_MIN;
    for (auto c : fs) {
        kmin = std::min(kmin, c.k); kmax = std::max(kmax, c.k);
        lmin = std::min(lmin, c.l); lmax = std::max(lmax, c.l);
    }
    d.fgrid.init(kmin - 1, kmax + 1, lmin - 1, lmax + 1);
    for (int i = 0; i < (int)fs.size(); ++i) d.fgrid.set(fs[i].k, fs[i].l, i);
    int F = (int)fs.size();

    // connectivity of the face set and of its complement
    {
        std::vector<char> seen(F, 0);
        std::vector<int> st{0};
        seen[0] = 1;
        int got = 0;
        while (!st.empty()) {
            int f = st.back();
            st.pop_back();
            ++got;
            for (auto dd : kHexDirs) {
                int g = d.face_index({fs[f].k + dd.k, fs[f].l + dd.l});
                if (g >= 0 && !seen[g]) { seen[g] = 1; st.push_back(g); }
            }
        }
        if (got != F) throw Error(Err::NotSimplyConnected, "face set is disconnected");
        std::vector<std::pair<int, int>> nb;
        for (auto dd : kHexDirs) nb.push_back({dd.k, dd.l});
        auto in = [&](int k, int l) { return d.fgrid.get(k, l) >= 0; };
        if (!complement_connected(kmin, kmax, lmin, lmax, in, nb))
            throw Error(Err::NotSimplyConnected, "face set has holes");
    }

    d.nbr.resize(F);
    d.is_boundary.assign(F, 0);
    for (int f = 0; f < F; ++f) {
        for (int s = 0; s < 6; ++s) {
            int g = d.face_index({fs[f].k + kHexDirs[s].k, fs[f].l + kHexDirs[s].l});
            d.nbr[f][s] = g;
            if (g < 0) d.is_boundary[f] = 1;
        }
        if (d.is_boundary[f]) d.boundary_faces.push_back(f);
    }

    // Y-vertices: upward triangles with all three faces inside
    d.ygrid.init(kmin - 1, kmax, lmin - 1, lmax);
    d.face_y.assign(F, {-1, -1, -1});
    for (int l = lmin - 1; l <= lmax; ++l)
        for (int k = kmin - 1; k <= kmax; ++k) {
            YVertex y{{k, l}};
            auto tf = y.faces();
            int a = d.face_index(tf[0]), b = d.face_index(tf[1]), c = d.face_index(tf[2]);
            int cnt = (a >= 0) + (b >= 0) + (c >= 0);
            if (cnt == 3) {
                int id = (int)d.y_coord.size();
                d.ygrid.set(k, l, id);
                d.y_coord.push_back({k, l});
                d.y_faces.push_back({a, b, c});
                d.face_y[a][0] = id;  // face is the (k,l) corner of this triangle
                d.face_y[b][1] = id;  // face is the (k+1,l) corner
                d.face_y[c][2] = id;  // face is the (k,l+1) corner
            } else if (cnt > 0) {
                d.boundary_y.push_back({k, l});
            }
        }

    // interior down-vertices {(k+1,l),(k,l+1),(k+1,l+1)}
    CoordGrid dgrid;
    dgrid.init(kmin - 1, kmax, lmin - 1, lmax);
    for (int l = lmin - 1; l <= lmax; ++l)
        for (int k = kmin - 1; k <= kmax; ++k) {
            int a = d.face_index({k + 1, l}), b = d.face_index({k, l + 1}), c = d.face_index({k + 1, l + 1});
            if (a >= 0 && b >= 0 && c >= 0) {
                dgrid.set(k, l, (int)d.down_faces.size());
                d.down_faces.push_back({a, b, c});
            }
        }

    // dual edges; directions (1,0), (0,1), (-1,1) from each face
    d.face_edge.assign(F, {-1, -1, -1, -1, -1, -1});
    int NY = (int)d.y_coord.size();
    for (int f = 0; f < F; ++f) {
        int k = fs[f].k, l = fs[f].l;
        struct Cand { int slot, back; FaceCoord up, down; };
        const Cand cands[3] = {{0, 1, {k, l}, {k, l - 1}},
                               {2, 3, {k, l}, {k - 1, l}},
                               {5, 4, {k - 1, l}, {k - 1, l}}};
        for (auto& c : cands) {
            int g = d.nbr[f][c.slot];
            if (g < 0) continue;
            HexEdge e;
            e.f = f;
            e.g = g;
            e.up = d.y_index(c.up);
            int dn = dgrid.get(c.down.k, c.down.l);
            e.down = dn >= 0 ? NY + dn : -1;
            e.loopable = e.up >= 0 && e.down >= 0;
            int id = (int)d.edges.size();
            d.edges.push_back(e);
            d.face_edge[f][c.slot] = id;
            d.face_edge[g][c.back] = id;
        }
    }
    return d;
}

int HexDomain::edge_between(int f, int g) const {
    for (int s = 0; s < 6; ++s)
        if (nbr[f][s] == g) return face_edge[f][s];
    return -1;
}

HexDomain hex_ball(int radius) {
    if (radius < 0) throw Error(Err::OutOfRange, "radius must be >= 0");
    std::vector<FaceCoord> fs;
    for (int k = -radius; k <= radius; ++k)
        for (int l = -radius; l <= radius; ++l)
            if (hex_distance({k, l}) <= radius) fs.push_back({k, l});
    return HexDomain::from_faces(fs);
}

std::vector<int> triangle_edges(const SitePerc& xi, const HexDomain& d) {
    std::vector<int> out;
    for (int y = 0; y < d.num_y(); ++y) {
        if (!xi.open[y]) continue;
        auto [a, b, c] = d.y_faces[y];
        out.push_back(d.edge_between(a, b));
        out.push_back(d.edge_between(a, c));
        out.push_back(d.edge_between(b, c));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Rhombus rhombus(int m) {
    if (m < 0) throw Error(Err::OutOfRange, "m must be >= 0");
    Rhombus r;
    for (int l = -m; l <= m; ++l)
        for (int k = -m; k <= m; ++k) {
            r.verts.push_back({k, l});
            if (k == -m) r.left.push_back({k, l});
            if (k == m) r.right.push_back({k, l});
            if (l == m) r.top.push_back({k, l});
            if (l == -m) r.bottom.push_back({k, l});
        }
    return r;
}

// ------------------------------------------------------------------- square

std::array<Sq, 6> t_neighbors(Sq s) {
    return {Sq{s.i + 1, s.j + 1}, Sq{s.i + 1, s.j - 1}, Sq{s.i - 1, s.j + 1},
            Sq{s.i - 1, s.j - 1}, Sq{s.i + 2, s.j}, Sq{s.i - 2, s.j}};
}

SquareDomain validate_even_domain(const std::vector<Sq>& in) {
    if (in.empty()) throw Error(Err::EmptyDomain, "no squares");
    std::vector<Sq> sq = in;
    std::sort(sq.begin(), sq.end());
    sq.erase(std::unique(sq.begin(), sq.end()), sq.end());
    SquareDomain d;
    d.squares = sq;
    int imin = INT_MAX, imax = INT_MIN, jmin = INT_MAX, jmax = INT_MIN;
    for (auto s : sq) {
        imin = std::min(imin, s.i); imax = std::max(imax, s.i);
        jmin = std::min(jmin, s.j); jmax = std::max(jmax, s.j);
    }
    d.sgrid.init(imin - 1, imax + 1, jmin - 1, jmax + 1);
    int S = (int)sq.size();
    for (int s = 0; s < S; ++s) d.sgrid.set(sq[s].i, sq[s].j, s);
    auto in_dom = [&](int i, int j) { return d.sgrid.get(i, j) >= 0; };

    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    d.nbr.resize(S);
    for (int s = 0; s < S; ++s)
        for (int t = 0; t < 4; ++t) d.nbr[s][t] = d.sgrid.get(sq[s].i + di[t], sq[s].j + dj[t]);

    {
        std::vector<char> seen(S, 0);
        std::vector<int> st{0};
        seen[0] = 1;
        int got = 0;
        while (!st.empty()) {
            int s = st.back();
            st.pop_back();
            ++got;
            for (int t = 0; t < 4; ++t) {
                int u = d.nbr[s][t];
                if (u >= 0 && !seen[u]) { seen[u] = 1; st.push_back(u); }
            }
        }
        if (got != S) throw Error(Err::NotSimplyConnected, "squares are not edge-connected");
        std::vector<std::pair<int, int>> nb{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        if (!complement_connected(imin, imax, jmin, jmax, in_dom, nb))
            throw Error(Err::NotSimplyConnected, "square set has holes");
        // a vertex touched by exactly two diagonally opposite squares is a pinch point
        for (int j = jmin - 1; j <= jmax; ++j)
            for (int i = imin - 1; i <= imax; ++i) {
                bool sw = in_dom(i, j), se = in_dom(i + 1, j), nw = in_dom(i, j + 1), ne = in_dom(i + 1, j + 1);
                if ((sw && ne && !se && !nw) || (se && nw && !sw && !ne))
                    throw Error(Err::NotSimplyConnected, "pinch point at a vertex");
            }
    }

    d.vgrid.init(imin - 1, imax, jmin - 1, jmax);
    for (int j = jmin; j < jmax; ++j)
        for (int i = imin; i < imax; ++i) {
            int sw = d.sgrid.get(i, j), se = d.sgrid.get(i + 1, j);
            int nw = d.sgrid.get(i, j + 1), ne = d.sgrid.get(i + 1, j + 1);
            if (sw < 0 || se < 0 || nw < 0 || ne < 0) continue;
            SqVertex v;
            v.corner = {i, j};
            v.sw = sw; v.se = se; v.nw = nw; v.ne = ne;
            if (is_black({i, j})) {
                v.bu = sw; v.bv = ne; v.bdir = Dir::A;
                v.wu = se; v.wv = nw; v.wdir = Dir::B;
            } else {
                v.bu = se; v.bv = nw; v.bdir = Dir::B;
                v.wu = sw; v.wv = ne; v.wdir = Dir::A;
            }
            d.vgrid.set(i, j, (int)d.verts.size());
            d.verts.push_back(v);
        }

    d.corner_v.resize(S);
    d.is_boundary.assign(S, 0);
    d.even = true;
    for (int s = 0; s < S; ++s) {
        int i = sq[s].i, j = sq[s].j;
        d.corner_v[s] = {d.vgrid.get(i - 1, j - 1), d.vgrid.get(i, j - 1), d.vgrid.get(i - 1, j), d.vgrid.get(i, j)};
        for (int c : d.corner_v[s]) if (c < 0) d.is_boundary[s] = 1;
        bool edge_on_boundary = false;
        for (int t = 0; t < 4; ++t) if (d.nbr[s][t] < 0) edge_on_boundary = true;
        if (edge_on_boundary && !is_black(sq[s])) d.even = false;
    }
    return d;
}

SquareDomain square_block(int i0, int j0, int w, int h) {
    std::vector<Sq> s;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) s.push_back({i0 + i, j0 + j});
    return validate_even_domain(s);
}

SquareDomain even_diamond(int radius) {
    if (radius < 0 || radius % 2) throw Error(Err::OutOfRange, "even diamond needs an even radius >= 0");
    std::vector<Sq> s;
    for (int j = -radius; j <= radius; ++j)
        for (int i = -radius; i <= radius; ++i)
            if (std::abs(i) + std::abs(j) <= radius) s.push_back({i, j});
    return validate_even_domain(s);
}

// ------------------------------------------------------------------- torus

TorusLattice::TorusLattice(int n_) : n(n_), L(2 * n_) {
    if (n_ < 1) throw Error(Err::OutOfRange, "torus size n must be >= 1");
}

int TorusLattice::slot_edge(int v, int slot) const {
    int i = v % L, j = v / L;
    switch (slot) {
        case 0: return vedge(i, j + 1);
        case 1: return hedge(i + 1, j);
        case 2: return vedge(i, j);
        default: return hedge(i, j);
    }
}

int TorusLattice::slot_target(int v, int slot) const {
    int i = v % L, j = v / L;
    switch (slot) {
        case 0: return id(i, j + 1);
        case 1: return id(i + 1, j);
        case 2: return id(i, j - 1);
        default: return id(i - 1, j);
    }
}

std::array<int, 2> TorusLattice::black_diag(int v) const {
    int i = v % L, j = v / L;
    if ((i + j) % 2 == 0) return {id(i, j), id(i + 1, j + 1)};
    return {id(i + 1, j), id(i, j + 1)};
}

std::array<int, 2> TorusLattice::white_diag(int v) const {
    int i = v % L, j = v / L;
    if ((i + j) % 2 == 0) return {id(i + 1, j), id(i, j + 1)};
    return {id(i, j), id(i + 1, j + 1)};
}

std::vector<int> TorusLattice::row_cycle_edges() const {
    std::vector<int> e;
    for (int i = 0; i < L; ++i) e.push_back(vedge(i, 0));
    return e;
}

std::vector<int> TorusLattice::col_cycle_edges() const {
    std::vector<int> e;
    for (int j = 1; j <= L; ++j) e.push_back(hedge(0, j));
    return e;
}

// --------------------------------------------------------------------- json

using nlohmann::json;

static void check_fields(const json& j, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto a : allowed) ok |= (it.key() == a);
        if (!ok) throw Error(Err::UnknownField, "domain field '" + it.key() + "'");
    }
}

HexDomain hex_domain_from_json(const std::string& text) {
    json j = json::parse(text);
    std::string type = j.value("type", "");
    if (type == "hex_ball") {
        check_fields(j, {"type", "radius"});
        return hex_ball(j.at("radius").get<int>());
    }
    if (type == "hex_faces") {
        check_fields(j, {"type", "faces"});
        std::vector<FaceCoord> fs;
        for (auto& p : j.at("faces")) fs.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
        return HexDomain::from_faces(fs);
    }
    throw Error(Err::BadInput, "unknown hex domain type '" + type + "'");
}

SquareDomain square_domain_from_json(const std::string& text) {
    json j = json::parse(text);
    std::string type = j.value("type", "");
    if (type == "even_diamond") {
        check_fields(j, {"type", "radius"});
        return even_diamond(j.at("radius").get<int>());
    }
    if (type == "square_block") {
        check_fields(j, {"type", "i0", "j0", "w", "h"});
        return square_block(j.value("i0", 0), j.value("j0", 0), j.at("w").get<int>(), j.at("h").get<int>());
    }
    if (type == "square") {
        check_fields(j, {"type", "squares"});
        std::vector<Sq> s;
        for (auto& p : j.at("squares")) s.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
        return validate_even_domain(s);
    }
    throw Error(Err::BadInput, "unknown square domain type '" + type + "'");
}

std::string hex_domain_to_json(const HexDomain& d) {
    json f = json::array();
    for (auto c : d.faces) f.push_back({c.k, c.l});
    return json{{"type", "hex_faces"}, {"faces", f}}.dump();
}

std::string square_domain_to_json(const SquareDomain& d) {
    json f = json::array();
    for (auto s : d.squares) f.push_back({s.i, s.j});
    return json{{"type", "square"}, {"squares", f}}.dump();
}

}  // namespace lf
