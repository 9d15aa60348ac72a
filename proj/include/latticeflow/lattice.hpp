#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lf {

// ---------------------------------------------------------------- hexagonal

struct FaceCoord {
    int k = 0, l = 0;
    bool operator==(const FaceCoord& o) const { return k == o.k && l == o.l; }
    bool operator!=(const FaceCoord& o) const { return !(*this == o); }
    bool operator<(const FaceCoord& o) const { return k < o.k || (k == o.k && l < o.l); }
};

// neighbour offsets of a hexagonal face in axial coordinates
inline constexpr std::array<FaceCoord, 6> kHexDirs = {
    FaceCoord{1, 0}, FaceCoord{-1, 0}, FaceCoord{0, 1},
    FaceCoord{0, -1}, FaceCoord{1, -1}, FaceCoord{-1, 1}};

int hex_distance(FaceCoord a, FaceCoord b = {0, 0});

// A Y-vertex is named by the upward triangle {(k,l),(k+1,l),(k,l+1)} of faces.
struct YVertex {
    FaceCoord tri;
    std::array<FaceCoord, 3> faces() const {
        return {tri, FaceCoord{tri.k + 1, tri.l}, FaceCoord{tri.k, tri.l + 1}};
    }
};

struct HexEdge {
    int f, g;         // the two faces (domain indices) separated by the edge
    int up, down;     // endpoint ids: Y index, or interior down-vertex index; -1 if on the boundary
    bool loopable;    // both endpoints interior
};

// Dense (k,l) -> int lookup over a bounding box.
struct CoordGrid {
    int k0 = 0, l0 = 0, w = 0, h = 0;
    std::vector<int> cell;
    void init(int kmin, int kmax, int lmin, int lmax);
    int get(int k, int l) const {
        int a = k - k0, b = l - l0;
        if (a < 0 || b < 0 || a >= w || b >= h) return -1;
        return cell[(size_t)b * w + a];
    }
    void set(int k, int l, int v) { cell[(size_t)(l - l0) * w + (k - k0)] = v; }
};

class HexDomain {
public:
    static HexDomain from_faces(std::vector<FaceCoord> faces);

    int num_faces() const { return (int)faces.size(); }
    int num_y() const { return (int)y_coord.size(); }
    int face_index(FaceCoord c) const { return fgrid.get(c.k, c.l); }
    int y_index(FaceCoord tri) const { return ygrid.get(tri.k, tri.l); }
    int edge_between(int f, int g) const;

    std::vector<FaceCoord> faces;
    std::vector<std::array<int, 6>> nbr;          // aligned with kHexDirs, -1 outside
    std::vector<char> is_boundary;                // face in the boundary layer
    std::vector<int> boundary_faces;
    std::vector<FaceCoord> y_coord;               // Y(domain)
    std::vector<std::array<int, 3>> y_faces;      // faces of each Y-vertex
    std::vector<std::array<int, 3>> face_y;       // Y-vertices around each face (-1 if not in Y(domain))
    std::vector<FaceCoord> boundary_y;            // upward triangles touching but not inside the domain
    std::vector<std::array<int, 3>> down_faces;   // interior down-vertices
    std::vector<HexEdge> edges;                   // all dual edges between two domain faces
    std::vector<std::array<int, 6>> face_edge;    // aligned with nbr

private:
    CoordGrid fgrid, ygrid;
};

HexDomain hex_ball(int radius);

struct SitePerc {
    std::vector<char> open;  // indexed by Y index of the domain
};

// Union of the three dual edges of each open Y-vertex, as sorted edge indices.
std::vector<int> triangle_edges(const SitePerc& xi, const HexDomain& d);

struct Rhombus {
    std::vector<FaceCoord> verts;  // Y-vertices, tri = (k,l), k,l in [-m,m]
    std::vector<FaceCoord> left, right, top, bottom;
};
Rhombus rhombus(int m);

// ------------------------------------------------------------------- square

struct Sq {
    int i = 0, j = 0;
    bool operator==(const Sq& o) const { return i == o.i && j == o.j; }
    bool operator<(const Sq& o) const { return i < o.i || (i == o.i && j < o.j); }
};
inline bool is_black(Sq s) { return ((s.i + s.j) % 2 + 2) % 2 == 0; }

std::array<Sq, 6> t_neighbors(Sq s);

enum class Dir { A = 0, B = 1 };  // A: parallel to e^{i pi/4}, B: parallel to e^{3 i pi/4}

struct SqVertex {
    Sq corner;                  // lower-left square of the vertex
    int sw, se, nw, ne;         // square indices
    int bu, bv, wu, wv;         // black diagonal and white diagonal endpoints
    Dir bdir, wdir;             // class of the black and white diagonal
};

class SquareDomain {
public:
    int num_squares() const { return (int)squares.size(); }
    int num_vertices() const { return (int)verts.size(); }
    int square_index(Sq s) const { return sgrid.get(s.i, s.j); }
    int vertex_index(Sq corner) const { return vgrid.get(corner.i, corner.j); }
    bool black(int s) const { return is_black(squares[s]); }

    std::vector<Sq> squares;
    std::vector<std::array<int, 4>> nbr;        // E, W, N, S; -1 outside
    std::vector<std::array<int, 4>> corner_v;   // SW, SE, NW, NE corner vertex ids, -1 if not interior
    std::vector<char> is_boundary;              // has a corner on the domain boundary
    std::vector<SqVertex> verts;                // interior vertices
    bool even = false;

    friend SquareDomain validate_even_domain(const std::vector<Sq>& squares);

private:
    CoordGrid sgrid, vgrid;
};

SquareDomain validate_even_domain(const std::vector<Sq>& squares);
SquareDomain square_block(int i0, int j0, int w, int h);
SquareDomain even_diamond(int radius);

// ------------------------------------------------------------------- torus

// Z^2 / 2nZ^2. Squares and vertices are both indexed by i + L*j (L = 2n);
// vertex (i,j) is the corner at (i+1/2, j+1/2).
// Edge 2*s is vertical between squares (i,j),(i+1,j); edge 2*s+1 is horizontal
// between squares (i,j),(i,j+1).
struct TorusLattice {
    int n = 1, L = 2;
    explicit TorusLattice(int n_);
    int num_sites() const { return L * L; }
    int num_edges() const { return 2 * L * L; }
    int wrap(int a) const { return ((a % L) + L) % L; }
    int id(int i, int j) const { return wrap(i) + L * wrap(j); }
    int vedge(int i, int j) const { return 2 * id(i, j); }
    int hedge(int i, int j) const { return 2 * id(i, j) + 1; }
    // slots at a vertex: 0 up, 1 right, 2 down, 3 left
    int slot_edge(int v, int slot) const;
    int slot_target(int v, int slot) const;
    bool black_site(int s) const { return ((s % L) + (s / L)) % 2 == 0; }
    // black diagonal at vertex v, as square ids, and its direction class
    std::array<int, 2> black_diag(int v) const;
    std::array<int, 2> white_diag(int v) const;
    // dual fundamental cycles: edges crossed by the row walk and the column walk
    std::vector<int> row_cycle_edges() const;
    std::vector<int> col_cycle_edges() const;
};

// JSON domain specs: {"type":"hex_ball","radius":n}, {"type":"hex_faces","faces":[[k,l],..]},
// {"type":"square","squares":[[i,j],..]}, {"type":"even_diamond","radius":r},
// {"type":"square_block","i0":..,"j0":..,"w":..,"h":..}
HexDomain hex_domain_from_json(const std::string& json_text);
SquareDomain square_domain_from_json(const std::string& json_text);
std::string hex_domain_to_json(const HexDomain& d);
std::string square_domain_to_json(const SquareDomain& d);

}  // namespace lf
