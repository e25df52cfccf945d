#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rcm {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Coord = std::vector<int>;

enum class BoundaryMode { free, wired, periodic };

const char* to_string(BoundaryMode mode) noexcept;
BoundaryMode parse_boundary_mode(const std::string& name);

struct Bond {
  VertexId u = 0;
  VertexId v = 0;
};

// Plain graph view consumed by the weight function, the exact oracle and the
// samplers. Wired graphs carry one extra ghost vertex (index num_vertices)
// joined to every vertex in wired_vertices by bonds that are always open.
struct BondGraph {
  std::size_t num_vertices = 0;
  std::vector<Bond> bonds;
  bool wired = false;
  std::vector<VertexId> wired_vertices;

  VertexId ghost() const noexcept { return static_cast<VertexId>(num_vertices); }
  std::size_t num_nodes() const noexcept { return num_vertices + (wired ? 1 : 0); }
};

// Finite box of Z^d with row-major vertex indexing (first coordinate slowest)
// and a deterministic edge order: for each vertex in index order, for each
// axis in order, the bond to the +axis neighbour if it exists.
class BoxGeometry {
 public:
  // Lambda_t = {x : |x|_inf <= t}, side 2t+1.
  static BoxGeometry cube(int dimension, int radius, BoundaryMode mode);
  // Rectangular box [0, sides[i]) in each coordinate.
  static BoxGeometry rectangle(std::vector<int> sides, BoundaryMode mode);

  int dimension() const noexcept { return static_cast<int>(sides_.size()); }
  // Box radius t for cubes built by cube(); -1 for rectangles.
  int radius() const noexcept { return radius_; }
  BoundaryMode mode() const noexcept { return mode_; }
  const std::vector<int>& sides() const noexcept { return sides_; }
  const std::vector<int>& origin() const noexcept { return origin_; }

  std::size_t num_vertices() const noexcept { return graph_.num_vertices; }
  std::size_t num_edges() const noexcept { return graph_.bonds.size(); }
  std::span<const Bond> edges() const noexcept { return graph_.bonds; }
  const BondGraph& graph() const noexcept { return graph_; }

  bool wired() const noexcept { return graph_.wired; }
  VertexId ghost() const noexcept { return graph_.ghost(); }

  // True for vertices of the box with at least one L1-neighbour outside it.
  bool is_boundary_adjacent(VertexId v) const { return boundary_adjacent_[v] != 0; }
  std::span<const VertexId> boundary_adjacent_vertices() const noexcept { return boundary_list_; }

  Coord coordinates(VertexId v) const;
  VertexId index(std::span<const int> coord) const;
  bool contains(std::span<const int> coord) const;

  // Vertex at coord + offset, wrapping in periodic mode; returns false if the
  // translate leaves a non-periodic box.
  bool translate(VertexId v, std::span<const int> offset, VertexId& out) const;

  // Adjacency in CSR form; neighbours(v)[i] is reached through incident(v)[i].
  std::span<const VertexId> neighbours(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::span<const EdgeId> incident(VertexId v) const {
    return {incident_.data() + offsets_[v], incident_.data() + offsets_[v + 1]};
  }

  // Distance (in lattice steps) from v to the complement of the box along
  // the nearest axis: 1 for boundary-adjacent vertices. Periodic boxes have
  // no boundary and report a large value.
  int depth(VertexId v) const;

 private:
  BoxGeometry(std::vector<int> sides, std::vector<int> origin, int radius, BoundaryMode mode);

  std::vector<int> sides_;
  std::vector<int> origin_;
  std::vector<std::size_t> strides_;
  int radius_ = -1;
  BoundaryMode mode_ = BoundaryMode::free;
  BondGraph graph_;
  std::vector<std::uint8_t> boundary_adjacent_;
  std::vector<VertexId> boundary_list_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
  std::vector<EdgeId> incident_;
};

// The outer vertex boundary {y outside the box : |x-y|_1 = 1 for some x in
// the box}. Empty for periodic boxes. Ordered by (inner vertex, axis, side).
std::vector<Coord> boundary(const BoxGeometry& g);

int l1_norm(std::span<const int> x) noexcept;
int linf_norm(std::span<const int> x) noexcept;

// Points of Z^2 and Z^2 + (1/2, 1/2) in doubled coordinates, so that both
// lattices are integral.
struct HalfPoint {
  int x2 = 0;
  int y2 = 0;
  friend bool operator==(const HalfPoint&, const HalfPoint&) = default;
  friend auto operator<=>(const HalfPoint&, const HalfPoint&) = default;
};

struct PlanarEdge {
  HalfPoint a;
  HalfPoint b;
  friend bool operator==(const PlanarEdge&, const PlanarEdge&) = default;
};

// The unique edge of the other lattice crossing e so that the four endpoints
// span a unit square. Endpoints are returned in lexicographic order, which
// makes crossing(crossing(e)) == canonical(e).
PlanarEdge crossing(const PlanarEdge& e) noexcept;
PlanarEdge canonical(const PlanarEdge& e) noexcept;

// Dual of a 2-d box. Dual vertices are the plaquette centres surrounding the
// primal box: for a free or wired (m x n) primal box that is the (m+1) x (n+1)
// grid of half-integer points; dual edge k crosses primal edge k. The dual
// bond graph is free. For periodic boxes the dual is the shifted torus.
class DualGeometry {
 public:
  std::size_t num_vertices() const noexcept { return graph_.num_vertices; }
  std::size_t num_edges() const noexcept { return graph_.bonds.size(); }
  const BondGraph& graph() const noexcept { return graph_; }

  HalfPoint vertex_position(VertexId v) const { return positions_[v]; }
  PlanarEdge primal_edge(EdgeId e) const { return primal_[e]; }
  PlanarEdge dual_edge(EdgeId e) const { return dual_[e]; }

  // Index maps of the involution restricted to the box: dual edge k is s of
  // primal edge k, so both maps are the identity on indices; they are kept
  // explicit so that tests can check them against the geometric construction.
  EdgeId dual_of(EdgeId primal) const { return to_dual_[primal]; }
  EdgeId primal_of(EdgeId dual) const { return to_primal_[dual]; }

  friend DualGeometry dual_geometry(const BoxGeometry& g);

 private:
  BondGraph graph_;
  std::vector<HalfPoint> positions_;
  std::vector<PlanarEdge> primal_;
  std::vector<PlanarEdge> dual_;
  std::vector<EdgeId> to_dual_;
  std::vector<EdgeId> to_primal_;
};

DualGeometry dual_geometry(const BoxGeometry& g);

// Inclusive coordinate window inside a box.
struct Window {
  Coord lo;
  Coord hi;

  bool contains(std::span<const int> x) const noexcept;
  std::size_t volume() const noexcept;
  int min_side() const noexcept;
};

Window full_window(const BoxGeometry& g);
// Sub-box of vertices at depth > margin, i.e. at distance >= margin+1 steps
// from the outside. Periodic boxes have no boundary; their interior window is
// the whole torus.
Window interior_window(const BoxGeometry& g, int margin);
// Default translation-averaging margin: ceil(t/4) (at least 1) for
// non-periodic boxes, measured from the shortest side.
int default_margin(const BoxGeometry& g) noexcept;
std::vector<VertexId> window_vertices(const BoxGeometry& g, const Window& w);

}  // namespace rcm
