#include "rcm/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <utility>

#include "rcm/errors.hpp"

namespace rcm {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::unsupported_dimension: return "unsupported-dimension";
    case ErrorKind::unsupported_regime: return "unsupported-regime";
    case ErrorKind::unsupported_algorithm: return "unsupported-algorithm";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::invalid_window: return "invalid-window";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::degenerate_sample: return "degenerate-sample";
    case ErrorKind::contract_violation: return "contract-violation";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const char* to_string(BoundaryMode mode) noexcept {
  switch (mode) {
    case BoundaryMode::free: return "free";
    case BoundaryMode::wired: return "wired";
    case BoundaryMode::periodic: return "periodic";
  }
  return "free";
}

BoundaryMode parse_boundary_mode(const std::string& name) {
  if (name == "free") return BoundaryMode::free;
  if (name == "wired") return BoundaryMode::wired;
  if (name == "periodic") return BoundaryMode::periodic;
  fail(ErrorKind::invalid_parameter, "mode: expected one of free, wired, periodic; got '" + name + "'");
}

int l1_norm(std::span<const int> x) noexcept {
  int s = 0;
  for (int v : x) s += std::abs(v);
  return s;
}

int linf_norm(std::span<const int> x) noexcept {
  int s = 0;
  for (int v : x) s = std::max(s, std::abs(v));
  return s;
}

BoxGeometry BoxGeometry::cube(int dimension, int radius, BoundaryMode mode) {
  require(dimension >= 2, ErrorKind::invalid_parameter, "d: dimension must be >= 2");
  require(radius >= 0, ErrorKind::invalid_parameter, "t: box radius must be >= 0");
  std::vector<int> sides(static_cast<std::size_t>(dimension), 2 * radius + 1);
  std::vector<int> origin(static_cast<std::size_t>(dimension), -radius);
  return BoxGeometry(std::move(sides), std::move(origin), radius, mode);
}

BoxGeometry BoxGeometry::rectangle(std::vector<int> sides, BoundaryMode mode) {
  require(sides.size() >= 2, ErrorKind::invalid_parameter, "d: dimension must be >= 2");
  for (int s : sides) require(s >= 1, ErrorKind::invalid_parameter, "sides: every side must be >= 1");
  std::vector<int> origin(sides.size(), 0);
  return BoxGeometry(std::move(sides), std::move(origin), -1, mode);
}

BoxGeometry::BoxGeometry(std::vector<int> sides, std::vector<int> origin, int radius, BoundaryMode mode)
    : sides_(std::move(sides)), origin_(std::move(origin)), radius_(radius), mode_(mode) {
  const std::size_t d = sides_.size();
  if (mode_ == BoundaryMode::periodic) {
    for (int s : sides_) {
      require(s >= 3, ErrorKind::invalid_parameter,
              "periodic boxes need side >= 3 (t >= 1) to avoid loops and double bonds");
    }
  }
  std::size_t n = 1;
  for (int s : sides_) {
    n *= static_cast<std::size_t>(s);
    require(n < std::numeric_limits<VertexId>::max() / 2, ErrorKind::cap_exceeded, "box too large");
  }
  strides_.assign(d, 1);
  for (std::size_t i = d - 1; i-- > 0;) strides_[i] = strides_[i + 1] * static_cast<std::size_t>(sides_[i + 1]);

  graph_.num_vertices = n;
  graph_.wired = mode_ == BoundaryMode::wired;
  boundary_adjacent_.assign(n, 0);

  std::vector<int> local(d, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rem = v;
    for (std::size_t a = 0; a < d; ++a) {
      local[a] = static_cast<int>(rem / strides_[a]);
      rem %= strides_[a];
    }
    bool touches = false;
    for (std::size_t a = 0; a < d; ++a) {
      if (local[a] == 0 || local[a] == sides_[a] - 1) touches = true;
      if (local[a] + 1 < sides_[a]) {
        graph_.bonds.push_back({static_cast<VertexId>(v), static_cast<VertexId>(v + strides_[a])});
      } else if (mode_ == BoundaryMode::periodic) {
        const std::size_t w = v - static_cast<std::size_t>(local[a]) * strides_[a];
        graph_.bonds.push_back({static_cast<VertexId>(v), static_cast<VertexId>(w)});
      }
    }
    if (mode_ != BoundaryMode::periodic && touches) {
      boundary_adjacent_[v] = 1;
      boundary_list_.push_back(static_cast<VertexId>(v));
    }
  }
  if (graph_.wired) graph_.wired_vertices = boundary_list_;

  std::vector<std::size_t> degree(n, 0);
  for (const Bond& b : graph_.bonds) {
    ++degree[b.u];
    ++degree[b.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n]);
  incident_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < graph_.bonds.size(); ++e) {
    const Bond& b = graph_.bonds[e];
    adjacency_[fill[b.u]] = b.v;
    incident_[fill[b.u]++] = static_cast<EdgeId>(e);
    adjacency_[fill[b.v]] = b.u;
    incident_[fill[b.v]++] = static_cast<EdgeId>(e);
  }
}

Coord BoxGeometry::coordinates(VertexId v) const {
  Coord x(sides_.size());
  std::size_t rem = v;
  for (std::size_t a = 0; a < sides_.size(); ++a) {
    x[a] = static_cast<int>(rem / strides_[a]) + origin_[a];
    rem %= strides_[a];
  }
  return x;
}

bool BoxGeometry::contains(std::span<const int> coord) const {
  if (coord.size() != sides_.size()) return false;
  for (std::size_t a = 0; a < sides_.size(); ++a) {
    const int local = coord[a] - origin_[a];
    if (local < 0 || local >= sides_[a]) return false;
  }
  return true;
}

VertexId BoxGeometry::index(std::span<const int> coord) const {
  require(contains(coord), ErrorKind::invalid_parameter, "coordinate outside the box");
  std::size_t v = 0;
  for (std::size_t a = 0; a < sides_.size(); ++a) v += static_cast<std::size_t>(coord[a] - origin_[a]) * strides_[a];
  return static_cast<VertexId>(v);
}

bool BoxGeometry::translate(VertexId v, std::span<const int> offset, VertexId& out) const {
  std::size_t rem = v;
  std::size_t w = 0;
  for (std::size_t a = 0; a < sides_.size(); ++a) {
    int local = static_cast<int>(rem / strides_[a]);
    rem %= strides_[a];
    local += offset[a];
    if (mode_ == BoundaryMode::periodic) {
      local %= sides_[a];
      if (local < 0) local += sides_[a];
    } else if (local < 0 || local >= sides_[a]) {
      return false;
    }
    w += static_cast<std::size_t>(local) * strides_[a];
  }
  out = static_cast<VertexId>(w);
  return true;
}

int BoxGeometry::depth(VertexId v) const {
  if (mode_ == BoundaryMode::periodic) return std::numeric_limits<int>::max() / 4;
  std::size_t rem = v;
  int best = std::numeric_limits<int>::max();
  for (std::size_t a = 0; a < sides_.size(); ++a) {
    const int local = static_cast<int>(rem / strides_[a]);
    rem %= strides_[a];
    best = std::min({best, local + 1, sides_[a] - local});
  }
  return best;
}

std::vector<Coord> boundary(const BoxGeometry& g) {
  std::vector<Coord> out;
  if (g.mode() == BoundaryMode::periodic) return out;
  for (VertexId v : g.boundary_adjacent_vertices()) {
    const Coord x = g.coordinates(v);
    for (std::size_t a = 0; a < x.size(); ++a) {
      for (int step : {-1, +1}) {
        Coord y = x;
        y[a] += step;
        if (!g.contains(y)) out.push_back(std::move(y));
      }
    }
  }
  return out;
}

PlanarEdge canonical(const PlanarEdge& e) noexcept {
  return e.b < e.a ? PlanarEdge{e.b, e.a} : e;
}

PlanarEdge crossing(const PlanarEdge& e) noexcept {
  // Midpoint in doubled coordinates is (a+b)/2; the crossing edge is the
  // direction rotated by 90 degrees, half-length on each side.
  const int mx = (e.a.x2 + e.b.x2) / 2;
  const int my = (e.a.y2 + e.b.y2) / 2;
  const int dx = (e.b.x2 - e.a.x2) / 2;
  const int dy = (e.b.y2 - e.a.y2) / 2;
  return canonical({{mx + dy, my - dx}, {mx - dy, my + dx}});
}

DualGeometry dual_geometry(const BoxGeometry& g) {
  require(g.dimension() == 2, ErrorKind::unsupported_dimension, "dual geometry exists only for d = 2");
  DualGeometry dual;
  const int m = g.sides()[0];
  const int n = g.sides()[1];
  const bool periodic = g.mode() == BoundaryMode::periodic;
  const int dm = periodic ? m : m + 1;
  const int dn = periodic ? n : n + 1;
  const int ox = g.origin()[0];
  const int oy = g.origin()[1];

  // Dual vertex (i, j) sits at (ox - 1/2 + i, oy - 1/2 + j), or at
  // (ox + 1/2 + i, oy + 1/2 + j) on the torus.
  const int shift = periodic ? 1 : -1;
  dual.graph_.num_vertices = static_cast<std::size_t>(dm) * static_cast<std::size_t>(dn);
  dual.positions_.reserve(dual.graph_.num_vertices);
  for (int i = 0; i < dm; ++i) {
    for (int j = 0; j < dn; ++j) dual.positions_.push_back({2 * (ox + i) + shift, 2 * (oy + j) + shift});
  }
  auto dual_index = [&](HalfPoint p) {
    int i = (p.x2 - shift) / 2 - ox;
    int j = (p.y2 - shift) / 2 - oy;
    if (periodic) {
      i = ((i % dm) + dm) % dm;
      j = ((j % dn) + dn) % dn;
    }
    return static_cast<VertexId>(i * dn + j);
  };

  const std::size_t ne = g.num_edges();
  dual.primal_.reserve(ne);
  dual.dual_.reserve(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const Bond& b = g.edges()[e];
    const Coord xu = g.coordinates(b.u);
    Coord xv = g.coordinates(b.v);
    // Unwrap periodic bonds so the primal edge is a unit segment.
    for (int a = 0; a < 2; ++a) {
      if (xv[a] - xu[a] < -1) xv[a] = xu[a] + 1;
    }
    const PlanarEdge primal = canonical({{2 * xu[0], 2 * xu[1]}, {2 * xv[0], 2 * xv[1]}});
    const PlanarEdge star = crossing(primal);
    dual.primal_.push_back(primal);
    dual.dual_.push_back(star);
    dual.graph_.bonds.push_back({dual_index(star.a), dual_index(star.b)});
    dual.to_dual_.push_back(static_cast<EdgeId>(e));
    dual.to_primal_.push_back(static_cast<EdgeId>(e));
  }
  return dual;
}

bool Window::contains(std::span<const int> x) const noexcept {
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (x[a] < lo[a] || x[a] > hi[a]) return false;
  }
  return true;
}

std::size_t Window::volume() const noexcept {
  std::size_t v = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (hi[a] < lo[a]) return 0;
    v *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
  }
  return v;
}

int Window::min_side() const noexcept {
  int s = std::numeric_limits<int>::max();
  for (std::size_t a = 0; a < lo.size(); ++a) s = std::min(s, hi[a] - lo[a] + 1);
  return s;
}

Window full_window(const BoxGeometry& g) {
  Window w;
  for (std::size_t a = 0; a < g.sides().size(); ++a) {
    w.lo.push_back(g.origin()[a]);
    w.hi.push_back(g.origin()[a] + g.sides()[a] - 1);
  }
  return w;
}

Window interior_window(const BoxGeometry& g, int margin) {
  require(margin >= 0, ErrorKind::invalid_window, "margin must be >= 0");
  Window w = full_window(g);
  if (g.mode() == BoundaryMode::periodic) return w;
  for (std::size_t a = 0; a < w.lo.size(); ++a) {
    w.lo[a] += margin;
    w.hi[a] -= margin;
  }
  require(w.volume() > 0, ErrorKind::invalid_window, "margin leaves an empty interior window");
  return w;
}

int default_margin(const BoxGeometry& g) noexcept {
  if (g.mode() == BoundaryMode::periodic) return 0;
  const int shortest = *std::min_element(g.sides().begin(), g.sides().end());
  const int t = (shortest - 1) / 2;
  return std::max(1, (t + 3) / 4);
}

std::vector<VertexId> window_vertices(const BoxGeometry& g, const Window& w) {
  std::vector<VertexId> out;
  out.reserve(w.volume());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (w.contains(g.coordinates(static_cast<VertexId>(v)))) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

}  // namespace rcm
