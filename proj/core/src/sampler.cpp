#include "rcm/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "rcm/errors.hpp"

namespace rcm {

const char* to_string(Algorithm a) noexcept {
  return a == Algorithm::sweeny ? "sweeny" : "swendsen-wang";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "sweeny") return Algorithm::sweeny;
  if (name == "swendsen-wang" || name == "sw") return Algorithm::swendsen_wang;
  fail(ErrorKind::invalid_parameter, "algorithm: expected 'sweeny' or 'swendsen-wang'; got '" + name + "'");
}

void check_algorithm(Algorithm a, const FKParams& prm) {
  prm.validate();
  if (a == Algorithm::sweeny) {
    require(prm.q >= 1.0, ErrorKind::unsupported_regime, "q < 1: Sweeny dynamics need q >= 1");
  } else {
    require(prm.integer_q(), ErrorKind::unsupported_algorithm,
            "Swendsen-Wang needs an integer cluster weight q >= 1");
    require(prm.q <= 255.0, ErrorKind::unsupported_algorithm, "Swendsen-Wang supports q <= 255");
  }
}

ChainState initial_state(const BoxGeometry& g, Algorithm a, std::uint64_t seed) {
  ChainState st;
  st.edges.assign(g.num_edges(), 1);
  if (a == Algorithm::swendsen_wang) st.spins.assign(g.graph().num_nodes(), 0);
  st.rng = Rng(seed);
  return st;
}

SweenySweeper::SweenySweeper(const BoxGeometry& g, const FKParams& prm)
    : g_(&g), prm_(prm), mark_(g.graph().num_nodes(), 0) {
  check_compatible(g, prm);
  check_algorithm(Algorithm::sweeny, prm);
  p_connected_ = heatbath_edge_prob(true, prm);
  p_disconnected_ = heatbath_edge_prob(false, prm);
}

bool SweenySweeper::connected_without(const EdgeConfig& omega, EdgeId e) {
  const BoxGeometry& g = *g_;
  const Bond bond = g.edges()[e];
  if (bond.u == bond.v) return true;

  if (epoch_ > 0xfffffff0U) {
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 0;
  }
  const std::uint32_t side_a = ++epoch_;
  const std::uint32_t side_b = ++epoch_;
  const VertexId ghost = g.ghost();
  const bool wired = g.wired();

  queue_a_.clear();
  queue_b_.clear();
  queue_a_.push_back(bond.u);
  queue_b_.push_back(bond.v);
  mark_[bond.u] = side_a;
  mark_[bond.v] = side_b;
  std::size_t head_a = 0;
  std::size_t head_b = 0;

  // Returns 1 if the searches met, -1 if this side is exhausted, 0 otherwise.
  auto step = [&](std::vector<VertexId>& queue, std::size_t& head, std::uint32_t mine, std::uint32_t other) -> int {
    if (head == queue.size()) return -1;
    const VertexId x = queue[head++];
    auto visit = [&](VertexId y) -> bool {
      if (mark_[y] == other) return true;
      if (mark_[y] != mine) {
        mark_[y] = mine;
        queue.push_back(y);
      }
      return false;
    };
    if (x == ghost && wired) {
      for (VertexId y : g.boundary_adjacent_vertices()) {
        if (visit(y)) return 1;
      }
      return 0;
    }
    const auto nb = g.neighbours(x);
    const auto inc = g.incident(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (inc[i] == e || !omega[inc[i]]) continue;
      if (visit(nb[i])) return 1;
    }
    if (wired && g.is_boundary_adjacent(x)) {
      if (visit(ghost)) return 1;
    }
    return 0;
  };

  for (;;) {
    const int a = step(queue_a_, head_a, side_a, side_b);
    if (a != 0) return a > 0;
    const int b = step(queue_b_, head_b, side_b, side_a);
    if (b != 0) return b > 0;
  }
}

void SweenySweeper::sweep(ChainState& st) {
  const BoxGeometry& g = *g_;
  coarse_.reset(g.graph().num_nodes());
  if (g.wired()) {
    for (VertexId v : g.boundary_adjacent_vertices()) coarse_.unite(v, g.ghost());
  }
  for (std::size_t e = 0; e < st.edges.size(); ++e) {
    if (st.edges[e]) coarse_.unite(g.edges()[e].u, g.edges()[e].v);
  }
  for (std::size_t e = 0; e < st.edges.size(); ++e) {
    const Bond b = g.edges()[e];
    // The coarse sets only ever merge during a sweep, so they over-approximate
    // connectivity; a split there proves the endpoints are disconnected.
    bool connected = false;
    if (coarse_.same(b.u, b.v)) connected = connected_without(st.edges, static_cast<EdgeId>(e));
    const double prob = connected ? p_connected_ : p_disconnected_;
    const bool open = st.rng.bernoulli(prob);
    st.edges[e] = open ? 1 : 0;
    if (open) coarse_.unite(b.u, b.v);
  }
  ++st.sweep;
}

SwendsenWangSweeper::SwendsenWangSweeper(const BoxGeometry& g, const FKParams& prm) : g_(&g), prm_(prm) {
  check_compatible(g, prm);
  check_algorithm(Algorithm::swendsen_wang, prm);
  colours_ = static_cast<int>(prm.q);
  cluster_colour_.assign(g.graph().num_nodes(), -1);
}

void SwendsenWangSweeper::sweep(ChainState& st) {
  const BoxGeometry& g = *g_;
  const auto edges = g.edges();
  const std::size_t nodes = g.graph().num_nodes();
  if (st.spins.size() != nodes) st.spins.assign(nodes, 0);

  if (colours_ == 1) {
    for (std::size_t e = 0; e < edges.size(); ++e) st.edges[e] = st.rng.bernoulli(prm_.p) ? 1 : 0;
    ++st.sweep;
    return;
  }

  // (i) bonds given spins.
  ds_.reset(nodes);
  if (g.wired()) {
    for (VertexId v : g.boundary_adjacent_vertices()) ds_.unite(v, g.ghost());
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Bond b = edges[e];
    std::uint8_t open = 0;
    if (st.spins[b.u] == st.spins[b.v]) open = st.rng.bernoulli(prm_.p) ? 1 : 0;
    st.edges[e] = open;
    if (open) ds_.unite(b.u, b.v);
  }

  // (ii) spins given bonds: one uniform colour per cluster, drawn in order of
  // each cluster's smallest vertex. The ghost cluster keeps colour 0.
  std::fill(cluster_colour_.begin(), cluster_colour_.end(), std::int16_t{-1});
  if (g.wired()) cluster_colour_[ds_.find(g.ghost())] = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const std::uint32_t root = ds_.find(static_cast<std::uint32_t>(v));
    if (cluster_colour_[root] < 0) {
      cluster_colour_[root] = static_cast<std::int16_t>(st.rng.below(static_cast<std::uint64_t>(colours_)));
    }
    st.spins[v] = static_cast<std::uint8_t>(cluster_colour_[root]);
  }
  if (g.wired()) st.spins[g.ghost()] = 0;
  ++st.sweep;
}

void sweeny_sweep(ChainState& st, const BoxGeometry& g, const FKParams& prm) {
  SweenySweeper(g, prm).sweep(st);
}

void sw_sweep(ChainState& st, const BoxGeometry& g, const FKParams& prm) {
  SwendsenWangSweeper(g, prm).sweep(st);
}

std::uint64_t default_burnin(const BoxGeometry& g, Algorithm a) noexcept {
  if (a == Algorithm::sweeny) return 100;
  const int longest = *std::max_element(g.sides().begin(), g.sides().end());
  return 10 * static_cast<std::uint64_t>(longest);
}

void run_chain(const BoxGeometry& g, const FKParams& prm, const ChainOptions& opt,
               const std::function<void(std::uint64_t, const ChainState&)>& sink) {
  require(opt.samples > 0, ErrorKind::invalid_parameter, "sweeps: number of kept configurations must be > 0");
  require(opt.thin >= 1, ErrorKind::invalid_parameter, "thin: must be >= 1");
  ChainState st = initial_state(g, opt.algorithm, opt.seed);
  auto drive = [&](auto& sweeper) {
    for (std::uint64_t i = 0; i < opt.burnin; ++i) sweeper.sweep(st);
    for (std::uint64_t k = 0; k < opt.samples; ++k) {
      for (std::uint64_t i = 0; i < opt.thin; ++i) sweeper.sweep(st);
      sink(k, st);
    }
  };
  if (opt.algorithm == Algorithm::sweeny) {
    SweenySweeper s(g, prm);
    drive(s);
  } else {
    SwendsenWangSweeper s(g, prm);
    drive(s);
  }
}

std::vector<EdgeConfig> collect_chain(const BoxGeometry& g, const FKParams& prm, const ChainOptions& opt) {
  std::vector<EdgeConfig> out;
  out.reserve(opt.samples);
  run_chain(g, prm, opt, [&](std::uint64_t, const ChainState& st) { out.push_back(st.edges); });
  return out;
}

}  // namespace rcm
