#include "rcm/fk_model.hpp"

#include <cmath>
#include <limits>

#include "rcm/errors.hpp"
#include "rcm/union_find.hpp"

namespace rcm {

double beta_from_p(double p) noexcept {
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return -0.5 * std::log1p(-p);
}

double p_from_beta(double beta) noexcept {
  if (std::isinf(beta)) return 1.0;
  return -std::expm1(-2.0 * beta);
}

FKParams FKParams::make(double p, double q, Boundary b) {
  FKParams prm{p, q, b};
  prm.validate();
  return prm;
}

FKParams FKParams::from_beta(double beta, double q, Boundary b) {
  require(beta >= 0.0, ErrorKind::invalid_parameter, "beta: inverse temperature must be >= 0");
  return make(p_from_beta(beta), q, b);
}

double FKParams::beta() const noexcept { return beta_from_p(p); }

bool FKParams::integer_q() const noexcept { return q >= 1.0 && std::floor(q) == q; }

void FKParams::validate() const {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorKind::invalid_parameter, "p: must lie in [0, 1]");
  require(std::isfinite(q) && q > 0.0, ErrorKind::invalid_parameter, "q: must be > 0");
}

Boundary boundary_of(BoundaryMode mode) noexcept {
  return mode == BoundaryMode::wired ? Boundary::wired : Boundary::free;
}

void check_compatible(const BoxGeometry& g, const FKParams& prm) {
  require(boundary_of(g.mode()) == prm.boundary, ErrorKind::invalid_parameter,
          "boundary condition b does not match the geometry mode (wired <-> b=1)");
}

std::size_t cluster_count(const BondGraph& g, std::span<const std::uint8_t> omega) {
  require(omega.size() == g.bonds.size(), ErrorKind::invalid_parameter, "edge configuration has wrong length");
  DisjointSets ds(g.num_nodes());
  if (g.wired) {
    for (VertexId v : g.wired_vertices) ds.unite(v, g.ghost());
  }
  for (std::size_t e = 0; e < omega.size(); ++e) {
    if (omega[e]) ds.unite(g.bonds[e].u, g.bonds[e].v);
  }
  // A wired graph with no wired vertices would leave the ghost isolated; it
  // is not part of the box and must not be counted.
  std::size_t k = ds.num_sets();
  if (g.wired && ds.set_size(g.ghost()) == 1) --k;
  return k;
}

EdgeConfig config_from_mask(std::uint64_t mask, std::size_t num_edges) {
  EdgeConfig w(num_edges);
  for (std::size_t e = 0; e < num_edges; ++e) w[e] = static_cast<std::uint8_t>((mask >> e) & 1U);
  return w;
}

std::uint64_t mask_from_config(std::span<const std::uint8_t> omega) {
  require(omega.size() <= 64, ErrorKind::cap_exceeded, "mask encoding supports at most 64 edges");
  std::uint64_t m = 0;
  for (std::size_t e = 0; e < omega.size(); ++e) {
    if (omega[e]) m |= std::uint64_t{1} << e;
  }
  return m;
}

double log_fk_weight(const BondGraph& g, std::span<const std::uint8_t> omega, const FKParams& prm) {
  std::size_t open = 0;
  for (auto b : omega) open += b ? 1 : 0;
  const std::size_t closed = omega.size() - open;
  const double k = static_cast<double>(cluster_count(g, omega));
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  double lw = k * std::log(prm.q);
  if (open > 0) lw += prm.p > 0.0 ? static_cast<double>(open) * std::log(prm.p) : neg_inf;
  if (closed > 0) lw += prm.p < 1.0 ? static_cast<double>(closed) * std::log1p(-prm.p) : neg_inf;
  return lw;
}

double fk_weight(const BondGraph& g, std::span<const std::uint8_t> omega, const FKParams& prm) {
  return std::exp(log_fk_weight(g, omega, prm));
}

double fk_weight(const BoxGeometry& g, std::span<const std::uint8_t> omega, const FKParams& prm) {
  return fk_weight(g.graph(), omega, prm);
}

double heatbath_edge_prob(bool connected_without_edge, const FKParams& prm) {
  if (prm.q < 1.0) {
    fail(ErrorKind::unsupported_regime, "q < 1: single-bond dynamics are implemented only for q >= 1");
  }
  if (connected_without_edge) return prm.p;
  const double denom = prm.p + prm.q * (1.0 - prm.p);
  return prm.p / denom;
}

}  // namespace rcm
