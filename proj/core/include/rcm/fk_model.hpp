#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcm/lattice.hpp"

namespace rcm {

enum class Boundary : std::uint8_t { free = 0, wired = 1 };

// Parameters of the random-cluster weight. p is the open-bond probability,
// q the cluster weight, and beta = -log(1-p)/2 the matching Potts inverse
// temperature (p = 1 - exp(-2 beta)).
struct FKParams {
  double p = 0.5;
  double q = 1.0;
  Boundary boundary = Boundary::free;

  static FKParams make(double p, double q, Boundary b = Boundary::free);
  static FKParams from_beta(double beta, double q, Boundary b = Boundary::free);

  double beta() const noexcept;
  bool integer_q() const noexcept;

  void validate() const;
};

double beta_from_p(double p) noexcept;
double p_from_beta(double beta) noexcept;

// Boundary condition implied by a geometry's mode (periodic counts as free).
Boundary boundary_of(BoundaryMode mode) noexcept;
// Throws invalid-parameter when prm.boundary disagrees with the geometry.
void check_compatible(const BoxGeometry& g, const FKParams& prm);

// One byte per edge, 1 = open, in geometry edge order.
using EdgeConfig = std::vector<std::uint8_t>;

// Number of clusters k(omega) of the bond graph, with every wired vertex
// fused to the ghost (so all boundary-touching clusters count once).
std::size_t cluster_count(const BondGraph& g, std::span<const std::uint8_t> omega);

// Edge configuration from the low bits of a mask (bit e = edge e).
EdgeConfig config_from_mask(std::uint64_t mask, std::size_t num_edges);
std::uint64_t mask_from_config(std::span<const std::uint8_t> omega);

double log_fk_weight(const BondGraph& g, std::span<const std::uint8_t> omega, const FKParams& prm);
// prod_e p^w(e) (1-p)^(1-w(e)) * q^k(w).
double fk_weight(const BondGraph& g, std::span<const std::uint8_t> omega, const FKParams& prm);
double fk_weight(const BoxGeometry& g, std::span<const std::uint8_t> omega, const FKParams& prm);

// Conditional probability that a bond is open given the rest of the
// configuration: p if its endpoints are joined without it, else
// p / (p + q(1-p)). Requires q >= 1.
double heatbath_edge_prob(bool connected_without_edge, const FKParams& prm);

}  // namespace rcm
