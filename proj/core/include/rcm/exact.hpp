#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rcm/clusters.hpp"
#include "rcm/fk_model.hpp"
#include "rcm/lattice.hpp"

namespace rcm {

// Hard cap on the number of enumerated bonds (2^24 configurations).
inline constexpr std::size_t kMaxExactEdges = 24;

// Exact random-cluster law on a small graph. prob[mask] is the probability of
// the configuration whose bit e is the state of edge e.
struct ExactDistribution {
  BondGraph graph;
  FKParams params;
  std::vector<double> prob;
  double log_z = 0.0;

  std::size_t num_edges() const noexcept { return graph.bonds.size(); }
  double z() const;
  // |sum prob - 1|.
  double normalization_error() const;
};

// Enumerates all 2^|E| configurations. Work is split into fixed-size mask
// blocks whose partial sums are folded in block order, so the result does
// not depend on `threads`.
ExactDistribution enumerate(const BondGraph& g, const FKParams& prm, unsigned threads = 1);
ExactDistribution enumerate(const BoxGeometry& g, const FKParams& prm, unsigned threads = 1);

using EdgeEvent = std::function<bool(std::span<const std::uint8_t>)>;

double event_prob(const ExactDistribution& dist, const EdgeEvent& a);
double cov(const ExactDistribution& dist, const EdgeEvent& a, const EdgeEvent& b);
double expectation(const ExactDistribution& dist, const std::function<double(std::span<const std::uint8_t>)>& f);
std::vector<double> edge_marginals(const ExactDistribution& dist);

EdgeEvent edge_open_event(EdgeId e);
// {x <-> y}: an open path joins x and y (through the ghost in wired graphs).
EdgeEvent connection_event(const BondGraph& g, VertexId x, VertexId y);

// Verifies every event is increasing (flipping any closed bond open never
// turns it off), checked on all configurations up to 2^16 and on a
// deterministic sample of 4096 beyond that; a violation raises
// contract-violation. Returns min over pairs i <= j of cov(A_i, A_j).
double fkg_check(const ExactDistribution& dist, std::span<const EdgeEvent> events);

// F(x) = x / (sqrt(q) (1 - x)).
double duality_ratio(double x, double q);
// p* with F(p) F(p*) = 1, i.e. q(1-p) / (p + q(1-p)); dual_p(0) = 1, dual_p(1) = 0.
double dual_p(double p, double q);
// sqrt(q) / (1 + sqrt(q)), the fixed point of dual_p.
double self_dual_point(double q);

struct DualityReport {
  std::vector<double> primal;  // phi^1_{box,p,q}(A)
  std::vector<double> dual;    // phi^0_{dual box,p*,q}(A*)
  double max_discrepancy = 0.0;
};

// Compares the wired measure on a 2-d box with the free measure on its dual
// at p*, event by event, using omega*(s(e)) = 1 - omega(e).
DualityReport duality_check(const BoxGeometry& g, double p, double q, std::span<const EdgeEvent> events,
                            unsigned threads = 1);

struct ClusterLaw {
  std::vector<double> size;    // P(|C(x)| = k), k = 0..|V|
  std::vector<double> finite;  // P(|C(x)| = k, x not in the proxy)
  double theta = 0.0;          // P(x in proxy)
  double chi_f = 0.0;          // sum_k k * finite[k]
};

// Exact law of |C(x)| with the proxy split out. dist must have been
// enumerated on g's bond graph.
ClusterLaw exact_cluster_law(const ExactDistribution& dist, const BoxGeometry& g, VertexId x,
                             ProxyRule rule = ProxyRule::automatic);

}  // namespace rcm
