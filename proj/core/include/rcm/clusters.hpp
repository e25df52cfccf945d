#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rcm/fk_model.hpp"
#include "rcm/lattice.hpp"

namespace rcm {

// Which finite-volume stand-in for the infinite cluster I is used.
//   boundary: clusters touching the box boundary (wired: the ghost cluster)
//   largest:  the unique largest cluster (ties: smallest id)
//   winding:  clusters that wrap around a periodic box
//   automatic: boundary for free/wired boxes, largest for periodic ones
enum class ProxyRule { automatic, boundary, largest, winding };

const char* to_string(ProxyRule r) noexcept;
ProxyRule parse_proxy_rule(const std::string& name);
ProxyRule resolve(ProxyRule r, BoundaryMode mode) noexcept;

struct ClusterDecomposition {
  // Dense cluster ids, numbered in order of each cluster's smallest vertex.
  std::vector<std::uint32_t> cluster_of;
  std::vector<std::uint32_t> size;           // vertices of the box only
  std::vector<VertexId> representative;      // smallest vertex index
  std::vector<std::uint8_t> touches_boundary;
  std::vector<std::uint8_t> in_proxy;
  ProxyRule rule = ProxyRule::boundary;

  std::size_t num_clusters() const noexcept { return size.size(); }
  bool vertex_in_proxy(VertexId v) const { return in_proxy[cluster_of[v]] != 0; }
  std::uint32_t cluster_size(VertexId v) const { return size[cluster_of[v]]; }
  // |C'(x)|: the size of x's cluster, or 0 if it belongs to the proxy.
  std::uint32_t finite_size(VertexId v) const { return vertex_in_proxy(v) ? 0 : cluster_size(v); }
};

ClusterDecomposition components(const BoxGeometry& g, std::span<const std::uint8_t> omega,
                                ProxyRule rule = ProxyRule::automatic);

// Vertices of the infinite-cluster proxy, ascending.
std::vector<VertexId> infinite_proxy(const ClusterDecomposition& dec);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Mean and standard error of per-sample values.
Estimate mean_estimate(std::span<const double> per_sample);

// Per-configuration quantities over a window.
double proxy_density(const BoxGeometry& g, const ClusterDecomposition& dec, const Window& w);
std::uint64_t proxy_count(const BoxGeometry& g, const ClusterDecomposition& dec, const Window& w);
// sum_{x in W} |C'(x)| / |W|.
double finite_cluster_mass(const BoxGeometry& g, const ClusterDecomposition& dec, const Window& w);

// theta-hat and chi^f-hat over a sample set.
Estimate theta_hat(const BoxGeometry& g, std::span<const ClusterDecomposition> samples, const Window& w);
Estimate chi_f_hat(const BoxGeometry& g, std::span<const ClusterDecomposition> samples, const Window& w);

// Both sides of sum_{finite A} |A n W|^2 = sum_{x in W} |C'(x) n W|.
struct IdentitySides {
  std::uint64_t lhs = 0;
  std::uint64_t rhs = 0;
};
IdentitySides sum_sq_identity_check(const BoxGeometry& g, const ClusterDecomposition& dec, const Window& w);

// Histogram of finite cluster sizes (index k = number of finite clusters of
// size k, restricted to clusters meeting the box) and the proxy mass.
struct SizeHistogram {
  std::vector<std::uint64_t> count;
  std::uint64_t proxy_vertices = 0;
};
SizeHistogram size_histogram(const ClusterDecomposition& dec);

// Accumulates 1{x in I, x+k in I} over x in a window for every offset with
// |k|_inf <= cutoff. The window must leave room for the cutoff in
// non-periodic boxes.
class TwoPointAccumulator {
 public:
  TwoPointAccumulator(const BoxGeometry& g, Window w, int cutoff);

  void add(const ClusterDecomposition& dec);
  // Adds the counts of an accumulator built on the same window and cutoff.
  void merge(const TwoPointAccumulator& other);

  int cutoff() const noexcept { return cutoff_; }
  std::size_t samples() const noexcept { return samples_; }
  // Mean of 1{x in I} over samples and the window.
  double theta() const;
  // Two-point estimate for the offset with the given coordinates.
  double two_point(std::span<const int> offset) const;

  // Mean of 1{x+k in I} over samples and x in the window.
  double shifted_theta(std::size_t offset_index) const;

  // Truncated series sum_{|k|_inf <= K} (two_point(k) - theta shifted_theta(k))
  // for K up to cutoff(), plus the contribution of the outermost shell
  // |k|_inf = K. In a translation-invariant box shifted_theta(k) = theta and
  // each term is two_point(k) - theta^2; near a boundary the product keeps
  // every term a genuine covariance.
  struct Series {
    double value = 0.0;
    double last_shell = 0.0;
  };
  Series sigma_sq(int K) const;

 private:
  std::size_t offset_index(std::span<const int> k) const;

  Window window_;
  int cutoff_;
  std::vector<VertexId> sites_;
  std::vector<std::vector<int>> offsets_;
  std::vector<VertexId> targets_;  // sites x offsets
  std::vector<std::uint64_t> pair_hits_;
  std::vector<std::uint64_t> vertex_hits_;
  std::uint64_t proxy_hits_ = 0;
  std::uint64_t site_visits_ = 0;
  std::size_t samples_ = 0;
  std::vector<std::uint8_t> scratch_;
};

double two_point_hat(const BoxGeometry& g, std::span<const ClusterDecomposition> samples, const Window& w,
                     std::span<const int> offset);
TwoPointAccumulator::Series sigma_sq_hat(const BoxGeometry& g, std::span<const ClusterDecomposition> samples,
                                         const Window& w, int cutoff);

// Direct window estimator Var(|W n I|) / |W| used as the cross-check of the
// series.
double window_variance_density(const BoxGeometry& g, std::span<const ClusterDecomposition> samples,
                               const Window& w);

// Summability diagnostics with r_n = n/4 along the first axis.
//   tail[n-1] = P(x not in I and |C(x)| >= n/4)
//   cov[n-1]  = Cov(1{|C(x)| >= n/4}, 1{|C(x + n e1)| >= n/4}), proxy counted as infinite
// n runs over 1..max_n; the covariance needs x and x + n e1 inside the window.
class ConditionAccumulator {
 public:
  ConditionAccumulator(const BoxGeometry& g, Window w, int max_n);
  void add(const ClusterDecomposition& dec);
  void merge(const ConditionAccumulator& other);
  std::vector<double> tail() const;
  std::vector<double> covariance() const;
  int max_n() const noexcept { return max_n_; }

 private:
  const BoxGeometry* g_;
  Window window_;
  int max_n_;
  std::vector<VertexId> sites_;
  std::vector<std::uint8_t> in_window_;
  std::vector<std::uint64_t> tail_hits_;
  std::vector<std::uint64_t> single_hits_;
  std::vector<std::uint64_t> pair_hits_;
  std::vector<std::uint64_t> pair_trials_;
  std::vector<std::uint64_t> pair_first_;
  std::vector<std::uint64_t> pair_second_;
  std::uint64_t site_visits_ = 0;
};

std::vector<double> condition_m_hat(const BoxGeometry& g, std::span<const ClusterDecomposition> samples,
                                    const Window& w, int max_n);
std::vector<double> condition_c_hat(const BoxGeometry& g, std::span<const ClusterDecomposition> samples,
                                    const Window& w, int max_n);

// For every vertex, the largest L1 distance to another vertex of its cluster.
std::vector<int> cluster_reach(const BoxGeometry& g, const ClusterDecomposition& dec);

// Estimates phi(0 <-> dB(0,n)) for n = 1..max_n by translation averaging
// over sites x whose ball B(x, n+1) lies in the box. The boundary dB(0,n)
// is the L1 sphere of radius n+1.
class BoundaryConnectionAccumulator {
 public:
  BoundaryConnectionAccumulator(const BoxGeometry& g, int max_n);
  void add(const ClusterDecomposition& dec);
  // Appends the other accumulator's per-sample values after this one's.
  void merge(const BoundaryConnectionAccumulator& other);
  std::vector<Estimate> estimates() const;
  int max_n() const noexcept { return max_n_; }

 private:
  const BoxGeometry* g_;
  int max_n_;
  std::vector<std::vector<VertexId>> sites_;  // per n
  std::vector<std::vector<double>> per_sample_;
};

Estimate boundary_connection_hat(const BoxGeometry& g, std::span<const ClusterDecomposition> samples, int n);

struct ClusterReport {
  double theta = 0.0;
  double chi_f = 0.0;
  std::uint64_t largest_cluster = 0;
  std::uint64_t num_clusters = 0;
  std::uint64_t proxy_vertices = 0;
  SizeHistogram histogram;
};

ClusterReport cluster_report(const BoxGeometry& g, const ClusterDecomposition& dec, const Window& w);

}  // namespace rcm
