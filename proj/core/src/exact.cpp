#include "rcm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "rcm/errors.hpp"
#include "rcm/rng.hpp"
#include "rcm/union_find.hpp"

namespace rcm {

namespace {

constexpr std::uint64_t kBlock = 4096;

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) noexcept {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

template <class Fn>
void for_each_block(std::uint64_t total, unsigned threads, Fn&& fn) {
  const std::uint64_t blocks = (total + kBlock - 1) / kBlock;
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));
  if (threads == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) fn(b, b * kBlock, std::min(total, (b + 1) * kBlock));
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t b = w; b < blocks; b += threads) fn(b, b * kBlock, std::min(total, (b + 1) * kBlock));
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

double ExactDistribution::z() const { return std::exp(log_z); }

double ExactDistribution::normalization_error() const {
  CompensatedSum s;
  for (double x : prob) s.add(x);
  return std::abs(s.value() - 1.0);
}

ExactDistribution enumerate(const BondGraph& g, const FKParams& prm, unsigned threads) {
  prm.validate();
  const std::size_t ne = g.bonds.size();
  if (ne > kMaxExactEdges) {
    fail(ErrorKind::cap_exceeded, "exact enumeration is capped at " + std::to_string(kMaxExactEdges) +
                                      " edges; graph has " + std::to_string(ne));
  }
  const std::uint64_t total = std::uint64_t{1} << ne;
  ExactDistribution dist;
  dist.graph = g;
  dist.params = prm;
  dist.prob.assign(total, 0.0);

  // Log weights first; then exponentiate against the maximum.
  for_each_block(total, threads, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    EdgeConfig w(ne);
    for (std::uint64_t m = lo; m < hi; ++m) {
      for (std::size_t e = 0; e < ne; ++e) w[e] = static_cast<std::uint8_t>((m >> e) & 1U);
      dist.prob[m] = log_fk_weight(g, w, prm);
    }
  });
  const double max_log = *std::max_element(dist.prob.begin(), dist.prob.end());
  require(std::isfinite(max_log), ErrorKind::degenerate_sample, "all configurations have zero weight");

  const std::uint64_t blocks = (total + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  for_each_block(total, threads, [&](std::uint64_t b, std::uint64_t lo, std::uint64_t hi) {
    CompensatedSum s;
    for (std::uint64_t m = lo; m < hi; ++m) {
      dist.prob[m] = std::exp(dist.prob[m] - max_log);
      s.add(dist.prob[m]);
    }
    partial[b] = s.value();
  });
  CompensatedSum total_sum;
  for (double s : partial) total_sum.add(s);
  const double sum = total_sum.value();
  for (double& x : dist.prob) x /= sum;
  dist.log_z = max_log + std::log(sum);
  return dist;
}

ExactDistribution enumerate(const BoxGeometry& g, const FKParams& prm, unsigned threads) {
  check_compatible(g, prm);
  return enumerate(g.graph(), prm, threads);
}

double expectation(const ExactDistribution& dist, const std::function<double(std::span<const std::uint8_t>)>& f) {
  const std::size_t ne = dist.num_edges();
  EdgeConfig w(ne);
  double s = 0.0;
  for (std::uint64_t m = 0; m < dist.prob.size(); ++m) {
    if (dist.prob[m] == 0.0) continue;
    for (std::size_t e = 0; e < ne; ++e) w[e] = static_cast<std::uint8_t>((m >> e) & 1U);
    s += dist.prob[m] * f(w);
  }
  return s;
}

double event_prob(const ExactDistribution& dist, const EdgeEvent& a) {
  return expectation(dist, [&](std::span<const std::uint8_t> w) { return a(w) ? 1.0 : 0.0; });
}

double cov(const ExactDistribution& dist, const EdgeEvent& a, const EdgeEvent& b) {
  const double pab = expectation(dist, [&](std::span<const std::uint8_t> w) { return a(w) && b(w) ? 1.0 : 0.0; });
  return pab - event_prob(dist, a) * event_prob(dist, b);
}

std::vector<double> edge_marginals(const ExactDistribution& dist) {
  const std::size_t ne = dist.num_edges();
  std::vector<double> out(ne, 0.0);
  for (std::uint64_t m = 0; m < dist.prob.size(); ++m) {
    for (std::size_t e = 0; e < ne; ++e) {
      if ((m >> e) & 1U) out[e] += dist.prob[m];
    }
  }
  return out;
}

EdgeEvent edge_open_event(EdgeId e) {
  return [e](std::span<const std::uint8_t> w) { return w[e] != 0; };
}

EdgeEvent connection_event(const BondGraph& g, VertexId x, VertexId y) {
  require(x < g.num_nodes() && y < g.num_nodes(), ErrorKind::invalid_parameter, "connection event: vertex out of range");
  return [g, x, y](std::span<const std::uint8_t> w) {
    DisjointSets ds(g.num_nodes());
    if (g.wired) {
      for (VertexId v : g.wired_vertices) ds.unite(v, g.ghost());
    }
    for (std::size_t e = 0; e < w.size(); ++e) {
      if (w[e]) ds.unite(g.bonds[e].u, g.bonds[e].v);
    }
    return ds.same(x, y);
  };
}

double fkg_check(const ExactDistribution& dist, std::span<const EdgeEvent> events) {
  require(dist.params.q >= 1.0, ErrorKind::unsupported_regime, "FKG inequalities are checked for q >= 1 only");
  require(!events.empty(), ErrorKind::insufficient_data, "fkg_check: no events supplied");
  const std::size_t ne = dist.num_edges();
  const std::uint64_t total = dist.prob.size();

  std::vector<std::uint64_t> probe;
  if (total <= (std::uint64_t{1} << 16)) {
    probe.resize(total);
    for (std::uint64_t m = 0; m < total; ++m) probe[m] = m;
  } else {
    std::uint64_t state = 0x5eed;
    for (int i = 0; i < 4096; ++i) probe.push_back(splitmix64(state) & (total - 1));
  }
  EdgeConfig w(ne);
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::uint64_t m : probe) {
      for (std::size_t e = 0; e < ne; ++e) w[e] = static_cast<std::uint8_t>((m >> e) & 1U);
      if (!events[i](w)) continue;
      for (std::size_t e = 0; e < ne; ++e) {
        if (w[e]) continue;
        w[e] = 1;
        const bool still = events[i](w);
        w[e] = 0;
        if (!still) {
          fail(ErrorKind::contract_violation, "fkg_check: event " + std::to_string(i) + " is not increasing");
        }
      }
    }
  }

  // Indicator table, then all pairwise covariances in one pass each.
  std::vector<std::vector<std::uint8_t>> hit(events.size(), std::vector<std::uint8_t>(total, 0));
  std::vector<double> marg(events.size(), 0.0);
  for (std::uint64_t m = 0; m < total; ++m) {
    for (std::size_t e = 0; e < ne; ++e) w[e] = static_cast<std::uint8_t>((m >> e) & 1U);
    for (std::size_t i = 0; i < events.size(); ++i) {
      hit[i][m] = events[i](w) ? 1 : 0;
      if (hit[i][m]) marg[i] += dist.prob[m];
    }
  }
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i; j < events.size(); ++j) {
      double joint = 0.0;
      for (std::uint64_t m = 0; m < total; ++m) {
        if (hit[i][m] && hit[j][m]) joint += dist.prob[m];
      }
      worst = std::min(worst, joint - marg[i] * marg[j]);
    }
  }
  return worst;
}

double duality_ratio(double x, double q) {
  require(q > 0.0, ErrorKind::invalid_parameter, "q: must be > 0");
  return x / (std::sqrt(q) * (1.0 - x));
}

double dual_p(double p, double q) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::invalid_parameter, "p: must lie in [0, 1]");
  require(q > 0.0, ErrorKind::invalid_parameter, "q: must be > 0");
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const double a = q * (1.0 - p);
  return a / (p + a);
}

double self_dual_point(double q) {
  require(q > 0.0, ErrorKind::invalid_parameter, "q: must be > 0");
  const double s = std::sqrt(q);
  return s / (1.0 + s);
}

DualityReport duality_check(const BoxGeometry& g, double p, double q, std::span<const EdgeEvent> events,
                            unsigned threads) {
  require(g.dimension() == 2, ErrorKind::unsupported_dimension, "duality check needs d = 2");
  require(g.mode() != BoundaryMode::periodic, ErrorKind::invalid_parameter,
          "duality check pairs a wired box with its free dual; periodic boxes are not supported");
  const BoxGeometry primal = g.mode() == BoundaryMode::wired ? g : BoxGeometry::rectangle(g.sides(), BoundaryMode::wired);
  const DualGeometry dual = dual_geometry(primal);

  const ExactDistribution wired = enumerate(primal.graph(), FKParams::make(p, q, Boundary::wired), threads);
  const ExactDistribution free = enumerate(dual.graph(), FKParams::make(dual_p(p, q), q, Boundary::free), threads);

  const std::size_t ne = primal.num_edges();
  DualityReport rep;
  for (const auto& a : events) {
    rep.primal.push_back(event_prob(wired, a));
    // phi*(A*) = sum over dual configurations eta of phi*(eta) 1_A(eta*),
    // where eta*(e) = 1 - eta(s(e)).
    EdgeConfig omega(ne);
    double s = 0.0;
    for (std::uint64_t m = 0; m < free.prob.size(); ++m) {
      for (std::size_t e = 0; e < ne; ++e) omega[e] = static_cast<std::uint8_t>(1U - ((m >> dual.dual_of(static_cast<EdgeId>(e))) & 1U));
      if (a(omega)) s += free.prob[m];
    }
    rep.dual.push_back(s);
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(rep.primal.back() - s));
  }
  return rep;
}

ClusterLaw exact_cluster_law(const ExactDistribution& dist, const BoxGeometry& g, VertexId x, ProxyRule rule) {
  require(dist.num_edges() == g.num_edges() && dist.graph.num_vertices == g.num_vertices(),
          ErrorKind::invalid_parameter, "distribution was not enumerated on this geometry");
  require(x < g.num_vertices(), ErrorKind::invalid_parameter, "vertex out of range");
  ClusterLaw law;
  law.size.assign(g.num_vertices() + 1, 0.0);
  law.finite.assign(g.num_vertices() + 1, 0.0);
  const std::size_t ne = g.num_edges();
  EdgeConfig w(ne);
  for (std::uint64_t m = 0; m < dist.prob.size(); ++m) {
    const double pm = dist.prob[m];
    if (pm == 0.0) continue;
    for (std::size_t e = 0; e < ne; ++e) w[e] = static_cast<std::uint8_t>((m >> e) & 1U);
    const ClusterDecomposition dec = components(g, w, rule);
    const std::uint32_t k = dec.cluster_size(x);
    law.size[k] += pm;
    if (dec.vertex_in_proxy(x)) {
      law.theta += pm;
    } else {
      law.finite[k] += pm;
    }
  }
  for (std::size_t k = 0; k < law.finite.size(); ++k) law.chi_f += static_cast<double>(k) * law.finite[k];
  return law;
}

}  // namespace rcm
