#include <gtest/gtest.h>

#include <cmath>
#include <queue>

#include "rcm/clusters.hpp"
#include "rcm/errors.hpp"
#include "rcm/exact.hpp"
#include "rcm/rng.hpp"
#include "rcm/sampler.hpp"

using namespace rcm;

namespace {

EdgeConfig random_config(std::size_t n, double p, Rng& rng) {
  EdgeConfig w(n);
  for (auto& x : w) x = rng.bernoulli(p) ? 1 : 0;
  return w;
}

// Breadth-first labelling over box vertices only (ghost ignored).
std::vector<int> bfs_labels(const BoxGeometry& g, const EdgeConfig& w) {
  std::vector<int> label(g.num_vertices(), -1);
  int next = 0;
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (label[s] >= 0) continue;
    std::queue<VertexId> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const VertexId v = q.front();
      q.pop();
      const auto nb = g.neighbours(v);
      const auto inc = g.incident(v);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (w[inc[i]] && label[nb[i]] < 0) {
          label[nb[i]] = next;
          q.push(nb[i]);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<ClusterDecomposition> sample_decs(const BoxGeometry& g, const FKParams& prm, std::uint64_t n,
                                              std::uint64_t seed) {
  std::vector<ClusterDecomposition> out;
  ChainOptions opt{Algorithm::swendsen_wang, n, 50, 1, seed};
  run_chain(g, prm, opt, [&](std::uint64_t, const ChainState& st) { out.push_back(components(g, st.edges)); });
  return out;
}

}  // namespace

TEST(Clusters, AllClosedAndAllOpen) {
  const auto g = BoxGeometry::cube(2, 2, BoundaryMode::free);
  const auto closed = components(g, EdgeConfig(g.num_edges(), 0));
  EXPECT_EQ(closed.num_clusters(), g.num_vertices());
  const auto open = components(g, EdgeConfig(g.num_edges(), 1));
  EXPECT_EQ(open.num_clusters(), 1u);
  EXPECT_EQ(infinite_proxy(open).size(), g.num_vertices());
}

TEST(Clusters, SingleOpenEdge) {
  const auto g = BoxGeometry::cube(2, 1, BoundaryMode::free);
  EdgeConfig w(g.num_edges(), 0);
  const VertexId a = g.index(Coord{0, 0});
  const VertexId b = g.index(Coord{1, 0});
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Bond bd = g.edges()[e];
    if ((bd.u == a && bd.v == b) || (bd.u == b && bd.v == a)) w[e] = 1;
  }
  const auto dec = components(g, w);
  EXPECT_EQ(dec.num_clusters(), 8u);
  EXPECT_EQ(dec.cluster_size(a), 2u);
  EXPECT_EQ(dec.cluster_of[a], dec.cluster_of[b]);
}

TEST(Clusters, AllClosedProxyIsEmptyInWiredBoxInterior) {
  const auto g = BoxGeometry::cube(2, 2, BoundaryMode::wired);
  const auto dec = components(g, EdgeConfig(g.num_edges(), 0));
  // Only the ghost bonds are open: every boundary-adjacent vertex is wired.
  EXPECT_EQ(infinite_proxy(dec).size(), 16u);
  const auto f = components(BoxGeometry::cube(2, 2, BoundaryMode::periodic),
                            EdgeConfig(BoxGeometry::cube(2, 2, BoundaryMode::periodic).num_edges(), 0),
                            ProxyRule::boundary);
  EXPECT_TRUE(infinite_proxy(f).empty());
}

TEST(Clusters, RepresentativeIsSmallestVertex) {
  Rng rng(3);
  const auto g = BoxGeometry::cube(2, 3, BoundaryMode::free);
  for (int trial = 0; trial < 50; ++trial) {
    const auto dec = components(g, random_config(g.num_edges(), 0.5, rng));
    for (VertexId v = 0; v < g.num_vertices(); ++v) EXPECT_LE(dec.representative[dec.cluster_of[v]], v);
  }
}

TEST(Clusters, AgreesWithBreadthFirstSearch) {
  Rng rng(11);
  for (auto mode : {BoundaryMode::free, BoundaryMode::periodic}) {
    const auto g = BoxGeometry::cube(2, 3, mode);
    for (int trial = 0; trial < 1000; ++trial) {
      const EdgeConfig w = random_config(g.num_edges(), rng.uniform(), rng);
      const auto dec = components(g, w);
      const auto ref = bfs_labels(g, w);
      for (VertexId x = 0; x < g.num_vertices(); ++x) {
        for (VertexId y = x + 1; y < g.num_vertices(); ++y) {
          ASSERT_EQ(dec.cluster_of[x] == dec.cluster_of[y], ref[x] == ref[y]);
        }
      }
    }
  }
}

TEST(Clusters, SizesSumToVolumeAndHistogramBalances) {
  Rng rng(5);
  for (auto mode : {BoundaryMode::free, BoundaryMode::wired, BoundaryMode::periodic}) {
    const auto g = BoxGeometry::cube(2, 4, mode);
    for (int trial = 0; trial < 200; ++trial) {
      const auto dec = components(g, random_config(g.num_edges(), rng.uniform(), rng));
      std::uint64_t total = 0;
      for (auto s : dec.size) total += s;
      EXPECT_EQ(total, g.num_vertices());
      const SizeHistogram h = size_histogram(dec);
      std::uint64_t mass = h.proxy_vertices;
      for (std::size_t k = 0; k < h.count.size(); ++k) mass += k * h.count[k];
      EXPECT_EQ(mass, g.num_vertices());
    }
  }
}

TEST(Clusters, SumOfSquaresIdentity) {
  Rng rng(21);
  for (auto mode : {BoundaryMode::free, BoundaryMode::wired, BoundaryMode::periodic}) {
    for (int t : {1, 2, 3}) {
      const auto g = BoxGeometry::rectangle({2 * t + 2, 2 * t + 1}, mode == BoundaryMode::periodic ? BoundaryMode::free : mode);
      const Window full = full_window(g);
      for (int trial = 0; trial < 1000; ++trial) {
        const auto dec = components(g, random_config(g.num_edges(), rng.uniform(), rng));
        Window w = full;
        for (std::size_t i = 0; i < w.lo.size(); ++i) {
          const int side = w.hi[i] - w.lo[i] + 1;
          w.lo[i] += static_cast<int>(rng.below(static_cast<std::uint64_t>(side)));
          w.hi[i] = w.lo[i] + static_cast<int>(rng.below(static_cast<std::uint64_t>(full.hi[i] - w.lo[i] + 1)));
        }
        const auto s = sum_sq_identity_check(g, dec, w);
        ASSERT_EQ(s.lhs, s.rhs);
      }
    }
  }
}

TEST(Clusters, IdentityTrivialCases) {
  const auto g = BoxGeometry::cube(2, 2, BoundaryMode::free);
  const auto dec = components(g, EdgeConfig(g.num_edges(), 0));
  const Window w = full_window(g);
  const auto s = sum_sq_identity_check(g, dec, w);
  const std::uint64_t finite = w.volume() - proxy_count(g, dec, w);
  EXPECT_EQ(finite, 9u);
  EXPECT_EQ(s.lhs, finite);
  EXPECT_EQ(s.rhs, finite);
}

TEST(Clusters, ThetaAndChiExtremes) {
  const auto g = BoxGeometry::cube(2, 3, BoundaryMode::wired);
  const Window w = interior_window(g, 1);
  std::vector<ClusterDecomposition> closed{components(g, EdgeConfig(g.num_edges(), 0))};
  std::vector<ClusterDecomposition> open{components(g, EdgeConfig(g.num_edges(), 1))};
  EXPECT_DOUBLE_EQ(chi_f_hat(g, closed, w).value, 1.0);
  EXPECT_DOUBLE_EQ(theta_hat(g, closed, w).value, 0.0);
  EXPECT_DOUBLE_EQ(chi_f_hat(g, open, w).value, 0.0);
  EXPECT_DOUBLE_EQ(theta_hat(g, open, w).value, 1.0);
}

TEST(Clusters, ChiFMatchesOracle) {
  const auto g = BoxGeometry::cube(2, 1, BoundaryMode::free);
  const FKParams prm = FKParams::make(0.5, 1.0);
  const auto dist = enumerate(g, prm);
  double exact = 0.0;
  for (VertexId x = 0; x < g.num_vertices(); ++x) exact += exact_cluster_law(dist, g, x).chi_f;
  exact /= static_cast<double>(g.num_vertices());
  const auto decs = sample_decs(g, prm, 20000, 8);
  const Estimate e = chi_f_hat(g, decs, full_window(g));
  EXPECT_NEAR(e.value, exact, 3.0 * e.std_error + 1e-12);
}

TEST(Clusters, SigmaSeriesExtremes) {
  const auto g = BoxGeometry::cube(2, 4, BoundaryMode::wired);
  const Window w = interior_window(g, 2);
  for (int open : {0, 1}) {
    std::vector<ClusterDecomposition> decs(3, components(g, EdgeConfig(g.num_edges(), static_cast<std::uint8_t>(open))));
    EXPECT_DOUBLE_EQ(sigma_sq_hat(g, decs, w, 2).value, 0.0);
    const int k[2] = {1, 0};
    EXPECT_DOUBLE_EQ(two_point_hat(g, decs, w, k), open ? 1.0 : 0.0);
  }
  std::vector<ClusterDecomposition> decs(1, components(g, EdgeConfig(g.num_edges(), 0)));
  EXPECT_THROW(sigma_sq_hat(g, decs, w, 3), Error);
}

TEST(Clusters, SeriesAgreesWithWindowVariance) {
  const auto g = BoxGeometry::cube(2, 24, BoundaryMode::wired);
  const FKParams prm = FKParams::make(0.7, 1.0, Boundary::wired);
  const auto decs = sample_decs(g, prm, 1500, 31);
  const Window w = interior_window(g, default_margin(g));
  const double series = sigma_sq_hat(g, decs, w, 5).value;
  const double direct = window_variance_density(g, decs, w);
  EXPECT_NEAR(series, direct, 0.2 * direct);
}

TEST(Clusters, ConditionSequences) {
  const auto g = BoxGeometry::cube(2, 6, BoundaryMode::free);
  const Window w = full_window(g);
  std::vector<ClusterDecomposition> closed{components(g, EdgeConfig(g.num_edges(), 0))};
  const auto tail = condition_m_hat(g, closed, w, 8);
  for (std::size_t n = 0; n < tail.size(); ++n) {
    if (n + 1 > 4) EXPECT_DOUBLE_EQ(tail[n], 0.0);
  }
  const auto decs = sample_decs(g, FKParams::make(0.5, 1.0), 400, 4);
  const auto m = condition_m_hat(g, decs, w, 8);
  for (std::size_t n = 4; n < m.size(); n += 4) EXPECT_LE(m[n], m[n - 4] + 1e-12);
}

TEST(Clusters, BoundaryConnectionExtremes) {
  const auto g = BoxGeometry::cube(2, 5, BoundaryMode::free);
  std::vector<ClusterDecomposition> closed{components(g, EdgeConfig(g.num_edges(), 0))};
  std::vector<ClusterDecomposition> open{components(g, EdgeConfig(g.num_edges(), 1))};
  for (int n = 1; n <= 3; ++n) {
    EXPECT_DOUBLE_EQ(boundary_connection_hat(g, closed, n).value, 0.0);
    EXPECT_DOUBLE_EQ(boundary_connection_hat(g, open, n).value, 1.0);
  }
  EXPECT_THROW(boundary_connection_hat(g, closed, 6), Error);
}

TEST(Clusters, ProxyCloseToLargestClusterSupercritical) {
  const auto g = BoxGeometry::cube(2, 32, BoundaryMode::wired);
  const FKParams prm = FKParams::make(0.9, 1.0, Boundary::wired);
  ChainOptions opt{Algorithm::swendsen_wang, 5, 20, 1, 12};
  run_chain(g, prm, opt, [&](std::uint64_t, const ChainState& st) {
    const auto dec = components(g, st.edges);
    const auto largest = components(g, st.edges, ProxyRule::largest);
    const double a = static_cast<double>(infinite_proxy(dec).size()) / static_cast<double>(g.num_vertices());
    const double b = static_cast<double>(infinite_proxy(largest).size()) / static_cast<double>(g.num_vertices());
    EXPECT_NEAR(a, b, 0.05);
  });
}

TEST(Clusters, ReportInvariant) {
  Rng rng(2);
  const auto g = BoxGeometry::cube(2, 4, BoundaryMode::free);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dec = components(g, random_config(g.num_edges(), 0.4, rng));
    const ClusterReport r = cluster_report(g, dec, full_window(g));
    EXPECT_GE(r.theta, 0.0);
    EXPECT_LE(r.theta, 1.0);
    EXPECT_GE(r.chi_f, 1.0 - r.theta - 1e-12);
  }
}
