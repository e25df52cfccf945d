#include <gtest/gtest.h>

#include <cmath>

#include "rcm/errors.hpp"
#include "rcm/exact.hpp"

using namespace rcm;

namespace {

std::vector<EdgeEvent> all_events(const BondGraph& g) {
  std::vector<EdgeEvent> ev;
  for (EdgeId e = 0; e < g.bonds.size(); ++e) ev.push_back(edge_open_event(e));
  for (VertexId x = 0; x < g.num_vertices; ++x) {
    for (VertexId y = x + 1; y < g.num_vertices; ++y) ev.push_back(connection_event(g, x, y));
  }
  return ev;
}

}  // namespace

TEST(Exact, Normalization) {
  for (auto mode : {BoundaryMode::free, BoundaryMode::wired, BoundaryMode::periodic}) {
    const auto g = BoxGeometry::rectangle({3, 3}, mode);
    for (double q : {0.5, 1.0, 2.0, 4.0}) {
      const auto dist = enumerate(g, FKParams::make(0.37, q, boundary_of(mode)));
      EXPECT_LT(dist.normalization_error(), 1e-12);
    }
  }
}

TEST(Exact, ThreadCountDoesNotChangeResult) {
  const auto g = BoxGeometry::rectangle({3, 4}, BoundaryMode::free);
  const auto a = enumerate(g, FKParams::make(0.5, 2.0), 1);
  const auto b = enumerate(g, FKParams::make(0.5, 2.0), 4);
  EXPECT_EQ(a.prob, b.prob);
  EXPECT_EQ(a.log_z, b.log_z);
}

TEST(Exact, BernoulliFactorizes) {
  const auto g = BoxGeometry::rectangle({2, 3}, BoundaryMode::free);
  const double p = 0.3;
  const auto dist = enumerate(g, FKParams::make(p, 1.0));
  for (std::uint64_t mask = 0; mask < dist.prob.size(); ++mask) {
    const int k = __builtin_popcountll(mask);
    const double expect = std::pow(p, k) * std::pow(1 - p, static_cast<double>(g.num_edges()) - k);
    ASSERT_NEAR(dist.prob[mask], expect, 1e-15);
  }
  for (double m : edge_marginals(dist)) EXPECT_NEAR(m, p, 1e-14);
}

TEST(Exact, SelfCovarianceIsVariance) {
  const auto g = BoxGeometry::rectangle({2, 3}, BoundaryMode::free);
  const auto dist = enumerate(g, FKParams::make(0.6, 2.0));
  const auto a = connection_event(g.graph(), 0, 5);
  const double pa = event_prob(dist, a);
  EXPECT_NEAR(cov(dist, a, a), pa * (1 - pa), 1e-14);
}

TEST(Exact, PathConnectionIsGeometric) {
  const auto g = BoxGeometry::rectangle({6, 1}, BoundaryMode::free);
  const double p = 0.45;
  const auto dist = enumerate(g, FKParams::make(p, 1.0));
  double prev = 1.0;
  for (VertexId k = 1; k < 6; ++k) {
    const double pk = event_prob(dist, connection_event(g.graph(), 0, k));
    EXPECT_NEAR(pk, std::pow(p, k), 1e-14);
    EXPECT_LT(pk, prev);
    prev = pk;
  }
}

TEST(Exact, FkgNonNegative) {
  for (auto mode : {BoundaryMode::free, BoundaryMode::wired}) {
    const auto g = BoxGeometry::rectangle({2, 3}, mode);
    for (double q : {1.0, 2.0, 3.5}) {
      const auto dist = enumerate(g, FKParams::make(0.55, q, boundary_of(mode)));
      const auto ev = all_events(g.graph());
      EXPECT_GE(fkg_check(dist, ev), -1e-12);
    }
  }
}

TEST(Exact, FkgRejectsNonIncreasingEvent) {
  const auto g = BoxGeometry::rectangle({2, 2}, BoundaryMode::free);
  const auto dist = enumerate(g, FKParams::make(0.5, 2.0));
  std::vector<EdgeEvent> ev{[](std::span<const std::uint8_t> w) { return w[0] == 0; }};
  try {
    fkg_check(dist, ev);
    FAIL() << "expected contract violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::contract_violation);
  }
}

TEST(Exact, DualPoint) {
  for (double q : {1.0, 2.0, 3.0, 4.5}) {
    for (double p : {0.0, 0.1, 0.5, 0.77, 1.0}) {
      EXPECT_NEAR(dual_p(dual_p(p, q), q), p, 1e-14);
    }
    const double s = self_dual_point(q);
    EXPECT_NEAR(dual_p(s, q), s, 1e-14);
    EXPECT_NEAR(duality_ratio(0.3, q) * duality_ratio(dual_p(0.3, q), q), 1.0, 1e-12);
  }
  EXPECT_NEAR(dual_p(0.6, 1.0), 0.4, 1e-15);
  EXPECT_NEAR(dual_p(0.6, 2.0), 0.8 / (0.6 + 0.8), 1e-15);
  EXPECT_NEAR(dual_p(0.8, 2.0), 0.4 / 1.2, 1e-15);
  EXPECT_NEAR(self_dual_point(4.0), 2.0 / 3.0, 1e-15);
}

TEST(Exact, PlanarDuality) {
  for (auto sides : {std::vector<int>{2, 2}, std::vector<int>{2, 3}}) {
    const auto g = BoxGeometry::rectangle(sides, BoundaryMode::wired);
    std::vector<EdgeEvent> ev;
    for (EdgeId e = 0; e < g.num_edges(); ++e) ev.push_back(edge_open_event(e));
    for (VertexId y = 1; y < g.num_vertices(); ++y) ev.push_back(connection_event(g.graph(), 0, y));
    for (double q : {1.0, 2.0, 3.0}) {
      for (double p : {0.3, 0.6}) {
        const auto rep = duality_check(g, p, q, ev);
        EXPECT_LT(rep.max_discrepancy, 1e-12) << "q=" << q << " p=" << p;
        EXPECT_EQ(rep.primal.size(), ev.size());
      }
    }
  }
}

TEST(Exact, DualityNeedsPlanarBox) {
  const auto g = BoxGeometry::rectangle({2, 2, 2}, BoundaryMode::wired);
  std::vector<EdgeEvent> ev{edge_open_event(0)};
  try {
    duality_check(g, 0.5, 2.0, ev);
    FAIL() << "expected unsupported dimension";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_dimension);
  }
}

TEST(Exact, StochasticOrdering) {
  const auto g = BoxGeometry::rectangle({2, 3}, BoundaryMode::free);
  const auto gw = BoxGeometry::rectangle({2, 3}, BoundaryMode::wired);
  const auto ev = all_events(g.graph());
  const auto base = enumerate(g, FKParams::make(0.5, 2.0));
  const auto more_p = enumerate(g, FKParams::make(0.6, 2.0));
  const auto more_q = enumerate(g, FKParams::make(0.5, 3.0));
  const auto wired = enumerate(gw, FKParams::make(0.5, 2.0, Boundary::wired));
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double a = event_prob(base, ev[i]);
    EXPECT_LE(a, event_prob(more_p, ev[i]) + 1e-14);
    EXPECT_GE(a, event_prob(more_q, ev[i]) - 1e-14);
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    EXPECT_LE(event_prob(base, edge_open_event(e)), event_prob(wired, edge_open_event(e)) + 1e-14);
  }
}

TEST(Exact, ClusterLawConsistency) {
  const auto g = BoxGeometry::rectangle({3, 3}, BoundaryMode::free);
  const auto dist = enumerate(g, FKParams::make(0.4, 2.0));
  const VertexId centre = g.index(Coord{1, 1});
  const auto law = exact_cluster_law(dist, g, centre);
  double total = 0.0;
  for (double x : law.size) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  double finite = 0.0, chi = 0.0;
  for (std::size_t k = 0; k < law.finite.size(); ++k) {
    finite += law.finite[k];
    chi += static_cast<double>(k) * law.finite[k];
  }
  EXPECT_NEAR(finite + law.theta, 1.0, 1e-12);
  EXPECT_NEAR(chi, law.chi_f, 1e-12);
  EXPECT_DOUBLE_EQ(law.size[0], 0.0);
  // The centre is isolated with probability of its four bonds closed.
  double iso = 0.0;
  for (std::uint64_t mask = 0; mask < dist.prob.size(); ++mask) {
    const auto w = config_from_mask(mask, g.num_edges());
    bool open = false;
    for (EdgeId e : g.incident(centre)) open = open || w[e];
    if (!open) iso += dist.prob[mask];
  }
  EXPECT_NEAR(law.size[1], iso, 1e-12);
}

TEST(Exact, CapExceeded) {
  const auto g = BoxGeometry::rectangle({5, 4}, BoundaryMode::free);
  ASSERT_GT(g.num_edges(), kMaxExactEdges);
  try {
    enumerate(g, FKParams::make(0.5, 2.0));
    FAIL() << "expected cap";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cap_exceeded);
  }
}
