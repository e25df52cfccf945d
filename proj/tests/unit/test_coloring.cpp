#include <gtest/gtest.h>

#include <cmath>

#include "rcm/coloring.hpp"
#include "rcm/errors.hpp"
#include "rcm/sampler.hpp"

using namespace rcm;

namespace {

EdgeConfig random_config(std::size_t n, double p, Rng& rng) {
  EdgeConfig w(n);
  for (auto& x : w) x = rng.bernoulli(p) ? 1 : 0;
  return w;
}

}  // namespace

TEST(Coloring, Validation) {
  EXPECT_NO_THROW(ColorParams::uniform(3).validate());
  ColorParams cp = ColorParams::uniform(3);
  cp.nu = {0.5, 0.6, -0.1};
  EXPECT_THROW(cp.validate(), Error);
  cp = ColorParams::uniform(3, 3);
  EXPECT_THROW(cp.validate(), Error);
  cp = ColorParams::uniform(2);
  cp.gamma = {0.2, 0.2};
  EXPECT_THROW(cp.validate(), Error);
  EXPECT_THROW(ColorParams::uniform(1).validate(), Error);
}

TEST(Coloring, ClustersAreMonochromaticAndProxyIsGround) {
  Rng rng(9);
  const auto g = BoxGeometry::cube(2, 4, BoundaryMode::wired);
  const ColorParams cp = ColorParams::uniform(4, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dec = components(g, random_config(g.num_edges(), rng.uniform(), rng));
    const SpinConfig s = color_clusters(dec, cp, 2, rng);
    EXPECT_TRUE(is_monochromatic(dec, s));
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (dec.vertex_in_proxy(v)) EXPECT_EQ(s[v], 2);
    }
  }
}

TEST(Coloring, NotMonochromaticDetected) {
  const auto g = BoxGeometry::cube(2, 1, BoundaryMode::free);
  const auto dec = components(g, EdgeConfig(g.num_edges(), 1));
  SpinConfig s(g.num_vertices(), 0);
  EXPECT_TRUE(is_monochromatic(dec, s));
  s[4] = 1;
  EXPECT_FALSE(is_monochromatic(dec, s));
}

TEST(Coloring, EmpiricalVector) {
  const auto g = BoxGeometry::cube(2, 1, BoundaryMode::free);
  SpinConfig s{0, 1, 1, 0, 0, 1, 0, 0, 1};
  const auto ev = empirical_vector(g, s, full_window(g), 2);
  EXPECT_EQ(ev.counts, (std::vector<std::uint64_t>{5, 4}));
  EXPECT_EQ(ev.volume, 9u);
  EXPECT_DOUBLE_EQ(ev.magnetization, 1.0 / 9.0);
  Window inner{Coord{0, 0}, Coord{0, 0}};
  const auto centre = empirical_vector(g, s, inner, 2);
  EXPECT_EQ(centre.volume, 1u);
  EXPECT_EQ(centre.counts[0], 1u);
  const auto three = empirical_vector(g, s, full_window(g), 3);
  EXPECT_DOUBLE_EQ(three.magnetization, 0.0);
}

TEST(Coloring, DetectPhase) {
  const std::vector<double> nu(3, 1.0 / 3.0);
  EmpiricalVector a{{5, 3, 1}, 9, 0.0};
  EXPECT_EQ(detect_phase(a, 0.0, nu), 0);
  EmpiricalVector b{{3, 3, 3}, 9, 0.0};
  EXPECT_EQ(detect_phase(b, 0.0, nu), 0);
  EmpiricalVector c{{2, 6, 2}, 10, 0.0};
  EXPECT_EQ(detect_phase(c, 0.4, nu), 1);
  EXPECT_THROW(detect_phase(c, 1.5, nu), Error);
}

TEST(Coloring, PredictedCovarianceUniform) {
  const ColorParams cp = ColorParams::uniform(3);
  const Matrix c = predicted_covariance(cp, 2.0, 0.0, 0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(c[i][j], 2.0 * ((i == j ? 1.0 / 3 : 0.0) - 1.0 / 9), 1e-15);
  }
  double row = 0.0;
  for (int j = 0; j < 3; ++j) row += c[1][j];
  EXPECT_NEAR(row, 0.0, 1e-15);
}

TEST(Coloring, PredictedCovarianceMultinomial) {
  ColorParams cp = ColorParams::uniform(2);
  cp.nu = {0.25, 0.75};
  const Matrix c = predicted_covariance(cp, 1.5, 0.4, 0);
  EXPECT_NEAR(c[0][0], 1.5 * 0.1875 + 0.4 * 0.75 * 0.75, 1e-15);
  EXPECT_NEAR(c[0][1], -1.5 * 0.1875 - 0.4 * 0.75 * 0.75, 1e-15);
  EXPECT_NEAR(c[1][1], c[0][0], 1e-15);
}

TEST(Coloring, MixtureCovarianceAveragesGround) {
  ColorParams cp = ColorParams::uniform(2);
  cp.gamma = {0.5, 0.5};
  const Matrix m = predicted_mixture_covariance(cp, 1.0, 0.3);
  const Matrix a = predicted_covariance(cp, 1.0, 0.3, 0);
  const Matrix b = predicted_covariance(cp, 1.0, 0.3, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(m[i][j], 0.5 * (a[i][j] + b[i][j]), 1e-15);
  }
}

TEST(Coloring, QuadraticFormMatchesAnnealedVariance) {
  Rng rng(4);
  ColorParams cp = ColorParams::uniform(4);
  cp.nu = {0.1, 0.2, 0.3, 0.4};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> b(4);
    for (auto& x : b) x = rng.normal();
    const int r = static_cast<int>(rng.below(4));
    const double chi = rng.uniform() * 3, sig = rng.uniform();
    const double lhs = quadratic_form(predicted_covariance(cp, chi, sig, r), b);
    const double rhs = annealed_variance(chi, sig, color_moments(cp.nu, b), b[static_cast<std::size_t>(r)]);
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST(Coloring, MarksFollowNu) {
  ColorParams cp = ColorParams::uniform(3);
  cp.nu = {0.2, 0.5, 0.3};
  const auto g = BoxGeometry::cube(2, 3, BoundaryMode::free);
  const auto dec = components(g, EdgeConfig(g.num_edges(), 0), ProxyRule::largest);
  Rng rng(17);
  std::vector<double> counts(3, 0.0);
  std::vector<double> marks(g.num_vertices());
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    for (auto& m : marks) m = rng.uniform();
    const SpinConfig s = color_by_marks(dec, cp, 0, marks, false);
    for (auto c : s) counts[c] += 1.0;
  }
  const double total = static_cast<double>(n) * static_cast<double>(g.num_vertices());
  for (int k = 0; k < 3; ++k) {
    const double pk = cp.nu[static_cast<std::size_t>(k)];
    EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / total, pk, 5 * std::sqrt(pk * (1 - pk) / total));
  }
}

TEST(Coloring, MarksAreDeterministic) {
  const auto g = BoxGeometry::cube(2, 2, BoundaryMode::free);
  Rng rng(1);
  const auto dec = components(g, random_config(g.num_edges(), 0.5, rng));
  std::vector<double> marks(g.num_vertices());
  for (auto& m : marks) m = rng.uniform();
  const ColorParams cp = ColorParams::uniform(3);
  EXPECT_EQ(color_by_marks(dec, cp, 1, marks), color_by_marks(dec, cp, 1, marks));
  EXPECT_TRUE(is_monochromatic(dec, color_by_marks(dec, cp, 1, marks)));
}

TEST(Coloring, HeatBathAtInfiniteTemperatureIsUniform) {
  const auto g = BoxGeometry::cube(2, 8, BoundaryMode::free);
  Rng rng(6);
  SpinConfig s(g.num_vertices(), 0);
  std::vector<double> counts(3, 0.0);
  for (int rep = 0; rep < 50; ++rep) {
    potts_heatbath(s, g, 0.0, 3, 0, 2, rng);
    for (auto c : s) counts[c] += 1.0;
  }
  const double total = 50.0 * static_cast<double>(g.num_vertices());
  for (double c : counts) EXPECT_NEAR(c / total, 1.0 / 3.0, 5 * std::sqrt(2.0 / 9.0 / total));
}

TEST(Coloring, HeatBathClampsWiredBoundary) {
  const auto g = BoxGeometry::cube(2, 3, BoundaryMode::wired);
  Rng rng(2);
  SpinConfig s(g.num_vertices(), 0);
  potts_heatbath(s, g, 0.3, 3, 2, 5, rng);
  for (VertexId v : g.boundary_adjacent_vertices()) EXPECT_EQ(s[v], 2);
}

TEST(Coloring, ExactSpinPairDecomposition) {
  const auto g = BoxGeometry::rectangle({2, 3}, BoundaryMode::free);
  const auto dist = enumerate(g, FKParams::make(0.5, 3.0));
  const ColorParams cp = ColorParams::uniform(3);
  const VertexId x = 0, y = 5;
  const double conn = event_prob(dist, connection_event(g.graph(), x, y));
  const Matrix law = exact_spin_pair(dist, g, x, y, cp, 0, false);
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double expect = conn * (a == b ? 1.0 / 3 : 0.0) + (1 - conn) / 9.0;
      EXPECT_NEAR(law[a][b], expect, 1e-13);
      total += law[a][b];
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Coloring, SusceptibilityDecomposition) {
  // sum_y Cov(1{s_x=a}, 1{s_y=a}) = (nu_a - nu_a^2) E|C(x)| with no proxy.
  const auto g = BoxGeometry::rectangle({2, 3}, BoundaryMode::free);
  const auto dist = enumerate(g, FKParams::make(0.6, 2.0));
  ColorParams cp = ColorParams::uniform(2);
  cp.nu = {0.3, 0.7};
  const VertexId x = 2;
  double lhs = 0.0;
  for (VertexId y = 0; y < g.num_vertices(); ++y) {
    const Matrix law = exact_spin_pair(dist, g, x, y, cp, 0, false);
    lhs += law[0][0] - 0.3 * 0.3;
  }
  double mean_size = 0.0;
  for (VertexId y = 0; y < g.num_vertices(); ++y) {
    mean_size += y == x ? 1.0 : event_prob(dist, connection_event(g.graph(), x, y));
  }
  EXPECT_NEAR(lhs, 0.3 * 0.7 * mean_size, 1e-12);
}
