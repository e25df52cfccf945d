#include <gtest/gtest.h>

#include <cmath>

#include "rcm/errors.hpp"
#include "rcm/exact.hpp"
#include "rcm/sampler.hpp"

using namespace rcm;

namespace {

std::vector<double> mc_marginals(const BoxGeometry& g, const FKParams& prm, Algorithm a, std::uint64_t samples,
                                 std::uint64_t seed) {
  ChainOptions opt;
  opt.algorithm = a;
  opt.samples = samples;
  opt.burnin = 200;
  opt.seed = seed;
  std::vector<double> freq(g.num_edges(), 0.0);
  run_chain(g, prm, opt, [&](std::uint64_t, const ChainState& st) {
    for (std::size_t e = 0; e < freq.size(); ++e) freq[e] += st.edges[e];
  });
  for (double& f : freq) f /= static_cast<double>(samples);
  return freq;
}

}  // namespace

TEST(Sampler, DegenerateProbabilities) {
  const auto g = BoxGeometry::cube(2, 2, BoundaryMode::free);
  for (Algorithm a : {Algorithm::sweeny, Algorithm::swendsen_wang}) {
    for (double p : {0.0, 1.0}) {
      const FKParams prm = FKParams::make(p, 2.0);
      ChainState st = initial_state(g, a, 3);
      st.edges.assign(g.num_edges(), p == 0.0 ? 1 : 0);
      if (a == Algorithm::sweeny) sweeny_sweep(st, g, prm);
      else sw_sweep(st, g, prm);
      for (auto w : st.edges) EXPECT_EQ(w, p == 1.0 ? 1 : 0);
    }
  }
}

TEST(Sampler, SameSeedSameStream) {
  const auto g = BoxGeometry::cube(2, 3, BoundaryMode::wired);
  const FKParams prm = FKParams::make(0.6, 2.0, Boundary::wired);
  for (Algorithm a : {Algorithm::sweeny, Algorithm::swendsen_wang}) {
    ChainOptions opt{a, 20, 5, 2, 42};
    EXPECT_EQ(collect_chain(g, prm, opt), collect_chain(g, prm, opt));
    ChainOptions other = opt;
    other.seed = 43;
    EXPECT_NE(collect_chain(g, prm, opt), collect_chain(g, prm, other));
  }
}

TEST(Sampler, AllOpenAtPOne) {
  const auto g = BoxGeometry::cube(2, 3, BoundaryMode::free);
  ChainOptions opt{Algorithm::swendsen_wang, 5, 3, 1, 1};
  for (const auto& w : collect_chain(g, FKParams::make(1.0, 3.0), opt)) {
    for (auto x : w) EXPECT_EQ(x, 1);
  }
}

TEST(Sampler, AlgorithmRegimeChecks) {
  try {
    check_algorithm(Algorithm::swendsen_wang, FKParams::make(0.5, 1.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_algorithm);
  }
  try {
    check_algorithm(Algorithm::sweeny, FKParams::make(0.5, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_regime);
  }
  EXPECT_NO_THROW(check_algorithm(Algorithm::swendsen_wang, FKParams::make(0.5, 1.0)));
}

TEST(Sampler, QOneMarginalsArePSweeny) {
  const auto g = BoxGeometry::cube(2, 1, BoundaryMode::free);
  const auto f = mc_marginals(g, FKParams::make(0.35, 1.0), Algorithm::sweeny, 20000, 9);
  const double se = std::sqrt(0.35 * 0.65 / 20000.0);
  for (double x : f) EXPECT_NEAR(x, 0.35, 4.0 * se);
}

TEST(Sampler, SwendsenWangMatchesOracleQ3) {
  const auto g = BoxGeometry::cube(2, 1, BoundaryMode::free);
  const FKParams prm = FKParams::make(0.4, 3.0);
  const auto exact = edge_marginals(enumerate(g, prm));
  const std::uint64_t n = 20000;
  const auto f = mc_marginals(g, prm, Algorithm::swendsen_wang, n, 17);
  for (std::size_t e = 0; e < f.size(); ++e) {
    const double se = std::sqrt(exact[e] * (1.0 - exact[e]) / static_cast<double>(n));
    EXPECT_NEAR(f[e], exact[e], 4.0 * se) << "edge " << e;
  }
}

TEST(Sampler, AlgorithmsAgreeAtQ2) {
  const auto g = BoxGeometry::cube(2, 1, BoundaryMode::wired);
  const FKParams prm = FKParams::make(0.5, 2.0, Boundary::wired);
  const std::uint64_t n = 20000;
  const auto a = mc_marginals(g, prm, Algorithm::sweeny, n, 5);
  const auto b = mc_marginals(g, prm, Algorithm::swendsen_wang, n, 6);
  for (std::size_t e = 0; e < a.size(); ++e) {
    const double m = 0.5 * (a[e] + b[e]);
    const double se = std::sqrt(2.0 * m * (1.0 - m) / static_cast<double>(n));
    EXPECT_NEAR(a[e], b[e], 4.5 * se);
  }
}

TEST(Sampler, MarginalsIncreaseWithP) {
  const auto g = BoxGeometry::cube(2, 2, BoundaryMode::free);
  double prev = -1.0;
  for (double p : {0.2, 0.4, 0.6, 0.8}) {
    const auto f = mc_marginals(g, FKParams::make(p, 2.0), Algorithm::swendsen_wang, 4000, 77);
    double mean = 0.0;
    for (double x : f) mean += x;
    mean /= static_cast<double>(f.size());
    EXPECT_GT(mean, prev);
    prev = mean;
  }
}

TEST(Sampler, StochasticDomination) {
  // (p, q) = (0.5, 2) is dominated by (p', q') = (0.6, 1) since
  // 0.6 / 0.4 >= 0.5 / (2 * 0.5).
  const auto g = BoxGeometry::cube(2, 3, BoundaryMode::free);
  const std::uint64_t n = 4000;
  auto open_count = [&](const FKParams& prm, std::uint64_t seed) {
    ChainOptions opt{Algorithm::sweeny, n, 100, 1, seed};
    std::vector<double> x;
    run_chain(g, prm, opt, [&](std::uint64_t, const ChainState& st) {
      double s = 0.0;
      for (auto w : st.edges) s += w;
      x.push_back(s);
    });
    double m = 0.0, v = 0.0;
    for (double y : x) m += y;
    m /= static_cast<double>(n);
    for (double y : x) v += (y - m) * (y - m);
    return std::pair{m, std::sqrt(v / static_cast<double>(n - 1) / static_cast<double>(n))};
  };
  const auto [lo, se_lo] = open_count(FKParams::make(0.5, 2.0), 1);
  const auto [hi, se_hi] = open_count(FKParams::make(0.6, 1.0), 2);
  EXPECT_GE(hi, lo - 3.0 * std::hypot(se_lo, se_hi));
}
