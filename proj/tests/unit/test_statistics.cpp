#include <gtest/gtest.h>

#include <cmath>

#include "rcm/errors.hpp"
#include "rcm/rng.hpp"
#include "rcm/statistics.hpp"

using namespace rcm;

TEST(Statistics, Moments) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const Moments m = moments(x);
  EXPECT_EQ(m.n, 5u);
  EXPECT_DOUBLE_EQ(m.mean, 3.0);
  EXPECT_DOUBLE_EQ(m.variance, 2.5);
  EXPECT_NEAR(m.skewness, 0.0, 1e-15);
  EXPECT_THROW(moments(std::vector<double>{1, 2, 3}), Error);
}

TEST(Statistics, NormalCdfAndKolmogorov) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(1.3580986), 0.05, 1e-5);
  EXPECT_NEAR(kolmogorov_survival(0.0), 1.0, 1e-15);
}

TEST(Statistics, NormalSamplesAccepted) {
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    std::vector<double> x(500);
    for (auto& v : x) v = 3.0 + 2.0 * rng.normal();
    if (normality_test(x).p_value >= 0.01) ++accepted;
  }
  EXPECT_GE(accepted, 97);
}

TEST(Statistics, UniformPValues) {
  // Under the null the p-value is roughly uniform: about 10% fall below 0.1.
  int below = 0;
  for (std::uint64_t seed = 1000; seed < 1400; ++seed) {
    Rng rng(seed);
    std::vector<double> x(200);
    for (auto& v : x) v = rng.normal();
    if (normality_test(x).p_value < 0.1) ++below;
  }
  EXPECT_GT(below, 20);
  EXPECT_LT(below, 65);
}

TEST(Statistics, ExponentialRejected) {
  Rng rng(7);
  std::vector<double> x(2000);
  for (auto& v : x) v = -std::log(1.0 - rng.uniform());
  const auto r = normality_test(x);
  EXPECT_LT(r.p_value, 1e-6);
  EXPECT_GT(r.skew_z, 5.0);
}

TEST(Statistics, NormalityErrors) {
  std::vector<double> small(50, 1.0);
  try {
    normality_test(small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
  }
  std::vector<double> constant(200, 1.5);
  try {
    normality_test(constant);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_sample);
  }
}

TEST(Statistics, AcceptanceRule) {
  NormalityResult good, bad;
  good.p_value = 0.5;
  bad.p_value = 0.001;
  EXPECT_TRUE(normality_accepted(std::vector<NormalityResult>{good, good, bad}));
  EXPECT_FALSE(normality_accepted(std::vector<NormalityResult>{bad, good, bad}));
  EXPECT_TRUE(normality_accepted(std::vector<NormalityResult>{bad}));
}

TEST(Statistics, DecayFitExact) {
  std::vector<int> n;
  std::vector<double> y;
  for (int k = 1; k <= 10; ++k) {
    n.push_back(k);
    y.push_back(2.0 * std::exp(-0.5 * k));
  }
  const DecayFit f = decay_fit(n, y);
  EXPECT_NEAR(f.gamma, 0.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(2.0), 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.points, 10u);
  EXPECT_TRUE(f.accepted());
}

TEST(Statistics, DecayFitStopsAtZero) {
  std::vector<int> n{1, 2, 3, 4, 5, 6, 7};
  std::vector<double> y{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.0, 0.01};
  const DecayFit f = decay_fit(n, y);
  EXPECT_EQ(f.points, 5u);
  EXPECT_EQ(f.n_hi, 5);
  EXPECT_NEAR(f.gamma, std::log(2.0), 1e-12);
  std::vector<double> short_y{0.5, 0.25, 0.0, 0.1, 0.1, 0.1, 0.1};
  EXPECT_THROW(decay_fit(n, short_y), Error);
}

TEST(Statistics, TwoSampleKs) {
  Rng rng(3);
  std::vector<double> a(1000), b(1000), c(1000);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = rng.normal();
  for (auto& v : c) v = rng.normal() + 0.5;
  EXPECT_GT(two_sample_ks(a, b).p_value, 0.001);
  EXPECT_LT(two_sample_ks(a, c).p_value, 1e-10);
  EXPECT_DOUBLE_EQ(two_sample_ks(a, a).ks, 0.0);
}

TEST(Statistics, Covariance) {
  const std::vector<std::vector<double>> rows{{1, 2}, {2, 4}, {3, 6}};
  const Matrix c = sample_covariance(rows);
  EXPECT_DOUBLE_EQ(c[0][0], 1.0);
  EXPECT_DOUBLE_EQ(c[0][1], 2.0);
  EXPECT_DOUBLE_EQ(c[1][1], 4.0);
  EXPECT_DOUBLE_EQ(frobenius_norm(Matrix{{3, 0}, {0, 4}}), 5.0);
  EXPECT_DOUBLE_EQ(relative_frobenius(Matrix{{1, 0}, {0, 1}}, Matrix{{1, 0}, {0, 1}}), 0.0);
}
