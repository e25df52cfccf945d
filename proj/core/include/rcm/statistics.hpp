#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcm/coloring.hpp"

namespace rcm {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
  double se_skewness = 0.0;
  double se_kurtosis = 0.0;
};

// Needs n >= 4.
Moments moments(std::span<const double> x);

double normal_cdf(double z) noexcept;
// Asymptotic Kolmogorov survival function P(K > x).
double kolmogorov_survival(double x) noexcept;

struct NormalityResult {
  std::size_t n = 0;
  double ks = 0.0;        // distance to the fitted normal
  double p_value = 1.0;
  double skew_z = 0.0;
  double kurt_z = 0.0;
  std::size_t distinct = 0;
};

// Kolmogorov-Smirnov distance to N(mean, sd^2) with both estimated from the
// sample. Tied values are compared at the midpoint of their empirical jump
// (plus 1/(2n)), which reduces to the usual statistic for untied data and
// keeps lattice-valued statistics from being rejected for discreteness
// alone. p-value: Dallal-Wilkinson approximation below 0.1, Stephens'
// modified statistic through the Kolmogorov law above.
// Errors: n < 100 (insufficient-data), constant sample (degenerate-sample).
NormalityResult normality_test(std::span<const double> x);

// Accept unless p < alpha in at least two of the repetitions (three expected).
bool normality_accepted(std::span<const NormalityResult> reps, double alpha = 0.01);

struct TwoSampleResult {
  double ks = 0.0;
  double p_value = 1.0;
};
TwoSampleResult two_sample_ks(std::span<const double> a, std::span<const double> b);

struct DecayFit {
  double gamma = 0.0;  // minus the slope of log(estimate) against n
  double intercept = 0.0;
  double r2 = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  std::size_t points = 0;
  bool accepted(double min_r2 = 0.95) const noexcept { return gamma > 0.0 && r2 >= min_r2; }
};

// Least-squares fit of log(estimate) on n. The range runs from the first
// point up to (not including) the first non-positive estimate; fewer than 5
// usable points raise insufficient-data.
DecayFit decay_fit(std::span<const int> n, std::span<const double> estimate);

// Sample covariance matrix of equal-length vectors (rows are replicates).
Matrix sample_covariance(const std::vector<std::vector<double>>& rows);
double frobenius_norm(const Matrix& a);
// |A - B|_F / |B|_F.
double relative_frobenius(const Matrix& a, const Matrix& b);

}  // namespace rcm
