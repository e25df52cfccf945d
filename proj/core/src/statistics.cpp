#include "rcm/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "rcm/errors.hpp"

namespace rcm {

Moments moments(std::span<const double> x) {
  const std::size_t n = x.size();
  require(n >= 4, ErrorKind::insufficient_data, "moments: need at least 4 samples");
  Moments m;
  m.n = n;
  const double dn = static_cast<double>(n);
  double s = 0.0;
  for (double v : x) s += v;
  m.mean = s / dn;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  m.variance = m2 * dn / (dn - 1.0);
  m.se_mean = std::sqrt(m.variance / dn);
  m.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / dn);
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  m.se_skewness = std::sqrt(6.0 * dn * (dn - 1.0) / ((dn - 2.0) * (dn + 1.0) * (dn + 3.0)));
  m.se_kurtosis = std::sqrt(24.0 * dn * (dn - 1.0) * (dn - 1.0) / ((dn - 3.0) * (dn - 2.0) * (dn + 3.0) * (dn + 5.0)));
  return m;
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double kolmogorov_survival(double x) noexcept {
  if (x <= 0.18) return 1.0;
  if (x < 1.0) {
    // Small-x form of the same series, accurate where the alternating sum is not.
    const double pi2 = M_PI * M_PI;
    const double t = -pi2 / (8.0 * x * x);
    double s = 0.0;
    for (int k = 1; k <= 9; k += 2) s += std::exp(t * k * k);
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double lilliefors_p(double d, std::size_t n_samples) {
  double n = static_cast<double>(n_samples);
  if (n > 100.0) {
    d *= std::pow(n / 100.0, 0.49);
    n = 100.0;
  }
  const double p = std::exp(-7.01256 * d * d * (n + 2.78019) + 2.99587 * d * std::sqrt(n + 2.78019) - 0.122119 +
                            0.974598 / std::sqrt(n) + 1.67997 / n);
  return p <= 0.1 ? p : -1.0;
}

double stephens_p(double d, std::size_t n_samples) {
  const double rn = std::sqrt(static_cast<double>(n_samples));
  const double ds = d * (rn - 0.01 + 0.85 / rn);
  const double k = 1.468 + 0.404 * (ds - 0.775);
  return kolmogorov_survival(ds * k);
}

}  // namespace

NormalityResult normality_test(std::span<const double> x) {
  const std::size_t n = x.size();
  require(n >= 100, ErrorKind::insufficient_data, "normality test: need at least 100 samples");
  const Moments m = moments(x);
  require(m.variance > 0.0, ErrorKind::degenerate_sample, "normality test: constant sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double sd = std::sqrt(m.variance);
  const double dn = static_cast<double>(n);

  NormalityResult r;
  r.n = n;
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && s[j] == s[i]) ++j;
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / (2.0 * dn);
    const double phi = normal_cdf((s[i] - m.mean) / sd);
    d = std::max(d, std::abs(mid - phi) + 0.5 / dn);
    ++r.distinct;
    i = j;
  }
  r.ks = d;
  const double dw = lilliefors_p(d, n);
  r.p_value = std::clamp(dw >= 0.0 ? dw : stephens_p(d, n), 0.0, 1.0);
  r.skew_z = m.skewness / m.se_skewness;
  r.kurt_z = m.excess_kurtosis / m.se_kurtosis;
  return r;
}

bool normality_accepted(std::span<const NormalityResult> reps, double alpha) {
  std::size_t rejected = 0;
  for (const auto& r : reps) {
    if (r.p_value < alpha) ++rejected;
  }
  return rejected < 2;
}

TwoSampleResult two_sample_ks(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::insufficient_data, "two-sample KS: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  TwoSampleResult r;
  r.ks = d;
  const double en = std::sqrt(nx * ny / (nx + ny));
  r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  return r;
}

DecayFit decay_fit(std::span<const int> n, std::span<const double> estimate) {
  require(n.size() == estimate.size(), ErrorKind::invalid_parameter, "decay fit: length mismatch");
  std::size_t usable = 0;
  while (usable < n.size() && estimate[usable] > 0.0) ++usable;
  require(usable >= 5, ErrorKind::insufficient_data, "decay fit: fewer than 5 points with nonzero estimates");
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < usable; ++i) {
    sx += n[i];
    sy += std::log(estimate[i]);
  }
  const double k = static_cast<double>(usable);
  const double mx = sx / k;
  const double my = sy / k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < usable; ++i) {
    const double dx = n[i] - mx;
    const double dy = std::log(estimate[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  require(sxx > 0.0, ErrorKind::insufficient_data, "decay fit: need at least two distinct n");
  DecayFit f;
  const double slope = sxy / sxx;
  f.gamma = -slope;
  f.intercept = my - slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  f.n_lo = n[0];
  f.n_hi = n[usable - 1];
  f.points = usable;
  return f;
}

Matrix sample_covariance(const std::vector<std::vector<double>>& rows) {
  require(rows.size() >= 2, ErrorKind::insufficient_data, "covariance: need at least 2 rows");
  const std::size_t k = rows.front().size();
  std::vector<double> mean(k, 0.0);
  for (const auto& r : rows) {
    require(r.size() == k, ErrorKind::invalid_parameter, "covariance: ragged rows");
    for (std::size_t i = 0; i < k; ++i) mean[i] += r[i];
  }
  const double n = static_cast<double>(rows.size());
  for (double& v : mean) v /= n;
  Matrix c(k, std::vector<double>(k, 0.0));
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) c[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]);
    }
  }
  for (auto& row : c) {
    for (double& v : row) v /= n - 1.0;
  }
  return c;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const auto& row : a) {
    for (double v : row) s += v * v;
  }
  return std::sqrt(s);
}

double relative_frobenius(const Matrix& a, const Matrix& b) {
  require(a.size() == b.size(), ErrorKind::invalid_parameter, "frobenius: dimension mismatch");
  Matrix d = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) d[i][j] -= b[i][j];
  }
  const double nb = frobenius_norm(b);
  require(nb > 0.0, ErrorKind::degenerate_sample, "frobenius: reference matrix is zero");
  return frobenius_norm(d) / nb;
}

}  // namespace rcm
