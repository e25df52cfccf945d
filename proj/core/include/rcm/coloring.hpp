#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rcm/clusters.hpp"
#include "rcm/exact.hpp"
#include "rcm/lattice.hpp"
#include "rcm/rng.hpp"

namespace rcm {

// Colours are 0-based internally; colour 0 is printed as 1.
struct ColorParams {
  int colours = 2;
  std::vector<double> nu;     // law of finite-cluster colours
  int ground = 0;             // colour r of the proxy clusters
  std::vector<double> gamma;  // optional mixing law over ground colours

  static ColorParams uniform(int colours, int ground = 0);
  bool is_mixture() const noexcept { return !gamma.empty(); }
  void validate() const;
};

// One colour per box vertex.
using SpinConfig = std::vector<std::uint8_t>;

// Inverse-CDF draw from a probability vector.
int draw_categorical(std::span<const double> law, Rng& rng);

// Ground colour for one replicate: cp.ground, or a gamma draw for mixtures.
int draw_ground(const ColorParams& cp, Rng& rng);

// Divide-and-colour: one nu-draw per finite cluster, in cluster-id order;
// proxy clusters get colour r. With ground_proxy = false every cluster is
// treated as finite (the free-boundary Potts construction).
SpinConfig color_clusters(const ClusterDecomposition& dec, const ColorParams& cp, int r, Rng& rng,
                          bool ground_proxy = true);
SpinConfig color_clusters(const ClusterDecomposition& dec, const ColorParams& cp, Rng& rng);

// Factor construction: every cluster takes the nu-quantile of the mark of its
// smallest vertex. marks[v] must lie in [0, 1).
SpinConfig color_by_marks(const ClusterDecomposition& dec, const ColorParams& cp, int r, std::span<const double> marks,
                          bool ground_proxy = true);

// Whether every cluster of dec is monochromatic in s.
bool is_monochromatic(const ClusterDecomposition& dec, const SpinConfig& s);

struct EmpiricalVector {
  std::vector<std::uint64_t> counts;
  std::uint64_t volume = 0;
  // Ising magnetization (colour 0 -> +1, colour 1 -> -1); 0 unless colours = 2.
  double magnetization = 0.0;
};

EmpiricalVector empirical_vector(const SpinConfig& s, std::span<const VertexId> sites, int colours);
EmpiricalVector empirical_vector(const BoxGeometry& g, const SpinConfig& s, const Window& w, int colours);

// argmax_k counts[k] - volume (1 - theta) nu[k]; ties go to the smallest k.
int detect_phase(const EmpiricalVector& ev, double theta, std::span<const double> nu);

using Matrix = std::vector<std::vector<double>>;

// C = chi_f (D_nu - nu nu^T) + sigma2 (e_r - nu)(e_r - nu)^T.
Matrix predicted_covariance(const ColorParams& cp, double chi_f, double sigma2, int r);
// Covariance of X + S(e_Z - nu) with Z ~ gamma:
// chi_f (D_nu - nu nu^T) + sigma2 sum_z gamma_z (e_z - nu)(e_z - nu)^T.
Matrix predicted_mixture_covariance(const ColorParams& cp, double chi_f, double sigma2);
double quadratic_form(const Matrix& c, std::span<const double> b);

// Mean m and variance of the real value b(colour) under nu.
struct ColorMoments {
  double mean = 0.0;
  double variance = 0.0;
};
ColorMoments color_moments(std::span<const double> nu, std::span<const double> values);

// chi_f var + sigma2 (z - m)^2.
double annealed_variance(double chi_f, double sigma2, const ColorMoments& nu_moments, double z);

// Single-site heat-bath sweeps for the q-state Potts model with weights
// exp(2 beta #agreeing neighbours). In wired boxes the boundary-adjacent
// vertices are clamped to colour r.
void potts_heatbath(SpinConfig& s, const BoxGeometry& g, double beta, int colours, int r, std::uint64_t sweeps,
                    Rng& rng);

// Exact joint colour law of (x, y) under the FK measure followed by
// divide-and-colour: entry [a][b] = P(s_x = a, s_y = b).
Matrix exact_spin_pair(const ExactDistribution& dist, const BoxGeometry& g, VertexId x, VertexId y,
                       const ColorParams& cp, int r, bool ground_proxy = true);

}  // namespace rcm
