#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcm/clusters.hpp"
#include "rcm/coloring.hpp"
#include "rcm/fk_model.hpp"
#include "rcm/lattice.hpp"
#include "rcm/sampler.hpp"
#include "rcm/statistics.hpp"

namespace rcm {

enum class Statistic {
  infinite_density,
  empirical_vector_fixed,
  empirical_vector_selfnorm,
  mixture,
  magnetization_ising,
  decay,
  conditions_mc,
};

const char* to_string(Statistic s) noexcept;
Statistic parse_statistic(const std::string& name);
bool needs_coloring(Statistic s) noexcept;
// Decay and conditions-mc are estimator sequences rather than per-replicate
// statistics.
bool is_sequence(Statistic s) noexcept;

struct ExperimentPlan {
  int dimension = 2;
  std::vector<int> radii;  // strictly increasing box radii t (side 2t+1)
  BoundaryMode mode = BoundaryMode::wired;
  FKParams fk;
  std::optional<ColorParams> color;
  Algorithm algorithm = Algorithm::swendsen_wang;
  std::size_t replicates = 100;
  std::optional<std::uint64_t> burnin;  // default_burnin() when unset
  std::uint64_t thin = 1;
  std::uint64_t seed = 1;
  std::vector<Statistic> statistics;
  ProxyRule proxy = ProxyRule::automatic;
  unsigned chains = 8;               // independent Markov chains per pass
  int margin = -1;                   // -1: default_margin()
  int cutoff = -1;                   // -1: max(1, t/8) at the calibration radius
  std::size_t calibration_replicates = 0;  // 0: twice the replicates
  unsigned repetitions = 1;          // independent measurement passes
  int min_n = 1;                     // decay fit range start
  int max_n = 20;                    // decay / conditions range end
  std::size_t max_vertices = std::size_t{1} << 22;

  void validate() const;
  int calibration_radius() const { return radii.back(); }
  std::size_t effective_calibration_replicates() const {
    return calibration_replicates == 0 ? 2 * replicates : calibration_replicates;
  }
};

enum class Pass : std::uint64_t { calibration = 1, measurement = 2, coloring = 3 };

// Seed of the chain (or colouring stream) identified by (pass, t, chain,
// repetition). Calibration uses repetition 0.
std::uint64_t stream_seed(std::uint64_t master, Pass pass, int t, unsigned chain, unsigned repetition) noexcept;

struct Calibration {
  int t = 0;
  int margin = 0;
  int cutoff = 0;
  std::size_t samples = 0;
  std::size_t window_volume = 0;
  Estimate theta;
  Estimate chi_f;
  double sigma2 = 0.0;             // truncated two-point series
  double sigma2_last_shell = 0.0;  // contribution of |k|_inf = cutoff
  double window_variance = 0.0;    // Var(|W n I|) / |W|
};

struct VarianceCheck {
  double empirical = 0.0;
  double empirical_se = 0.0;
  double predicted = 0.0;
  double deviation = 0.0;     // |empirical - predicted| / predicted
  double deviation_se = 0.0;  // empirical_se / predicted
  bool inconsistent = false;  // predicted <= 0 with nonzero empirical variance
};

VarianceCheck variance_crosscheck(std::span<const double> samples, double predicted);

struct NormalityReport {
  std::string column;
  std::vector<NormalityResult> repetitions;
  bool accepted = false;
  std::string error;  // set when the test could not run (too few or constant samples)
};

struct StatisticSummary {
  Statistic statistic = Statistic::infinite_density;
  std::vector<std::string> columns;
  std::vector<bool> tested;  // columns given a normality test
  std::size_t primary = 1;   // leading columns forming the statistic
  // values[rep][replicate][column]
  std::vector<std::vector<std::vector<double>>> values;
  std::vector<std::vector<Moments>> moments;  // [rep][primary column]
  std::vector<NormalityReport> normality;     // one per tested column
  // From the first repetition.
  Matrix empirical_covariance;
  Matrix predicted_covariance;
  double covariance_deviation = 0.0;  // relative Frobenius distance
  std::optional<VarianceCheck> variance;
  // 1^T Q = 0 check for vector statistics.
  std::uint64_t sum_violations = 0;
  double max_abs_sum = 0.0;
  // Selfnorm rows where the detected phase equals the ground colour, and how
  // many of them differ from the fixed-r statistic.
  std::uint64_t phase_matches = 0;
  std::uint64_t reduction_violations = 0;
};

struct DecaySummary {
  std::vector<int> n;
  std::vector<Estimate> estimate;
  std::optional<DecayFit> fit;
  std::string fit_error;
};

struct ConditionSummary {
  std::vector<int> n;
  std::vector<double> tail;
  std::vector<double> covariance;
};

struct RadiusSummary {
  int t = 0;
  int side = 0;
  std::size_t window_volume = 0;
  std::vector<StatisticSummary> statistics;
  std::optional<DecaySummary> decay;
  std::optional<ConditionSummary> conditions;
};

struct ExperimentSummary {
  ExperimentPlan plan;
  std::string version;
  std::optional<Calibration> calibration;
  std::vector<RadiusSummary> radii;
};

// Statistic formulas.
double stat_infinite_density(std::uint64_t proxy_in_window, double theta, std::size_t volume);
// centre = (1 - theta) nu + theta e_r.
std::vector<double> stat_empirical_vector(const EmpiricalVector& ev, double theta, std::span<const double> nu, int r);
// sqrt|W| (m - sign(m) theta) with sign(0) = +1.
double stat_ising_magnetization(double m, double theta, std::size_t volume);
// sqrt|W| (m - theta).
double stat_ising_naive(double m, double theta, std::size_t volume);

// Calibration pass alone (theta, chi_f, sigma^2 at the largest radius).
Calibration calibrate(const ExperimentPlan& plan, unsigned threads = 1);

// Calibration then measurement; the result does not depend on `threads`.
ExperimentSummary run_experiment(const ExperimentPlan& plan, unsigned threads = 1);

const char* version_string() noexcept;

}  // namespace rcm
