#include "rcm/coloring.hpp"

#include <cmath>
#include <string>

#include "rcm/errors.hpp"

namespace rcm {

namespace {

void check_law(std::span<const double> law, const char* field) {
  double s = 0.0;
  for (double x : law) {
    if (!(x >= 0.0)) fail(ErrorKind::invalid_parameter, std::string(field) + ": entries must be >= 0");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) fail(ErrorKind::invalid_parameter, std::string(field) + ": entries must sum to 1");
}

int quantile(std::span<const double> law, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < law.size(); ++k) {
    acc += law[k];
    if (u < acc) return static_cast<int>(k);
  }
  // Rounding left u above the last partial sum: fall back to the last atom.
  for (std::size_t k = law.size(); k-- > 0;) {
    if (law[k] > 0.0) return static_cast<int>(k);
  }
  return 0;
}

}  // namespace

ColorParams ColorParams::uniform(int colours, int ground) {
  ColorParams cp;
  cp.colours = colours;
  cp.nu.assign(static_cast<std::size_t>(std::max(colours, 0)), colours > 0 ? 1.0 / colours : 0.0);
  cp.ground = ground;
  return cp;
}

void ColorParams::validate() const {
  require(colours >= 2 && colours <= 255, ErrorKind::invalid_parameter, "colours: must lie in [2, 255]");
  require(nu.size() == static_cast<std::size_t>(colours), ErrorKind::invalid_parameter,
          "nu: length must equal the number of colours");
  check_law(nu, "nu");
  require(ground >= 0 && ground < colours, ErrorKind::invalid_parameter, "ground: must be a valid colour");
  if (!gamma.empty()) {
    require(gamma.size() == static_cast<std::size_t>(colours), ErrorKind::invalid_parameter,
            "gamma: length must equal the number of colours");
    check_law(gamma, "gamma");
  }
}

int draw_categorical(std::span<const double> law, Rng& rng) { return quantile(law, rng.uniform()); }

int draw_ground(const ColorParams& cp, Rng& rng) {
  return cp.is_mixture() ? draw_categorical(cp.gamma, rng) : cp.ground;
}

SpinConfig color_clusters(const ClusterDecomposition& dec, const ColorParams& cp, int r, Rng& rng, bool ground_proxy) {
  std::vector<std::uint8_t> colour(dec.num_clusters());
  for (std::size_t c = 0; c < dec.num_clusters(); ++c) {
    const bool ground = ground_proxy && dec.in_proxy[c];
    colour[c] = static_cast<std::uint8_t>(ground ? r : draw_categorical(cp.nu, rng));
  }
  SpinConfig s(dec.cluster_of.size());
  for (std::size_t v = 0; v < s.size(); ++v) s[v] = colour[dec.cluster_of[v]];
  return s;
}

SpinConfig color_clusters(const ClusterDecomposition& dec, const ColorParams& cp, Rng& rng) {
  const int r = draw_ground(cp, rng);
  return color_clusters(dec, cp, r, rng);
}

SpinConfig color_by_marks(const ClusterDecomposition& dec, const ColorParams& cp, int r, std::span<const double> marks,
                          bool ground_proxy) {
  require(marks.size() >= dec.cluster_of.size(), ErrorKind::invalid_parameter, "marks: one per vertex required");
  SpinConfig s(dec.cluster_of.size());
  for (std::size_t v = 0; v < s.size(); ++v) {
    const std::uint32_t c = dec.cluster_of[v];
    const bool ground = ground_proxy && dec.in_proxy[c];
    s[v] = static_cast<std::uint8_t>(ground ? r : quantile(cp.nu, marks[dec.representative[c]]));
  }
  return s;
}

bool is_monochromatic(const ClusterDecomposition& dec, const SpinConfig& s) {
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (s[v] != s[dec.representative[dec.cluster_of[v]]]) return false;
  }
  return true;
}

EmpiricalVector empirical_vector(const SpinConfig& s, std::span<const VertexId> sites, int colours) {
  EmpiricalVector ev;
  ev.counts.assign(static_cast<std::size_t>(colours), 0);
  for (VertexId v : sites) ++ev.counts.at(s[v]);
  ev.volume = sites.size();
  if (colours == 2 && ev.volume > 0) {
    ev.magnetization = (static_cast<double>(ev.counts[0]) - static_cast<double>(ev.counts[1])) /
                       static_cast<double>(ev.volume);
  }
  return ev;
}

EmpiricalVector empirical_vector(const BoxGeometry& g, const SpinConfig& s, const Window& w, int colours) {
  const auto sites = window_vertices(g, w);
  return empirical_vector(s, sites, colours);
}

int detect_phase(const EmpiricalVector& ev, double theta, std::span<const double> nu) {
  require(theta >= 0.0 && theta <= 1.0, ErrorKind::invalid_parameter, "theta: must lie in [0, 1]");
  require(nu.size() == ev.counts.size(), ErrorKind::invalid_parameter, "nu: length must match the counts");
  int best = 0;
  double best_score = -INFINITY;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    const double score = static_cast<double>(ev.counts[k]) - static_cast<double>(ev.volume) * (1.0 - theta) * nu[k];
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(k);
    }
  }
  return best;
}

Matrix predicted_covariance(const ColorParams& cp, double chi_f, double sigma2, int r) {
  require(chi_f >= 0.0, ErrorKind::invalid_parameter, "chi_f: must be >= 0");
  require(sigma2 >= 0.0, ErrorKind::invalid_parameter, "sigma2: must be >= 0");
  const std::size_t n = cp.nu.size();
  require(r >= 0 && static_cast<std::size_t>(r) < n, ErrorKind::invalid_parameter, "ground: must be a valid colour");
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double di = (static_cast<int>(i) == r ? 1.0 : 0.0) - cp.nu[i];
      const double dj = (static_cast<int>(j) == r ? 1.0 : 0.0) - cp.nu[j];
      c[i][j] = chi_f * ((i == j ? cp.nu[i] : 0.0) - cp.nu[i] * cp.nu[j]) + sigma2 * di * dj;
    }
  }
  return c;
}

Matrix predicted_mixture_covariance(const ColorParams& cp, double chi_f, double sigma2) {
  require(cp.is_mixture(), ErrorKind::invalid_parameter, "gamma: a mixing law is required");
  const std::size_t n = cp.nu.size();
  Matrix c = predicted_covariance(cp, chi_f, 0.0, 0);
  for (std::size_t z = 0; z < n; ++z) {
    if (cp.gamma[z] == 0.0) continue;
    const Matrix part = predicted_covariance(cp, 0.0, sigma2, static_cast<int>(z));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c[i][j] += cp.gamma[z] * part[i][j];
    }
  }
  return c;
}

double quadratic_form(const Matrix& c, std::span<const double> b) {
  require(b.size() == c.size(), ErrorKind::invalid_parameter, "quadratic form: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) s += b[i] * c[i][j] * b[j];
  }
  return s;
}

ColorMoments color_moments(std::span<const double> nu, std::span<const double> values) {
  require(nu.size() == values.size(), ErrorKind::invalid_parameter, "colour values: length must match nu");
  ColorMoments m;
  double second = 0.0;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    m.mean += nu[k] * values[k];
    second += nu[k] * values[k] * values[k];
  }
  m.variance = std::max(0.0, second - m.mean * m.mean);
  return m;
}

double annealed_variance(double chi_f, double sigma2, const ColorMoments& nu_moments, double z) {
  const double d = z - nu_moments.mean;
  return chi_f * nu_moments.variance + sigma2 * d * d;
}

void potts_heatbath(SpinConfig& s, const BoxGeometry& g, double beta, int colours, int r, std::uint64_t sweeps,
                    Rng& rng) {
  require(colours >= 2 && colours <= 255, ErrorKind::invalid_parameter, "colours: must lie in [2, 255]");
  require(beta >= 0.0, ErrorKind::invalid_parameter, "beta: must be >= 0");
  require(r >= 0 && r < colours, ErrorKind::invalid_parameter, "ground: must be a valid colour");
  const std::size_t n = g.num_vertices();
  if (s.size() != n) s.assign(n, static_cast<std::uint8_t>(r));
  const bool clamp = g.wired();
  if (clamp) {
    for (VertexId v : g.boundary_adjacent_vertices()) s[v] = static_cast<std::uint8_t>(r);
  }
  // exp(2 beta k) for k agreeing neighbours.
  std::vector<double> boltz(2 * static_cast<std::size_t>(g.dimension()) + 1);
  for (std::size_t k = 0; k < boltz.size(); ++k) boltz[k] = std::exp(2.0 * beta * static_cast<double>(k));
  std::vector<int> agree(static_cast<std::size_t>(colours));
  std::vector<double> w(static_cast<std::size_t>(colours));
  for (std::uint64_t sweep = 0; sweep < sweeps; ++sweep) {
    for (VertexId v = 0; v < n; ++v) {
      if (clamp && g.is_boundary_adjacent(v)) continue;
      std::fill(agree.begin(), agree.end(), 0);
      for (VertexId y : g.neighbours(v)) ++agree[s[y]];
      double total = 0.0;
      for (int k = 0; k < colours; ++k) {
        w[k] = boltz[agree[k]];
        total += w[k];
      }
      const double u = rng.uniform() * total;
      double acc = 0.0;
      int pick = colours - 1;
      for (int k = 0; k < colours; ++k) {
        acc += w[k];
        if (u < acc) {
          pick = k;
          break;
        }
      }
      s[v] = static_cast<std::uint8_t>(pick);
    }
  }
}

Matrix exact_spin_pair(const ExactDistribution& dist, const BoxGeometry& g, VertexId x, VertexId y,
                       const ColorParams& cp, int r, bool ground_proxy) {
  require(dist.num_edges() == g.num_edges(), ErrorKind::invalid_parameter,
          "distribution was not enumerated on this geometry");
  require(x < g.num_vertices() && y < g.num_vertices(), ErrorKind::invalid_parameter, "vertex out of range");
  const std::size_t n = cp.nu.size();
  Matrix law(n, std::vector<double>(n, 0.0));
  std::vector<double> delta_r(n, 0.0);
  delta_r.at(static_cast<std::size_t>(r)) = 1.0;
  const std::size_t ne = g.num_edges();
  EdgeConfig w(ne);
  for (std::uint64_t m = 0; m < dist.prob.size(); ++m) {
    const double pm = dist.prob[m];
    if (pm == 0.0) continue;
    for (std::size_t e = 0; e < ne; ++e) w[e] = static_cast<std::uint8_t>((m >> e) & 1U);
    const ClusterDecomposition dec = components(g, w);
    const auto& lx = ground_proxy && dec.vertex_in_proxy(x) ? delta_r : cp.nu;
    const auto& ly = ground_proxy && dec.vertex_in_proxy(y) ? delta_r : cp.nu;
    if (dec.cluster_of[x] == dec.cluster_of[y]) {
      for (std::size_t a = 0; a < n; ++a) law[a][a] += pm * lx[a];
    } else {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) law[a][b] += pm * lx[a] * ly[b];
      }
    }
  }
  return law;
}

}  // namespace rcm
