#include "rcm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "rcm/errors.hpp"
#include "rcm/rng.hpp"

#ifndef RCM_VERSION_STRING
#define RCM_VERSION_STRING "0.0.0"
#endif

namespace rcm {

const char* version_string() noexcept { return RCM_VERSION_STRING; }

const char* to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::infinite_density: return "infinite-density";
    case Statistic::empirical_vector_fixed: return "empirical-vector-fixed-r";
    case Statistic::empirical_vector_selfnorm: return "empirical-vector-selfnorm";
    case Statistic::mixture: return "mixture";
    case Statistic::magnetization_ising: return "magnetization-ising";
    case Statistic::decay: return "decay";
    case Statistic::conditions_mc: return "conditions-mc";
  }
  return "?";
}

Statistic parse_statistic(const std::string& name) {
  for (Statistic s : {Statistic::infinite_density, Statistic::empirical_vector_fixed,
                      Statistic::empirical_vector_selfnorm, Statistic::mixture, Statistic::magnetization_ising,
                      Statistic::decay, Statistic::conditions_mc}) {
    if (name == to_string(s)) return s;
  }
  fail(ErrorKind::invalid_parameter, "statistics: unknown statistic '" + name + "'");
}

bool needs_coloring(Statistic s) noexcept {
  return s == Statistic::empirical_vector_fixed || s == Statistic::empirical_vector_selfnorm ||
         s == Statistic::mixture || s == Statistic::magnetization_ising;
}

bool is_sequence(Statistic s) noexcept { return s == Statistic::decay || s == Statistic::conditions_mc; }

void ExperimentPlan::validate() const {
  require(dimension >= 2, ErrorKind::invalid_parameter, "dimension: must be >= 2");
  require(!radii.empty(), ErrorKind::invalid_parameter, "radii: at least one box radius is required");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] >= 1, ErrorKind::invalid_parameter, "radii: must be >= 1");
    if (i > 0) require(radii[i] > radii[i - 1], ErrorKind::invalid_parameter, "radii: must be strictly increasing");
  }
  fk.validate();
  require(fk.boundary == boundary_of(mode), ErrorKind::invalid_parameter,
          "boundary: FK boundary condition disagrees with the box mode");
  check_algorithm(algorithm, fk);
  require(replicates >= 2, ErrorKind::invalid_parameter, "replicates: must be >= 2");
  require(thin >= 1, ErrorKind::invalid_parameter, "thin: must be >= 1");
  require(chains >= 1, ErrorKind::invalid_parameter, "chains: must be >= 1");
  require(repetitions >= 1, ErrorKind::invalid_parameter, "repetitions: must be >= 1");
  require(!statistics.empty(), ErrorKind::invalid_parameter, "statistics: at least one statistic is required");
  for (Statistic s : statistics) {
    if (needs_coloring(s)) {
      require(color.has_value(), ErrorKind::invalid_parameter,
              "color: colouring parameters are required by the selected statistic");
    }
    if (s == Statistic::magnetization_ising) {
      require(color->colours == 2, ErrorKind::invalid_parameter, "color.colours: magnetization needs 2 colours");
    }
    if (s == Statistic::decay) {
      require(mode != BoundaryMode::periodic, ErrorKind::invalid_parameter, "decay: needs a free or wired box");
    }
  }
  if (color) color->validate();
  require(min_n >= 1 && max_n >= min_n, ErrorKind::invalid_parameter, "min_n, max_n: need 1 <= min_n <= max_n");
  double side = 2.0 * radii.back() + 1.0;
  const double vertices = std::pow(side, dimension);
  if (vertices > static_cast<double>(max_vertices)) {
    fail(ErrorKind::cap_exceeded, "max_vertices: the largest box has " + std::to_string(static_cast<long long>(vertices)) +
                                      " vertices, above the cap of " + std::to_string(max_vertices));
  }
}

std::uint64_t stream_seed(std::uint64_t master, Pass pass, int t, unsigned chain, unsigned repetition) noexcept {
  Rng r = Rng::stream(master, {static_cast<std::uint64_t>(pass), static_cast<std::uint64_t>(t), chain, repetition});
  return r();
}

VarianceCheck variance_crosscheck(std::span<const double> samples, double predicted) {
  const Moments m = moments(samples);
  VarianceCheck c;
  c.empirical = m.variance;
  c.empirical_se = m.se_variance;
  c.predicted = predicted;
  if (predicted > 0.0) {
    c.deviation = std::abs(m.variance - predicted) / predicted;
    c.deviation_se = m.se_variance / predicted;
  } else {
    c.inconsistent = m.variance > 0.0;
    c.deviation = c.inconsistent ? INFINITY : 0.0;
  }
  return c;
}

double stat_infinite_density(std::uint64_t proxy_in_window, double theta, std::size_t volume) {
  require(volume > 0, ErrorKind::invalid_window, "empty window");
  const double v = static_cast<double>(volume);
  return (static_cast<double>(proxy_in_window) - theta * v) / std::sqrt(v);
}

std::vector<double> stat_empirical_vector(const EmpiricalVector& ev, double theta, std::span<const double> nu, int r) {
  require(nu.size() == ev.counts.size(), ErrorKind::invalid_parameter, "nu: length must match the counts");
  require(ev.volume > 0, ErrorKind::invalid_window, "empty window");
  const double v = static_cast<double>(ev.volume);
  const double root = std::sqrt(v);
  std::vector<double> q(nu.size());
  for (std::size_t k = 0; k < nu.size(); ++k) {
    const double centre = (1.0 - theta) * nu[k] + (static_cast<int>(k) == r ? theta : 0.0);
    q[k] = (static_cast<double>(ev.counts[k]) - v * centre) / root;
  }
  return q;
}

double stat_ising_magnetization(double m, double theta, std::size_t volume) {
  const double sign = m >= 0.0 ? 1.0 : -1.0;
  return std::sqrt(static_cast<double>(volume)) * (m - sign * theta);
}

double stat_ising_naive(double m, double theta, std::size_t volume) {
  return std::sqrt(static_cast<double>(volume)) * (m - theta);
}

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots; the first exception (by index) is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::exception_ptr> errors(count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::size_t> split(std::size_t total, unsigned chains) {
  std::vector<std::size_t> out(chains, total / chains);
  for (std::size_t c = 0; c < total % chains; ++c) ++out[c];
  return out;
}

BoxGeometry make_box(const ExperimentPlan& plan, int t) { return BoxGeometry::cube(plan.dimension, t, plan.mode); }

int margin_for(const ExperimentPlan& plan, const BoxGeometry& g) {
  return plan.margin >= 0 ? plan.margin : default_margin(g);
}

void drive(const BoxGeometry& g, const ExperimentPlan& plan, std::uint64_t seed, std::size_t count,
           const std::function<void(const ClusterDecomposition&)>& fn) {
  if (count == 0) return;
  ChainOptions opt;
  opt.algorithm = plan.algorithm;
  opt.samples = count;
  opt.burnin = plan.burnin.value_or(default_burnin(g, plan.algorithm));
  opt.thin = plan.thin;
  opt.seed = seed;
  run_chain(g, plan.fk, opt, [&](std::uint64_t, const ChainState& st) { fn(components(g, st.edges, plan.proxy)); });
}

std::uint64_t count_proxy(const ClusterDecomposition& dec, std::span<const VertexId> sites) {
  std::uint64_t n = 0;
  for (VertexId v : sites) n += dec.vertex_in_proxy(v) ? 1 : 0;
  return n;
}

double mass(const ClusterDecomposition& dec, std::span<const VertexId> sites) {
  std::uint64_t n = 0;
  for (VertexId v : sites) n += dec.finite_size(v);
  return static_cast<double>(n) / static_cast<double>(sites.size());
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

// Column layout of a per-replicate statistic.
StatisticSummary layout(Statistic s, int colours) {
  StatisticSummary out;
  out.statistic = s;
  auto add = [&](const std::vector<std::string>& names, bool tested) {
    for (const auto& n : names) {
      out.columns.push_back(n);
      out.tested.push_back(tested);
    }
  };
  switch (s) {
    case Statistic::infinite_density:
      add({"Q"}, true);
      out.primary = 1;
      break;
    case Statistic::empirical_vector_fixed:
      add(numbered("Q", colours), true);
      add({"ground"}, false);
      out.primary = static_cast<std::size_t>(colours);
      break;
    case Statistic::empirical_vector_selfnorm:
      add(numbered("S", colours), true);
      add(numbered("F", colours), false);
      add({"phase", "ground"}, false);
      out.primary = static_cast<std::size_t>(colours);
      break;
    case Statistic::mixture:
      add(numbered("M", colours), true);
      add({"phase", "ground"}, false);
      out.primary = static_cast<std::size_t>(colours);
      break;
    case Statistic::magnetization_ising:
      add({"signed", "naive"}, true);
      add({"m", "ground"}, false);
      out.primary = 1;
      break;
    case Statistic::decay:
    case Statistic::conditions_mc:
      break;
  }
  return out;
}

struct Context {
  const ExperimentPlan* plan;
  const Calibration* cal;
  std::span<const VertexId> sites;
};

std::vector<double> make_row(Statistic s, const Context& ctx, const ClusterDecomposition& dec,
                             const EmpiricalVector* ev, int ground) {
  const double theta = ctx.cal->theta.value;
  std::vector<double> row;
  switch (s) {
    case Statistic::infinite_density:
      row.push_back(stat_infinite_density(count_proxy(dec, ctx.sites), theta, ctx.sites.size()));
      break;
    case Statistic::empirical_vector_fixed: {
      row = stat_empirical_vector(*ev, theta, ctx.plan->color->nu, ground);
      row.push_back(ground + 1);
      break;
    }
    case Statistic::empirical_vector_selfnorm:
    case Statistic::mixture: {
      const auto& nu = ctx.plan->color->nu;
      const int phase = detect_phase(*ev, theta, nu);
      row = stat_empirical_vector(*ev, theta, nu, phase);
      if (s == Statistic::empirical_vector_selfnorm) {
        const auto fixed = stat_empirical_vector(*ev, theta, nu, ground);
        row.insert(row.end(), fixed.begin(), fixed.end());
      }
      row.push_back(phase + 1);
      row.push_back(ground + 1);
      break;
    }
    case Statistic::magnetization_ising:
      row.push_back(stat_ising_magnetization(ev->magnetization, theta, ctx.sites.size()));
      row.push_back(stat_ising_naive(ev->magnetization, theta, ctx.sites.size()));
      row.push_back(ev->magnetization);
      row.push_back(ground + 1);
      break;
    case Statistic::decay:
    case Statistic::conditions_mc:
      break;
  }
  return row;
}

void finish_statistic(StatisticSummary& st, const ExperimentPlan& plan, const Calibration* cal) {
  const std::size_t reps = st.values.size();
  const std::size_t n = st.values.front().size();
  std::vector<double> col;
  auto column = [&](std::size_t rep, std::size_t c) {
    col.clear();
    for (const auto& row : st.values[rep]) col.push_back(row[c]);
    return std::span<const double>(col);
  };

  if (n >= 4) {
    st.moments.resize(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      for (std::size_t c = 0; c < st.primary; ++c) st.moments[r].push_back(moments(column(r, c)));
    }
  }

  for (std::size_t c = 0; c < st.columns.size(); ++c) {
    if (!st.tested[c]) continue;
    NormalityReport rep;
    rep.column = st.columns[c];
    try {
      for (std::size_t r = 0; r < reps; ++r) rep.repetitions.push_back(normality_test(column(r, c)));
      rep.accepted = normality_accepted(rep.repetitions);
    } catch (const Error& e) {
      rep.repetitions.clear();
      rep.error = e.what();
    }
    st.normality.push_back(std::move(rep));
  }

  const bool vector_stat = st.statistic == Statistic::empirical_vector_fixed ||
                           st.statistic == Statistic::empirical_vector_selfnorm || st.statistic == Statistic::mixture;
  if (vector_stat) {
    for (const auto& rows : st.values) {
      for (const auto& row : rows) {
        double s = 0.0;
        for (std::size_t c = 0; c < st.primary; ++c) s += row[c];
        st.max_abs_sum = std::max(st.max_abs_sum, std::abs(s));
        if (std::abs(s) > 1e-9) ++st.sum_violations;
      }
    }
  }
  if (st.statistic == Statistic::empirical_vector_selfnorm) {
    const std::size_t q = st.primary;
    for (const auto& rows : st.values) {
      for (const auto& row : rows) {
        if (row[2 * q] != row[2 * q + 1]) continue;
        ++st.phase_matches;
        for (std::size_t c = 0; c < q; ++c) {
          if (row[c] != row[q + c]) {
            ++st.reduction_violations;
            break;
          }
        }
      }
    }
  }

  std::vector<std::vector<double>> primary_rows;
  for (const auto& row : st.values.front()) primary_rows.emplace_back(row.begin(), row.begin() + static_cast<long>(st.primary));
  st.empirical_covariance = sample_covariance(primary_rows);

  if (cal == nullptr || n < 4) return;
  const double chi = cal->chi_f.value;
  const double s2 = std::max(0.0, cal->sigma2);
  switch (st.statistic) {
    case Statistic::infinite_density:
      st.predicted_covariance = {{s2}};
      st.variance = variance_crosscheck(column(0, 0), s2);
      break;
    case Statistic::magnetization_ising:
      st.predicted_covariance = {{chi + s2}};
      st.variance = variance_crosscheck(column(0, 0), chi + s2);
      break;
    case Statistic::empirical_vector_fixed:
    case Statistic::empirical_vector_selfnorm:
    case Statistic::mixture: {
      const ColorParams& cp = *plan.color;
      st.predicted_covariance = cp.is_mixture() ? predicted_mixture_covariance(cp, chi, s2)
                                                : predicted_covariance(cp, chi, s2, cp.ground);
      // Annealed check along b = e_1 - e_2.
      std::vector<double> b(st.primary, 0.0);
      b[0] = 1.0;
      b[1] = -1.0;
      std::vector<double> proj;
      for (const auto& row : st.values.front()) proj.push_back(row[0] - row[1]);
      st.variance = variance_crosscheck(proj, quadratic_form(st.predicted_covariance, b));
      break;
    }
    case Statistic::decay:
    case Statistic::conditions_mc:
      break;
  }
  try {
    st.covariance_deviation = relative_frobenius(st.empirical_covariance, st.predicted_covariance);
  } catch (const Error&) {
    st.covariance_deviation = frobenius_norm(st.empirical_covariance) > 0.0 ? INFINITY : 0.0;
  }
}

}  // namespace

Calibration calibrate(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  Calibration cal;
  cal.t = plan.calibration_radius();
  const BoxGeometry g = make_box(plan, cal.t);
  cal.margin = margin_for(plan, g);
  cal.cutoff = plan.cutoff >= 0 ? plan.cutoff : std::max(1, cal.t / 8);
  const Window w = interior_window(g, cal.margin);
  const std::vector<VertexId> sites = window_vertices(g, w);
  cal.window_volume = sites.size();
  cal.samples = plan.effective_calibration_replicates();
  const auto counts = split(cal.samples, plan.chains);

  struct Part {
    std::optional<TwoPointAccumulator> acc;
    std::vector<double> mass;
    std::vector<double> count;
  };
  std::vector<Part> parts(plan.chains);
  // Checks the cutoff against the window before any sampling.
  TwoPointAccumulator total(g, w, cal.cutoff);
  parallel_for(plan.chains, threads, [&](std::size_t c) {
    Part& part = parts[c];
    part.acc.emplace(g, w, cal.cutoff);
    drive(g, plan, stream_seed(plan.seed, Pass::calibration, cal.t, static_cast<unsigned>(c), 0), counts[c],
          [&](const ClusterDecomposition& dec) {
            part.acc->add(dec);
            part.mass.push_back(mass(dec, sites));
            part.count.push_back(static_cast<double>(count_proxy(dec, sites)));
          });
  });
  std::vector<double> all_mass;
  std::vector<double> all_count;
  for (auto& part : parts) {
    total.merge(*part.acc);
    all_mass.insert(all_mass.end(), part.mass.begin(), part.mass.end());
    all_count.insert(all_count.end(), part.count.begin(), part.count.end());
  }
  std::vector<double> density;
  for (double c : all_count) density.push_back(c / static_cast<double>(cal.window_volume));
  cal.theta = mean_estimate(density);
  cal.chi_f = mean_estimate(all_mass);
  const auto series = total.sigma_sq(cal.cutoff);
  cal.sigma2 = series.value;
  cal.sigma2_last_shell = series.last_shell;
  if (all_count.size() >= 2) {
    const Estimate e = mean_estimate(all_count);
    const double var = e.std_error * e.std_error * static_cast<double>(all_count.size());
    cal.window_variance = var / static_cast<double>(cal.window_volume);
  }
  return cal;
}

ExperimentSummary run_experiment(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  ExperimentSummary out;
  out.plan = plan;
  out.version = version_string();

  std::vector<Statistic> per_replicate;
  bool want_decay = false;
  bool want_conditions = false;
  bool want_color = false;
  for (Statistic s : plan.statistics) {
    if (s == Statistic::decay) want_decay = true;
    else if (s == Statistic::conditions_mc) want_conditions = true;
    else if (std::find(per_replicate.begin(), per_replicate.end(), s) == per_replicate.end()) per_replicate.push_back(s);
    want_color = want_color || needs_coloring(s);
  }
  if (!per_replicate.empty()) out.calibration = calibrate(plan, threads);

  struct Item {
    std::size_t radius;
    unsigned rep;
    unsigned chain;
    std::vector<std::vector<std::vector<double>>> rows;  // [statistic][row]
    std::optional<BoundaryConnectionAccumulator> decay;
    std::optional<ConditionAccumulator> conditions;
  };

  std::vector<BoxGeometry> boxes;
  std::vector<std::vector<VertexId>> sites;
  std::vector<Window> windows;
  for (int t : plan.radii) {
    boxes.push_back(make_box(plan, t));
    windows.push_back(interior_window(boxes.back(), margin_for(plan, boxes.back())));
    sites.push_back(window_vertices(boxes.back(), windows.back()));
  }

  std::vector<Item> items;
  for (std::size_t ri = 0; ri < plan.radii.size(); ++ri) {
    for (unsigned rep = 0; rep < plan.repetitions; ++rep) {
      for (unsigned c = 0; c < plan.chains; ++c) items.push_back(Item{ri, rep, c, {}, {}, {}});
    }
  }
  const auto counts = split(plan.replicates, plan.chains);
  const int colours = plan.color ? plan.color->colours : 0;

  parallel_for(items.size(), threads, [&](std::size_t i) {
    Item& item = items[i];
    const int t = plan.radii[item.radius];
    const BoxGeometry& g = boxes[item.radius];
    item.rows.resize(per_replicate.size());
    if (item.rep == 0 && want_decay) item.decay.emplace(g, plan.max_n);
    if (item.rep == 0 && want_conditions) item.conditions.emplace(g, windows[item.radius], plan.max_n);
    Rng crng = Rng(stream_seed(plan.seed, Pass::coloring, t, item.chain, item.rep));
    const Context ctx{&plan, out.calibration ? &*out.calibration : nullptr, sites[item.radius]};
    drive(g, plan, stream_seed(plan.seed, Pass::measurement, t, item.chain, item.rep), counts[item.chain],
          [&](const ClusterDecomposition& dec) {
            EmpiricalVector ev;
            int ground = 0;
            if (want_color) {
              ground = draw_ground(*plan.color, crng);
              const SpinConfig s = color_clusters(dec, *plan.color, ground, crng);
              ev = empirical_vector(s, ctx.sites, colours);
            }
            for (std::size_t k = 0; k < per_replicate.size(); ++k) {
              item.rows[k].push_back(make_row(per_replicate[k], ctx, dec, want_color ? &ev : nullptr, ground));
            }
            if (item.decay) item.decay->add(dec);
            if (item.conditions) item.conditions->add(dec);
          });
  });

  std::size_t idx = 0;
  for (std::size_t ri = 0; ri < plan.radii.size(); ++ri) {
    RadiusSummary rs;
    rs.t = plan.radii[ri];
    rs.side = 2 * rs.t + 1;
    rs.window_volume = sites[ri].size();
    for (std::size_t k = 0; k < per_replicate.size(); ++k) {
      StatisticSummary st = layout(per_replicate[k], colours);
      st.values.resize(plan.repetitions);
      rs.statistics.push_back(std::move(st));
    }
    std::optional<BoundaryConnectionAccumulator> decay;
    std::optional<ConditionAccumulator> conditions;
    for (unsigned rep = 0; rep < plan.repetitions; ++rep) {
      for (unsigned c = 0; c < plan.chains; ++c, ++idx) {
        Item& item = items[idx];
        for (std::size_t k = 0; k < per_replicate.size(); ++k) {
          auto& dst = rs.statistics[k].values[rep];
          dst.insert(dst.end(), std::make_move_iterator(item.rows[k].begin()),
                     std::make_move_iterator(item.rows[k].end()));
        }
        if (item.decay) {
          if (decay) decay->merge(*item.decay);
          else decay = std::move(item.decay);
        }
        if (item.conditions) {
          if (conditions) conditions->merge(*item.conditions);
          else conditions = std::move(item.conditions);
        }
      }
    }
    for (auto& st : rs.statistics) finish_statistic(st, plan, out.calibration ? &*out.calibration : nullptr);

    if (decay) {
      DecaySummary ds;
      const auto est = decay->estimates();
      for (int n = 1; n <= plan.max_n; ++n) {
        ds.n.push_back(n);
        ds.estimate.push_back(est[static_cast<std::size_t>(n - 1)]);
      }
      std::vector<int> fit_n;
      std::vector<double> fit_y;
      for (int n = plan.min_n; n <= plan.max_n; ++n) {
        fit_n.push_back(n);
        fit_y.push_back(est[static_cast<std::size_t>(n - 1)].value);
      }
      try {
        ds.fit = decay_fit(fit_n, fit_y);
      } catch (const Error& e) {
        ds.fit_error = e.what();
      }
      rs.decay = std::move(ds);
    }
    if (conditions) {
      ConditionSummary cs;
      for (int n = 1; n <= plan.max_n; ++n) cs.n.push_back(n);
      cs.tail = conditions->tail();
      cs.covariance = conditions->covariance();
      rs.conditions = std::move(cs);
    }
    out.radii.push_back(std::move(rs));
  }
  return out;
}

}  // namespace rcm
