#include "rcm/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "rcm/errors.hpp"
#include "rcm/statistics.hpp"

namespace rcm {

using nlohmann::json;
namespace fs = std::filesystem;

Provenance provenance(const RunConfig& rc) {
  return Provenance{rc.hash, rc.plan.seed, version_string(), to_string(rc.command)};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

CsvTable::CsvTable(const Provenance& prov, std::vector<std::string> columns) : columns_(std::move(columns)) {
  text_ = fmt::format("# config_hash={}\n# seed={}\n# version={}\n# command={}\n", prov.config_hash, prov.seed,
                      prov.version, prov.command);
  for (std::size_t i = 0; i < columns_.size(); ++i) text_ += (i ? "," : "") + columns_[i];
  text_ += '\n';
}

void CsvTable::row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_.size(), ErrorKind::contract_violation, "csv: row width differs from the header");
  for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
  text_ += '\n';
}

void CsvTable::row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::invalid_parameter, "output.directory: cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorKind::invalid_parameter, "output.directory: write failed for '" + path.string() + "'");
}

std::string svg_histogram(std::span<const double> x, const std::string& title, const Provenance& prov) {
  require(!x.empty(), ErrorKind::insufficient_data, "histogram: empty sample");
  const std::size_t n = x.size();
  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  double lo = *mn;
  double hi = *mx;
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> count(bins, 0);
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    ++count[std::min(b, bins - 1)];
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  const double sd = std::sqrt(var);

  const double W = 640.0, H = 400.0, L = 50.0, R = 20.0, T = 40.0, B = 40.0;
  const double pw = W - L - R, ph = H - T - B;
  auto density = [&](double v) {
    if (sd <= 0.0) return 0.0;
    const double z = (v - mean) / sd;
    return static_cast<double>(n) * width * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
  };
  double ymax = static_cast<double>(*std::max_element(count.begin(), count.end()));
  ymax = std::max(ymax, density(mean));
  if (ymax <= 0.0) ymax = 1.0;
  auto px = [&](double v) { return L + (v - lo) / (hi - lo) * pw; };
  auto py = [&](double c) { return T + ph - c / ymax * ph; };

  std::string s;
  s += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
                   W, H, W, H);
  s += fmt::format("<!-- config_hash={} seed={} version={} -->\n", prov.config_hash, prov.seed, prov.version);
  s += fmt::format("<title>{}</title>\n", title);
  s += fmt::format("<metadata>config_hash={} seed={} version={} n={} bins={}</metadata>\n", prov.config_hash, prov.seed,
                   prov.version, n, bins);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format("<text x=\"{:.1f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n", L, title);
  for (std::size_t b = 0; b < bins; ++b) {
    const double x0 = px(lo + static_cast<double>(b) * width);
    const double x1 = px(lo + static_cast<double>(b + 1) * width);
    const double y = py(static_cast<double>(count[b]));
    s += fmt::format("<rect class=\"bar\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#9ecae1\" stroke=\"#3182bd\" stroke-width=\"0.5\"/>\n",
                     x0, y, std::max(0.0, x1 - x0), T + ph - y);
  }
  if (sd > 0.0) {
    s += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
    const int steps = 200;
    for (int i = 0; i <= steps; ++i) {
      const double v = lo + (hi - lo) * i / steps;
      s += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(v), py(density(v)));
    }
    s += "\"/>\n";
  }
  s += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n", L, T + ph, L + pw);
  s += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", L, T, T + ph);
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n", L,
                   H - 15, lo);
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n",
                   L + pw, H - 15, hi);
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">mean={:.4g} sd={:.4g} N={}</text>\n",
                   L + pw, T - 4, mean, sd, n);
  s += "</svg>\n";
  return s;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (double v : row) r.push_back(number_or_null(v));
    a.push_back(r);
  }
  return a;
}

json estimate_json(const Estimate& e) {
  return {{"value", number_or_null(e.value)}, {"std_error", number_or_null(e.std_error)}, {"samples", e.samples}};
}

std::string stat_file(const StatisticSummary& st) { return fmt::format("statistic_{}.csv", to_string(st.statistic)); }

std::string hist_file(const StatisticSummary& st, const std::string& column, int t) {
  return fmt::format("hist_{}_{}_t{}.svg", to_string(st.statistic), column, t);
}

std::vector<double> column_values(const StatisticSummary& st, std::size_t rep, std::size_t c) {
  std::vector<double> out;
  for (const auto& row : st.values[rep]) out.push_back(row[c]);
  return out;
}

}  // namespace

std::string summary_json(const RunConfig& rc, const ExperimentSummary& s) {
  json j;
  j["schema_version"] = kOutputSchemaVersion;
  j["tool"] = "rcmlab";
  j["version"] = s.version;
  j["command"] = to_string(rc.command);
  j["config_hash"] = rc.hash;
  j["seed"] = rc.plan.seed;
  j["config"] = json::parse(rc.canonical);
  if (s.calibration) {
    const Calibration& c = *s.calibration;
    j["calibration"] = {{"t", c.t},
                        {"margin", c.margin},
                        {"cutoff", c.cutoff},
                        {"samples", c.samples},
                        {"window_volume", c.window_volume},
                        {"theta", estimate_json(c.theta)},
                        {"chi_f", estimate_json(c.chi_f)},
                        {"sigma2", number_or_null(c.sigma2)},
                        {"sigma2_last_shell", number_or_null(c.sigma2_last_shell)},
                        {"window_variance", number_or_null(c.window_variance)}};
  } else {
    j["calibration"] = nullptr;
  }
  json radii = json::array();
  for (const RadiusSummary& r : s.radii) {
    json jr = {{"t", r.t}, {"side", r.side}, {"window_volume", r.window_volume}};
    json stats = json::array();
    for (const StatisticSummary& st : r.statistics) {
      json js;
      js["name"] = to_string(st.statistic);
      js["columns"] = st.columns;
      js["primary"] = st.primary;
      js["repetitions"] = st.values.size();
      js["replicates"] = st.values.empty() ? 0 : st.values.front().size();
      js["data_file"] = stat_file(st);
      json mom = json::array();
      for (const auto& rep : st.moments) {
        json jm = json::array();
        for (std::size_t c = 0; c < rep.size(); ++c) {
          const Moments& m = rep[c];
          jm.push_back({{"column", st.columns[c]},
                        {"n", m.n},
                        {"mean", number_or_null(m.mean)},
                        {"se_mean", number_or_null(m.se_mean)},
                        {"variance", number_or_null(m.variance)},
                        {"se_variance", number_or_null(m.se_variance)},
                        {"skewness", number_or_null(m.skewness)},
                        {"se_skewness", number_or_null(m.se_skewness)},
                        {"excess_kurtosis", number_or_null(m.excess_kurtosis)},
                        {"se_kurtosis", number_or_null(m.se_kurtosis)}});
        }
        mom.push_back(jm);
      }
      js["moments"] = mom;
      json norm = json::array();
      for (const NormalityReport& nr : st.normality) {
        json reps = json::array();
        for (const NormalityResult& x : nr.repetitions) {
          reps.push_back({{"n", x.n},
                          {"ks", number_or_null(x.ks)},
                          {"p_value", number_or_null(x.p_value)},
                          {"skew_z", number_or_null(x.skew_z)},
                          {"kurt_z", number_or_null(x.kurt_z)},
                          {"distinct", x.distinct}});
        }
        norm.push_back({{"column", nr.column}, {"accepted", nr.accepted}, {"error", nr.error}, {"repetitions", reps}});
      }
      js["normality"] = norm;
      js["empirical_covariance"] = matrix_json(st.empirical_covariance);
      js["predicted_covariance"] = matrix_json(st.predicted_covariance);
      js["covariance_deviation"] = st.predicted_covariance.empty() ? json(nullptr) : number_or_null(st.covariance_deviation);
      if (st.variance) {
        const VarianceCheck& v = *st.variance;
        js["variance"] = {{"empirical", number_or_null(v.empirical)},
                          {"empirical_se", number_or_null(v.empirical_se)},
                          {"predicted", number_or_null(v.predicted)},
                          {"deviation", number_or_null(v.deviation)},
                          {"deviation_se", number_or_null(v.deviation_se)},
                          {"inconsistent", v.inconsistent}};
      } else {
        js["variance"] = nullptr;
      }
      js["invariants"] = {{"sum_violations", st.sum_violations},
                          {"max_abs_sum", number_or_null(st.max_abs_sum)},
                          {"phase_matches", st.phase_matches},
                          {"reduction_violations", st.reduction_violations}};
      stats.push_back(js);
    }
    jr["statistics"] = stats;
    if (r.decay) {
      const DecaySummary& d = *r.decay;
      json est = json::array();
      json se = json::array();
      for (const Estimate& e : d.estimate) {
        est.push_back(number_or_null(e.value));
        se.push_back(number_or_null(e.std_error));
      }
      json fit = nullptr;
      if (d.fit) {
        fit = {{"gamma", number_or_null(d.fit->gamma)},
               {"intercept", number_or_null(d.fit->intercept)},
               {"r2", number_or_null(d.fit->r2)},
               {"n_lo", d.fit->n_lo},
               {"n_hi", d.fit->n_hi},
               {"points", d.fit->points},
               {"accepted", d.fit->accepted()}};
      }
      jr["decay"] = {{"n", d.n}, {"estimate", est}, {"std_error", se}, {"fit", fit}, {"fit_error", d.fit_error}};
    } else {
      jr["decay"] = nullptr;
    }
    if (r.conditions) {
      json tail = json::array();
      json cv = json::array();
      for (double v : r.conditions->tail) tail.push_back(number_or_null(v));
      for (double v : r.conditions->covariance) cv.push_back(number_or_null(v));
      jr["conditions"] = {{"n", r.conditions->n}, {"tail", tail}, {"covariance", cv}};
    } else {
      jr["conditions"] = nullptr;
    }
    radii.push_back(jr);
  }
  j["radii"] = radii;
  return j.dump(2) + "\n";
}

std::vector<std::string> write_experiment(const RunConfig& rc, const ExperimentSummary& s) {
  const fs::path dir = rc.output.directory;
  const Provenance prov = provenance(rc);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_file(dir / name, text);
    written.push_back(name);
  };

  if (rc.output.csv) {
    if (s.calibration) {
      const Calibration& c = *s.calibration;
      CsvTable cal(prov, {"t", "margin", "cutoff", "samples", "window_volume", "theta", "theta_se", "chi_f",
                          "chi_f_se", "sigma2", "sigma2_last_shell", "window_variance"});
      cal.row({std::to_string(c.t), std::to_string(c.margin), std::to_string(c.cutoff), std::to_string(c.samples),
               std::to_string(c.window_volume), format_number(c.theta.value), format_number(c.theta.std_error),
               format_number(c.chi_f.value), format_number(c.chi_f.std_error), format_number(c.sigma2),
               format_number(c.sigma2_last_shell), format_number(c.window_variance)});
      emit("calibration.csv", cal.text());
    }

    // One data file per statistic, rows ordered by (t, repetition, replicate).
    std::map<std::string, CsvTable> data;
    std::vector<std::string> order;
    CsvTable moments_csv(prov, {"t", "statistic", "column", "repetition", "n", "mean", "se_mean", "variance",
                                "se_variance", "skewness", "se_skewness", "excess_kurtosis", "se_kurtosis"});
    CsvTable normality_csv(prov, {"t", "statistic", "column", "repetition", "n", "ks", "p_value", "skew_z", "kurt_z",
                                  "distinct", "accepted"});
    CsvTable comparison_csv(prov, {"t", "statistic", "covariance_deviation", "variance_empirical",
                                   "variance_empirical_se", "variance_predicted", "variance_deviation",
                                   "variance_deviation_se", "variance_inconsistent", "sum_violations", "max_abs_sum",
                                   "phase_matches", "reduction_violations"});
    CsvTable covariance_csv(prov, {"t", "statistic", "kind", "i", "j", "value"});
    CsvTable decay_csv(prov, {"t", "n", "estimate", "std_error"});
    CsvTable fit_csv(prov, {"t", "gamma", "intercept", "r2", "n_lo", "n_hi", "points", "accepted", "error"});
    CsvTable cond_csv(prov, {"t", "n", "tail", "covariance"});
    bool any_stat = false, any_decay = false, any_cond = false;

    for (const RadiusSummary& r : s.radii) {
      const std::string t = std::to_string(r.t);
      for (const StatisticSummary& st : r.statistics) {
        any_stat = true;
        const std::string name = to_string(st.statistic);
        const std::string file = stat_file(st);
        if (!data.count(file)) {
          std::vector<std::string> cols = {"replicate", "t", "repetition"};
          cols.insert(cols.end(), st.columns.begin(), st.columns.end());
          data.emplace(file, CsvTable(prov, cols));
          order.push_back(file);
        }
        CsvTable& table = data.at(file);
        for (std::size_t rep = 0; rep < st.values.size(); ++rep) {
          for (std::size_t i = 0; i < st.values[rep].size(); ++i) {
            std::vector<std::string> cells = {std::to_string(i), t, std::to_string(rep)};
            for (double v : st.values[rep][i]) cells.push_back(format_number(v));
            table.row(cells);
          }
        }
        for (std::size_t rep = 0; rep < st.moments.size(); ++rep) {
          for (std::size_t c = 0; c < st.moments[rep].size(); ++c) {
            const Moments& m = st.moments[rep][c];
            moments_csv.row({t, name, st.columns[c], std::to_string(rep), std::to_string(m.n), format_number(m.mean),
                             format_number(m.se_mean), format_number(m.variance), format_number(m.se_variance),
                             format_number(m.skewness), format_number(m.se_skewness),
                             format_number(m.excess_kurtosis), format_number(m.se_kurtosis)});
          }
        }
        for (const NormalityReport& nr : st.normality) {
          for (std::size_t rep = 0; rep < nr.repetitions.size(); ++rep) {
            const NormalityResult& x = nr.repetitions[rep];
            normality_csv.row({t, name, nr.column, std::to_string(rep), std::to_string(x.n), format_number(x.ks),
                               format_number(x.p_value), format_number(x.skew_z), format_number(x.kurt_z),
                               std::to_string(x.distinct), nr.accepted ? "1" : "0"});
          }
        }
        const VarianceCheck v = st.variance.value_or(VarianceCheck{});
        const bool has_v = st.variance.has_value();
        auto opt = [&](double x) { return has_v ? format_number(x) : std::string("nan"); };
        comparison_csv.row({t, name,
                            st.predicted_covariance.empty() ? "nan" : format_number(st.covariance_deviation),
                            opt(v.empirical), opt(v.empirical_se), opt(v.predicted), opt(v.deviation),
                            opt(v.deviation_se), has_v ? (v.inconsistent ? "1" : "0") : "nan",
                            std::to_string(st.sum_violations), format_number(st.max_abs_sum),
                            std::to_string(st.phase_matches), std::to_string(st.reduction_violations)});
        auto dump_matrix = [&](const char* kind, const Matrix& m) {
          for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t k = 0; k < m[i].size(); ++k) {
              covariance_csv.row({t, name, kind, std::to_string(i + 1), std::to_string(k + 1), format_number(m[i][k])});
            }
          }
        };
        dump_matrix("empirical", st.empirical_covariance);
        dump_matrix("predicted", st.predicted_covariance);
      }
      if (r.decay) {
        any_decay = true;
        for (std::size_t i = 0; i < r.decay->n.size(); ++i) {
          decay_csv.row({t, std::to_string(r.decay->n[i]), format_number(r.decay->estimate[i].value),
                         format_number(r.decay->estimate[i].std_error)});
        }
        if (r.decay->fit) {
          const DecayFit& f = *r.decay->fit;
          fit_csv.row({t, format_number(f.gamma), format_number(f.intercept), format_number(f.r2),
                       std::to_string(f.n_lo), std::to_string(f.n_hi), std::to_string(f.points),
                       f.accepted() ? "1" : "0", ""});
        } else {
          std::string err = r.decay->fit_error;
          std::replace(err.begin(), err.end(), ',', ';');
          fit_csv.row({t, "nan", "nan", "nan", "0", "0", "0", "0", err});
        }
      }
      if (r.conditions) {
        any_cond = true;
        for (std::size_t i = 0; i < r.conditions->n.size(); ++i) {
          cond_csv.row({t, std::to_string(r.conditions->n[i]), format_number(r.conditions->tail[i]),
                        format_number(r.conditions->covariance[i])});
        }
      }
    }
    for (const auto& file : order) emit(file, data.at(file).text());
    if (any_stat) {
      emit("moments.csv", moments_csv.text());
      emit("normality.csv", normality_csv.text());
      emit("comparison.csv", comparison_csv.text());
      emit("covariance.csv", covariance_csv.text());
    }
    if (any_decay) {
      emit("decay.csv", decay_csv.text());
      emit("decay_fit.csv", fit_csv.text());
    }
    if (any_cond) emit("conditions.csv", cond_csv.text());
  }

  if (rc.output.svg) {
    for (const RadiusSummary& r : s.radii) {
      for (const StatisticSummary& st : r.statistics) {
        if (st.values.empty() || st.values.front().empty()) continue;
        for (std::size_t c = 0; c < st.columns.size(); ++c) {
          if (!st.tested[c]) continue;
          const auto x = column_values(st, 0, c);
          const std::string title = fmt::format("{} {} (t = {})", to_string(st.statistic), st.columns[c], r.t);
          emit(hist_file(st, st.columns[c], r.t), svg_histogram(x, title, prov));
        }
      }
    }
  }

  if (rc.output.json) emit("summary.json", summary_json(rc, s));
  return written;
}

void write_run_info(const fs::path& dir, const RunConfig& rc, double wall_seconds, unsigned threads) {
  json j = {{"schema_version", kOutputSchemaVersion},
            {"tool", "rcmlab"},
            {"version", version_string()},
            {"command", to_string(rc.command)},
            {"config_hash", rc.hash},
            {"seed", rc.plan.seed},
            {"threads", threads},
            {"wall_seconds", wall_seconds}};
  write_file(dir / "run_info.json", j.dump(2) + "\n");
}

namespace {

std::string header_line(const char* magic, const DumpHeader& h) {
  return fmt::format("{} d={} t={} mode={} b={} p={} q={} algorithm={} seed={} length={} count={}\n", magic,
                     h.dimension, h.t, to_string(h.mode), static_cast<int>(boundary_of(h.mode)), format_number(h.p),
                     format_number(h.q), to_string(h.algorithm), h.seed, h.length, h.count);
}

DumpHeader parse_header(std::istream& in, const char* magic, const fs::path& path) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::invalid_parameter, "dump: empty file '" + path.string() + "'");
  std::istringstream ss(line);
  std::string tag;
  ss >> tag;
  if (tag != magic) fail(ErrorKind::invalid_parameter, "dump: '" + path.string() + "' is not a " + magic + " file");
  std::map<std::string, std::string> kv;
  for (std::string tok; ss >> tok;) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto get = [&](const char* k) {
    auto it = kv.find(k);
    if (it == kv.end()) fail(ErrorKind::invalid_parameter, std::string("dump: header lacks ") + k);
    return it->second;
  };
  DumpHeader h;
  h.dimension = std::stoi(get("d"));
  h.t = std::stoi(get("t"));
  h.mode = parse_boundary_mode(get("mode"));
  h.p = std::stod(get("p"));
  h.q = std::stod(get("q"));
  h.algorithm = parse_algorithm(get("algorithm"));
  h.seed = std::stoull(get("seed"));
  h.length = std::stoull(get("length"));
  h.count = std::stoull(get("count"));
  return h;
}

constexpr const char* kEdgeMagic = "rcm-edges-v1";
constexpr const char* kSpinMagic = "rcm-spins-v1";

}  // namespace

void write_edge_dump(const fs::path& path, DumpHeader h, std::span<const EdgeConfig> configs) {
  h.count = configs.size();
  if (!configs.empty()) h.length = configs.front().size();
  std::string out = header_line(kEdgeMagic, h);
  const std::size_t bytes = (h.length + 7) / 8;
  for (const EdgeConfig& w : configs) {
    require(w.size() == h.length, ErrorKind::invalid_parameter, "dump: records differ in length");
    std::string rec(bytes, '\0');
    for (std::size_t e = 0; e < w.size(); ++e) {
      if (w[e]) rec[e / 8] = static_cast<char>(static_cast<unsigned char>(rec[e / 8]) | (1U << (e % 8)));
    }
    out += rec;
  }
  write_file(path, out);
}

std::vector<EdgeConfig> read_edge_dump(const fs::path& path, DumpHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_parameter, "dump: cannot open '" + path.string() + "'");
  const DumpHeader h = parse_header(in, kEdgeMagic, path);
  const std::size_t bytes = (h.length + 7) / 8;
  std::vector<EdgeConfig> out;
  std::string rec(bytes, '\0');
  for (std::size_t i = 0; i < h.count; ++i) {
    if (!in.read(rec.data(), static_cast<std::streamsize>(bytes))) fail(ErrorKind::invalid_parameter, "dump: truncated");
    EdgeConfig w(h.length);
    for (std::size_t e = 0; e < h.length; ++e) w[e] = (static_cast<unsigned char>(rec[e / 8]) >> (e % 8)) & 1U;
    out.push_back(std::move(w));
  }
  if (header) *header = h;
  return out;
}

void write_spin_dump(const fs::path& path, DumpHeader h, std::span<const SpinConfig> spins) {
  h.count = spins.size();
  if (!spins.empty()) h.length = spins.front().size();
  std::string out = header_line(kSpinMagic, h);
  for (const SpinConfig& s : spins) {
    require(s.size() == h.length, ErrorKind::invalid_parameter, "dump: records differ in length");
    out.append(reinterpret_cast<const char*>(s.data()), s.size());
  }
  write_file(path, out);
}

std::vector<SpinConfig> read_spin_dump(const fs::path& path, DumpHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_parameter, "dump: cannot open '" + path.string() + "'");
  const DumpHeader h = parse_header(in, kSpinMagic, path);
  std::vector<SpinConfig> out;
  for (std::size_t i = 0; i < h.count; ++i) {
    SpinConfig s(h.length);
    if (!in.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(h.length))) {
      fail(ErrorKind::invalid_parameter, "dump: truncated");
    }
    out.push_back(std::move(s));
  }
  if (header) *header = h;
  return out;
}

}  // namespace rcm
