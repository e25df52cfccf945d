#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcm/clusters.hpp"
#include "rcm/coloring.hpp"
#include "rcm/errors.hpp"
#include "rcm/exact.hpp"
#include "rcm/harness.hpp"
#include "rcm/output.hpp"
#include "rcm/run_config.hpp"
#include "rcm/sampler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rcm;

namespace {

constexpr std::size_t kMaxFkgEdges = 20;

struct Options {
  std::string config;
  std::string out;
  unsigned threads = 1;
};

json base_summary(const RunConfig& rc) {
  return {{"schema_version", kOutputSchemaVersion},
          {"tool", "rcmlab"},
          {"version", version_string()},
          {"command", to_string(rc.command)},
          {"config_hash", rc.hash},
          {"seed", rc.plan.seed},
          {"config", json::parse(rc.canonical)}};
}

void emit(const RunConfig& rc, const std::string& name, const std::string& text, std::vector<std::string>& written) {
  write_file(fs::path(rc.output.directory) / name, text);
  written.push_back(name);
}

// Per-radius chains split the kept configurations as the harness does; rows
// are folded in chain order.
std::vector<std::string> cmd_sample(const RunConfig& rc, unsigned threads) {
  const ExperimentPlan& plan = rc.plan;
  const Provenance prov = provenance(rc);
  std::vector<std::string> written;
  CsvTable table(prov, {"replicate", "t", "chain", "theta", "chi_f", "largest_cluster", "num_clusters",
                        "proxy_vertices"});
  json radii = json::array();
  for (int t : plan.radii) {
    const BoxGeometry g = BoxGeometry::cube(plan.dimension, t, plan.mode);
    const Window w = interior_window(g, plan.margin >= 0 ? plan.margin : default_margin(g));
    std::vector<std::size_t> counts(plan.chains, plan.replicates / plan.chains);
    for (std::size_t c = 0; c < plan.replicates % plan.chains; ++c) ++counts[c];
    struct Part {
      std::vector<ClusterReport> reports;
      std::vector<EdgeConfig> configs;
      std::vector<SpinConfig> spins;
    };
    std::vector<Part> parts(plan.chains);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(plan.chains);
    auto work = [&](unsigned c) {
      try {
        Part& part = parts[c];
        if (counts[c] == 0) return;
        Rng crng(stream_seed(plan.seed, Pass::coloring, t, c, 0));
        ChainOptions opt;
        opt.algorithm = plan.algorithm;
        opt.samples = counts[c];
        opt.burnin = plan.burnin.value_or(default_burnin(g, plan.algorithm));
        opt.thin = plan.thin;
        opt.seed = stream_seed(plan.seed, Pass::measurement, t, c, 0);
        run_chain(g, plan.fk, opt, [&](std::uint64_t, const ChainState& st) {
          const ClusterDecomposition dec = components(g, st.edges, plan.proxy);
          part.reports.push_back(cluster_report(g, dec, w));
          if (rc.output.dump_configurations) {
            part.configs.push_back(st.edges);
            if (plan.color) part.spins.push_back(color_clusters(dec, *plan.color, crng));
          }
        });
      } catch (...) {
        errors[c] = std::current_exception();
      }
    };
    const unsigned workers = std::max(1U, std::min(threads, plan.chains));
    for (unsigned k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] {
        for (unsigned c = k; c < plan.chains; c += workers) work(c);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    std::size_t replicate = 0;
    double sum_theta = 0.0, sum_chi = 0.0, sum_largest = 0.0, sum_clusters = 0.0;
    std::vector<EdgeConfig> configs;
    std::vector<SpinConfig> spins;
    for (unsigned c = 0; c < plan.chains; ++c) {
      for (const ClusterReport& r : parts[c].reports) {
        table.row({std::to_string(replicate++), std::to_string(t), std::to_string(c), format_number(r.theta),
                   format_number(r.chi_f), std::to_string(r.largest_cluster), std::to_string(r.num_clusters),
                   std::to_string(r.proxy_vertices)});
        sum_theta += r.theta;
        sum_chi += r.chi_f;
        sum_largest += static_cast<double>(r.largest_cluster);
        sum_clusters += static_cast<double>(r.num_clusters);
      }
      configs.insert(configs.end(), parts[c].configs.begin(), parts[c].configs.end());
      spins.insert(spins.end(), parts[c].spins.begin(), parts[c].spins.end());
    }
    const double n = static_cast<double>(replicate);
    json jr = {{"t", t},
               {"side", 2 * t + 1},
               {"samples", replicate},
               {"window_volume", w.volume()},
               {"mean_theta", sum_theta / n},
               {"mean_chi_f", sum_chi / n},
               {"mean_largest_cluster", sum_largest / n},
               {"mean_num_clusters", sum_clusters / n},
               {"edge_dump", nullptr},
               {"spin_dump", nullptr}};
    if (rc.output.dump_configurations) {
      DumpHeader h;
      h.dimension = plan.dimension;
      h.t = t;
      h.mode = plan.mode;
      h.p = plan.fk.p;
      h.q = plan.fk.q;
      h.algorithm = plan.algorithm;
      h.seed = plan.seed;
      h.length = g.num_edges();
      const std::string edge_name = fmt::format("configs_t{}.rcmedges", t);
      write_edge_dump(fs::path(rc.output.directory) / edge_name, h, configs);
      written.push_back(edge_name);
      jr["edge_dump"] = edge_name;
      if (plan.color) {
        h.length = g.num_vertices();
        const std::string spin_name = fmt::format("spins_t{}.rcmspins", t);
        write_spin_dump(fs::path(rc.output.directory) / spin_name, h, spins);
        written.push_back(spin_name);
        jr["spin_dump"] = spin_name;
      }
    }
    radii.push_back(jr);
  }
  if (rc.output.csv) emit(rc, "clusters.csv", table.text(), written);
  if (rc.output.json) {
    json j = base_summary(rc);
    j["data_file"] = "clusters.csv";
    j["radii"] = radii;
    emit(rc, "summary.json", j.dump(2) + "\n", written);
  }
  return written;
}

std::vector<std::string> cmd_exact(const RunConfig& rc, unsigned threads) {
  const ExperimentPlan& plan = rc.plan;
  const Provenance prov = provenance(rc);
  std::vector<std::string> written;
  const BoxGeometry g = rc.exact.sides.empty() ? BoxGeometry::cube(plan.dimension, plan.radii.front(), plan.mode)
                                               : BoxGeometry::rectangle(rc.exact.sides, plan.mode);
  if (g.num_edges() > kMaxExactEdges) {
    fail(ErrorKind::cap_exceeded, fmt::format("lattice: {} edges exceed the enumeration cap of {}", g.num_edges(),
                                              kMaxExactEdges));
  }
  const ExactDistribution dist = enumerate(g, plan.fk, threads);

  const VertexId centre = static_cast<VertexId>(g.num_vertices() / 2);
  const ClusterLaw law = exact_cluster_law(dist, g, centre, plan.proxy);
  const std::vector<double> marg = edge_marginals(dist);

  std::vector<EdgeEvent> events;
  for (EdgeId e = 0; e < g.num_edges(); ++e) events.push_back(edge_open_event(e));
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    for (VertexId y = x + 1; y < g.num_vertices(); ++y) events.push_back(connection_event(g.graph(), x, y));
  }

  std::optional<double> fkg_min;
  if (rc.exact.fkg) {
    if (g.num_edges() > kMaxFkgEdges) {
      fail(ErrorKind::cap_exceeded,
           fmt::format("exact.fkg: the pairwise check is limited to {} edges, the box has {}", kMaxFkgEdges,
                       g.num_edges()));
    }
    fkg_min = fkg_check(dist, events);
  }

  std::optional<DualityReport> duality;
  if (rc.exact.duality) {
    const BoxGeometry primal = rc.exact.sides.empty()
                                   ? BoxGeometry::cube(plan.dimension, plan.radii.front(), BoundaryMode::wired)
                                   : BoxGeometry::rectangle(rc.exact.sides, BoundaryMode::wired);
    std::vector<EdgeEvent> dual_events;
    for (EdgeId e = 0; e < primal.num_edges(); ++e) dual_events.push_back(edge_open_event(e));
    for (VertexId y = 1; y < primal.num_vertices(); ++y) dual_events.push_back(connection_event(primal.graph(), 0, y));
    duality = duality_check(primal, plan.fk.p, plan.fk.q, dual_events, threads);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (rc.output.csv) {
    CsvTable report(prov, {"vertices", "edges", "p", "q", "log_z", "normalization_error", "fkg_min_covariance",
                           "duality_max_discrepancy", "dual_p", "self_dual_point", "centre", "theta_centre",
                           "chi_f_centre"});
    report.row({std::to_string(g.num_vertices()), std::to_string(g.num_edges()), format_number(plan.fk.p),
                format_number(plan.fk.q), format_number(dist.log_z), format_number(dist.normalization_error()),
                format_number(fkg_min.value_or(nan)), format_number(duality ? duality->max_discrepancy : nan),
                format_number(dual_p(plan.fk.p, plan.fk.q)), format_number(self_dual_point(plan.fk.q)),
                std::to_string(centre), format_number(law.theta), format_number(law.chi_f)});
    emit(rc, "exact_report.csv", report.text(), written);

    CsvTable edges(prov, {"edge", "u", "v", "marginal"});
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Bond b = g.edges()[e];
      edges.row({std::to_string(e), std::to_string(b.u), std::to_string(b.v), format_number(marg[e])});
    }
    emit(rc, "edge_marginals.csv", edges.text(), written);

    CsvTable sizes(prov, {"size", "probability", "finite_probability"});
    for (std::size_t k = 0; k < law.size.size(); ++k) {
      sizes.row({std::to_string(k), format_number(law.size[k]), format_number(law.finite[k])});
    }
    emit(rc, "cluster_law.csv", sizes.text(), written);

    if (rc.exact.oracle_records) {
      CsvTable oracle(prov, {"mask", "probability"});
      for (std::uint64_t m = 0; m < dist.prob.size(); ++m) oracle.row({std::to_string(m), format_number(dist.prob[m])});
      emit(rc, "oracle.csv", oracle.text(), written);
    }
  }
  if (rc.output.json) {
    auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    json j = base_summary(rc);
    j["exact"] = {{"vertices", g.num_vertices()},
                  {"edges", g.num_edges()},
                  {"log_z", num(dist.log_z)},
                  {"normalization_error", num(dist.normalization_error())},
                  {"fkg_min_covariance", fkg_min ? num(*fkg_min) : json(nullptr)},
                  {"duality_max_discrepancy", duality ? num(duality->max_discrepancy) : json(nullptr)},
                  {"dual_p", num(dual_p(plan.fk.p, plan.fk.q))},
                  {"self_dual_point", num(self_dual_point(plan.fk.q))},
                  {"centre", centre},
                  {"theta_centre", num(law.theta)},
                  {"chi_f_centre", num(law.chi_f)},
                  {"edge_marginals", marg},
                  {"cluster_law", law.size}};
    emit(rc, "summary.json", j.dump(2) + "\n", written);
  }
  return written;
}

void print_experiment(const ExperimentSummary& s) {
  if (s.calibration) {
    const Calibration& c = *s.calibration;
    fmt::print("calibration t={} samples={} theta={:.6f}±{:.1e} chi_f={:.4f} sigma2={:.5g} (last shell {:.2g}, window {:.5g})\n",
               c.t, c.samples, c.theta.value, c.theta.std_error, c.chi_f.value, c.sigma2, c.sigma2_last_shell,
               c.window_variance);
  }
  for (const RadiusSummary& r : s.radii) {
    for (const StatisticSummary& st : r.statistics) {
      fmt::print("t={} {}:", r.t, to_string(st.statistic));
      for (const NormalityReport& nr : st.normality) {
        fmt::print(" {}[", nr.column);
        for (std::size_t i = 0; i < nr.repetitions.size(); ++i) {
          fmt::print("{}{:.3g}", i ? " " : "", nr.repetitions[i].p_value);
        }
        fmt::print("]{}", nr.error.empty() ? (nr.accepted ? "ok" : "rejected") : "error");
      }
      if (st.variance) fmt::print(" var={:.5g} pred={:.5g} dev={:.3f}", st.variance->empirical, st.variance->predicted,
                                  st.variance->deviation);
      if (!st.predicted_covariance.empty()) fmt::print(" cov_dev={:.3f}", st.covariance_deviation);
      fmt::print("\n");
    }
    if (r.decay) {
      if (r.decay->fit) {
        fmt::print("t={} decay: gamma={:.4f} r2={:.4f} n=[{},{}]\n", r.t, r.decay->fit->gamma, r.decay->fit->r2,
                   r.decay->fit->n_lo, r.decay->fit->n_hi);
      } else {
        fmt::print("t={} decay: {}\n", r.t, r.decay->fit_error);
      }
    }
  }
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::cap_exceeded: return 3;
    case ErrorKind::invalid_parameter:
    case ErrorKind::unsupported_dimension:
    case ErrorKind::unsupported_regime:
    case ErrorKind::unsupported_algorithm:
    case ErrorKind::invalid_window: return 2;
    default: return 1;
  }
}

int run(Command command, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig rc = load_config(opt.config, command);
  if (!opt.out.empty()) rc.output.directory = opt.out;
  const unsigned threads = std::max(1U, opt.threads);
  std::vector<std::string> written;
  switch (command) {
    case Command::sample: written = cmd_sample(rc, threads); break;
    case Command::exact: written = cmd_exact(rc, threads); break;
    case Command::clt:
    case Command::color:
    case Command::decay: {
      const ExperimentSummary s = run_experiment(rc.plan, threads);
      written = write_experiment(rc, s);
      if (rc.output.verbosity >= 1) print_experiment(s);
      break;
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_run_info(rc.output.directory, rc, wall, threads);
  if (rc.output.verbosity >= 1) {
    fmt::print("{} done in {:.2f} s, config {} -> {}\n", to_string(command), wall, rc.hash, rc.output.directory);
  }
  if (rc.output.verbosity >= 2) {
    for (const auto& f : written) fmt::print("  {}\n", f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rcmlab: Monte Carlo laboratory for the random-cluster model"};
  app.require_subcommand(0, 1);
  bool describe = false;
  app.add_flag("--describe", describe, "Print the JSON schema of the configuration file and exit");
  Options opt;
  std::optional<Command> chosen;
  const std::vector<std::pair<Command, const char*>> commands = {
      {Command::sample, "Run Markov chains and write cluster reports and configuration dumps"},
      {Command::exact, "Exact enumeration with FKG and duality reports"},
      {Command::clt, "Calibration and measurement passes for the selected statistics"},
      {Command::color, "Divide-and-colour runs: empirical vectors and covariance comparison"},
      {Command::decay, "Boundary-connection estimates and the exponential decay fit"},
  };
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(to_string(cmd), help);
    sub->add_option("-c,--config", opt.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", opt.out, "Output directory (overrides output.directory)");
    sub->add_option("-j,--threads", opt.threads, "Worker threads; results do not depend on it")
        ->check(CLI::Range(1U, 1024U));
    sub->add_flag("--describe", describe, "Print the configuration schema and exit");
    sub->final_callback([&chosen, cmd = cmd] { chosen = cmd; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (describe && e.get_exit_code() != 0) {
      std::cout << config_schema();
      return 0;
    }
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (describe) {
    std::cout << config_schema();
    return 0;
  }
  if (!chosen) {
    std::cerr << app.help();
    return 2;
  }
  try {
    return run(*chosen, opt);
  } catch (const Error& e) {
    std::cerr << "rcmlab: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "rcmlab: error: " << e.what() << "\n";
    return 1;
  }
}
