#include "rcm/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "rcm/errors.hpp"

namespace rcm {

namespace detail {
const char* config_schema_text() noexcept;
}

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::invalid_parameter, path + ": " + what);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Read-only view of one JSON object that rejects keys outside `allowed`.
class Section {
 public:
  Section(const json& doc, std::string path, std::initializer_list<const char*> allowed)
      : path_(std::move(path)) {
    if (doc.is_null()) return;
    if (!doc.is_object()) bad(path_.empty() ? "config" : path_, "expected an object");
    for (const auto& [key, value] : doc.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        bad(join(path_, key), "unknown key");
      }
    }
    obj_ = &doc;
  }

  bool has(const char* key) const { return obj_ != nullptr && obj_->contains(key); }
  const json& raw(const char* key) const {
    static const json null;
    return has(key) ? obj_->at(key) : null;
  }
  std::string path(const char* key) const { return join(path_, key); }

  long long integer(const char* key, long long def, long long lo, long long hi) const {
    if (!has(key)) return def;
    const json& v = obj_->at(key);
    if (!v.is_number_integer()) bad(path(key), "expected an integer");
    long long x = 0;
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) bad(path(key), "out of range");
      x = static_cast<long long>(u);
    } else {
      x = v.get<long long>();
    }
    if (x < lo || x > hi) bad(path(key), fmt::format("must lie in [{}, {}]", lo, hi));
    return x;
  }

  std::uint64_t unsigned64(const char* key, std::uint64_t def) const {
    if (!has(key)) return def;
    const json& v = obj_->at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      bad(path(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  double number(const char* key, double def) const {
    if (!has(key)) return def;
    const json& v = obj_->at(key);
    if (!v.is_number()) bad(path(key), "expected a number");
    return v.get<double>();
  }

  bool boolean(const char* key, bool def) const {
    if (!has(key)) return def;
    const json& v = obj_->at(key);
    if (!v.is_boolean()) bad(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    const json& v = obj_->at(key);
    if (!v.is_string()) bad(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = obj_->at(key);
    if (!v.is_array()) bad(path(key), "expected an array of numbers");
    for (const auto& x : v) {
      if (!x.is_number()) bad(path(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const char* key, std::vector<int> def) const {
    if (!has(key)) return def;
    const json& v = obj_->at(key);
    if (!v.is_array()) bad(path(key), "expected an array of integers");
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) bad(path(key), "expected an array of integers");
      const long long y = x.get<long long>();
      if (y < std::numeric_limits<int>::min() || y > std::numeric_limits<int>::max()) bad(path(key), "out of range");
      out.push_back(static_cast<int>(y));
    }
    return out;
  }

  std::vector<std::string> strings(const char* key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const json& v = obj_->at(key);
    if (!v.is_array()) bad(path(key), "expected an array of strings");
    for (const auto& x : v) {
      if (!x.is_string()) bad(path(key), "expected an array of strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }

 private:
  std::string path_;
  const json* obj_ = nullptr;
};

// Re-raises a library validation error with the dotted path of the section
// the failing field lives in.
template <class F>
void within(const std::string& section, F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind(section + ".", 0) == 0) throw;
    throw Error(e.kind(), section + "." + what);
  }
}

std::vector<Statistic> default_statistics(Command c) {
  switch (c) {
    case Command::color: return {Statistic::empirical_vector_fixed};
    case Command::decay: return {Statistic::decay};
    default: return {Statistic::infinite_density};
  }
}

json canonical_json(const RunConfig& rc) {
  const ExperimentPlan& p = rc.plan;
  json j;
  j["schema_version"] = 1;
  j["command"] = to_string(rc.command);
  j["seed"] = p.seed;
  j["lattice"] = {{"dimension", p.dimension}, {"radii", p.radii}, {"mode", to_string(p.mode)},
                  {"sides", rc.exact.sides}};
  j["model"] = {{"p", p.fk.p}, {"q", p.fk.q}};
  j["sampler"] = {{"algorithm", to_string(p.algorithm)},
                  {"replicates", p.replicates},
                  {"burnin", p.burnin ? static_cast<long long>(*p.burnin) : -1LL},
                  {"thin", p.thin},
                  {"chains", p.chains}};
  if (p.color) {
    json c = {{"colours", p.color->colours}, {"nu", p.color->nu}, {"ground", p.color->ground + 1}};
    if (p.color->is_mixture()) c["gamma"] = p.color->gamma;
    j["coloring"] = c;
  }
  std::vector<std::string> stats;
  for (Statistic s : p.statistics) stats.emplace_back(to_string(s));
  j["experiment"] = {{"statistics", stats},
                     {"repetitions", p.repetitions},
                     {"proxy", to_string(p.proxy)},
                     {"margin", p.margin},
                     {"cutoff", p.cutoff},
                     {"calibration_replicates", p.calibration_replicates},
                     {"decay_range", {p.min_n, p.max_n}},
                     {"max_vertices", p.max_vertices}};
  j["exact"] = {{"fkg", rc.exact.fkg}, {"duality", rc.exact.duality}, {"oracle_records", rc.exact.oracle_records}};
  j["output"] = {{"directory", rc.output.directory},
                 {"csv", rc.output.csv},
                 {"json", rc.output.json},
                 {"svg", rc.output.svg},
                 {"verbosity", rc.output.verbosity},
                 {"dump_configurations", rc.output.dump_configurations}};
  return j;
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::sample: return "sample";
    case Command::exact: return "exact";
    case Command::clt: return "clt";
    case Command::color: return "color";
    case Command::decay: return "decay";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::sample, Command::exact, Command::clt, Command::color, Command::decay}) {
    if (name == to_string(c)) return c;
  }
  bad("command", "unknown command '" + name + "'");
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const std::string& config_schema() {
  static const std::string text = detail::config_schema_text();
  return text;
}

RunConfig parse_config(const std::string& text, Command command) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad("config", std::string("not valid JSON: ") + e.what());
  }
  const Section top(doc, "", {"schema_version", "command", "seed", "lattice", "model", "sampler", "coloring",
                              "experiment", "exact", "output"});
  if (top.has("schema_version") && top.integer("schema_version", 1, 1, 1) != 1) bad("schema_version", "must be 1");
  if (top.has("command")) parse_command(top.string("command", ""));

  RunConfig rc;
  rc.command = command;
  ExperimentPlan& plan = rc.plan;
  plan.seed = top.unsigned64("seed", 1);

  const Section lat(top.raw("lattice"), "lattice", {"dimension", "radii", "mode", "sides"});
  plan.dimension = static_cast<int>(lat.integer("dimension", 2, 2, 16));
  plan.radii = lat.integers("radii", {8});
  if (plan.radii.empty()) bad("lattice.radii", "at least one radius is required");
  for (std::size_t i = 0; i < plan.radii.size(); ++i) {
    if (plan.radii[i] < 0) bad("lattice.radii", "must be >= 0");
    if (i > 0 && plan.radii[i] <= plan.radii[i - 1]) bad("lattice.radii", "must be strictly increasing");
  }
  within("lattice", [&] { plan.mode = parse_boundary_mode(lat.string("mode", "free")); });
  rc.exact.sides = lat.integers("sides", {});
  if (!rc.exact.sides.empty()) {
    if (rc.exact.sides.size() != static_cast<std::size_t>(plan.dimension)) {
      bad("lattice.sides", "length must equal lattice.dimension");
    }
    for (int s : rc.exact.sides) {
      if (s < 1) bad("lattice.sides", "every side must be >= 1");
    }
  }

  const Section mod(top.raw("model"), "model", {"p", "beta", "q"});
  const double q = mod.number("q", 1.0);
  if (!(q > 0.0)) bad("model.q", "must be > 0");
  const Boundary b = boundary_of(plan.mode);
  if (mod.has("beta")) {
    if (mod.has("p")) bad("model.beta", "give either p or beta, not both");
    const double beta = mod.number("beta", 0.0);
    if (!(beta >= 0.0)) bad("model.beta", "must be >= 0");
    plan.fk = FKParams::from_beta(beta, q, b);
  } else {
    const double p = mod.number("p", 0.5);
    if (!(p >= 0.0 && p <= 1.0)) bad("model.p", "must lie in [0, 1]");
    plan.fk = FKParams::make(p, q, b);
  }

  const Section smp(top.raw("sampler"), "sampler", {"algorithm", "replicates", "burnin", "thin", "chains"});
  within("sampler", [&] { plan.algorithm = parse_algorithm(smp.string("algorithm", "swendsen-wang")); });
  plan.replicates = static_cast<std::size_t>(smp.integer("replicates", 100, 2, 1LL << 40));
  const long long burnin = smp.integer("burnin", -1, -1, 1LL << 40);
  if (burnin >= 0) plan.burnin = static_cast<std::uint64_t>(burnin);
  plan.thin = static_cast<std::uint64_t>(smp.integer("thin", 1, 1, 1LL << 20));
  plan.chains = static_cast<unsigned>(smp.integer("chains", 8, 1, 4096));

  const Section col(top.raw("coloring"), "coloring", {"colours", "nu", "ground", "gamma"});
  if (top.has("coloring")) {
    ColorParams cp;
    cp.colours = static_cast<int>(col.integer("colours", 2, 2, 255));
    cp.nu = col.numbers("nu");
    if (!col.has("nu")) cp.nu = ColorParams::uniform(cp.colours).nu;
    cp.ground = static_cast<int>(col.integer("ground", 1, 1, cp.colours)) - 1;
    cp.gamma = col.numbers("gamma");
    if (col.has("gamma") && cp.gamma.empty()) bad("coloring.gamma", "must not be empty when given");
    within("coloring", [&] { cp.validate(); });
    plan.color = cp;
  }

  const Section exp(top.raw("experiment"), "experiment", {"statistics", "repetitions", "proxy", "margin", "cutoff",
                                                          "calibration_replicates", "decay_range", "max_vertices"});
  for (const auto& name : exp.strings("statistics")) {
    within("experiment", [&] { plan.statistics.push_back(parse_statistic(name)); });
  }
  if (exp.has("statistics") && plan.statistics.empty()) bad("experiment.statistics", "at least one statistic is required");
  if (plan.statistics.empty()) plan.statistics = default_statistics(command);
  plan.repetitions = static_cast<unsigned>(exp.integer("repetitions", 1, 1, 1000));
  within("experiment", [&] { plan.proxy = parse_proxy_rule(exp.string("proxy", "auto")); });
  plan.margin = static_cast<int>(exp.integer("margin", -1, -1, 1 << 20));
  plan.cutoff = static_cast<int>(exp.integer("cutoff", -1, -1, 1 << 20));
  plan.calibration_replicates = static_cast<std::size_t>(exp.integer("calibration_replicates", 0, 0, 1LL << 40));
  const std::vector<int> range = exp.integers("decay_range", {1, 20});
  if (range.size() != 2 || range[0] < 1 || range[1] < range[0]) {
    bad("experiment.decay_range", "expected [min_n, max_n] with 1 <= min_n <= max_n");
  }
  plan.min_n = range[0];
  plan.max_n = range[1];
  plan.max_vertices = static_cast<std::size_t>(exp.integer("max_vertices", 1LL << 22, 1, 1LL << 40));

  const Section ex(top.raw("exact"), "exact", {"fkg", "duality", "oracle_records"});
  rc.exact.fkg = ex.boolean("fkg", true);
  rc.exact.duality = ex.boolean("duality", false);
  rc.exact.oracle_records = ex.boolean("oracle_records", false);

  const Section out(top.raw("output"), "output", {"directory", "csv", "json", "svg", "verbosity", "dump_configurations"});
  rc.output.directory = out.string("directory", "rcm-out");
  if (rc.output.directory.empty()) bad("output.directory", "must not be empty");
  rc.output.csv = out.boolean("csv", true);
  rc.output.json = out.boolean("json", true);
  rc.output.svg = out.boolean("svg", true);
  rc.output.verbosity = static_cast<int>(out.integer("verbosity", 1, 0, 3));
  rc.output.dump_configurations = out.boolean("dump_configurations", false);

  if (command == Command::exact) {
    if (rc.exact.duality && plan.dimension != 2) fail(ErrorKind::unsupported_dimension, "exact.duality: duality requires lattice.dimension = 2");
    within("model", [&] { plan.fk.validate(); });
    if (rc.exact.fkg && plan.fk.q < 1.0) bad("exact.fkg", "the FKG check requires model.q >= 1");
  } else {
    if (plan.radii.front() < 1) bad("lattice.radii", "must be >= 1");
    plan.validate();
  }

  json canon = canonical_json(rc);
  rc.canonical = canon.dump();
  canon.erase("output");
  rc.hash = fmt::format("{:016x}", fnv1a64(canon.dump()));
  return rc;
}

RunConfig load_config(const std::string& path, Command command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

}  // namespace rcm
