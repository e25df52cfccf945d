#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rcm/errors.hpp"
#include "rcm/output.hpp"
#include "rcm/run_config.hpp"

using namespace rcm;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"({
  "seed": 5,
  "lattice": {"radii": [4], "mode": "wired"},
  "model": {"p": 0.7, "q": 2},
  "sampler": {"replicates": 4, "burnin": 2, "chains": 2},
  "experiment": {"statistics": ["infinite-density"], "cutoff": 1},
  "output": {"directory": "out-a"}
})";

ErrorKind kind_of(const std::string& text, Command c = Command::clt) {
  try {
    parse_config(text, c);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::contract_violation;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text, Command::clt);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rcm-unit-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesAndFillsDefaults) {
  const RunConfig rc = parse_config(kBase, Command::clt);
  EXPECT_EQ(rc.plan.seed, 5u);
  EXPECT_EQ(rc.plan.radii, std::vector<int>{4});
  EXPECT_EQ(rc.plan.mode, BoundaryMode::wired);
  EXPECT_EQ(rc.plan.fk.boundary, Boundary::wired);
  EXPECT_DOUBLE_EQ(rc.plan.fk.q, 2.0);
  EXPECT_EQ(rc.output.directory, "out-a");
  EXPECT_EQ(rc.hash.size(), 16u);
  const auto j = nlohmann::json::parse(rc.canonical);
  EXPECT_EQ(j.at("sampler").at("thin"), 1);
  EXPECT_EQ(j.at("experiment").at("proxy"), "auto");
}

TEST(Config, UnknownKeyRejected) {
  const std::string text = R"({"lattice": {"radius": 4}})";
  EXPECT_EQ(kind_of(text), ErrorKind::invalid_parameter);
  EXPECT_NE(message_of(text).find("lattice.radius"), std::string::npos);
  EXPECT_EQ(kind_of(R"({"bogus": 1})"), ErrorKind::invalid_parameter);
}

TEST(Config, FieldPathInMessage) {
  const std::string text = R"({"model": {"q": -1}})";
  EXPECT_EQ(kind_of(text), ErrorKind::invalid_parameter);
  EXPECT_NE(message_of(text).find("model.q"), std::string::npos);
  EXPECT_EQ(kind_of(R"({"model": {"p": 0.5, "beta": 0.3}})"), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of(R"({"lattice": {"radii": "x"}})"), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of("{not json"), ErrorKind::invalid_parameter);
}

TEST(Config, ExactRejectsUnsupportedDuality) {
  const std::string text = R"({"lattice": {"dimension": 3, "sides": [2, 2, 2]}, "exact": {"duality": true}})";
  EXPECT_EQ(kind_of(text, Command::exact), ErrorKind::unsupported_dimension);
}

TEST(Config, VertexCap) {
  const std::string text = R"({"lattice": {"radii": [100]}, "experiment": {"max_vertices": 1000}})";
  EXPECT_EQ(kind_of(text), ErrorKind::cap_exceeded);
}

TEST(Config, HashIgnoresOutputSection) {
  std::string other = kBase;
  other.replace(other.find("out-a"), 5, "out-b");
  const RunConfig a = parse_config(kBase, Command::clt);
  const RunConfig b = parse_config(other, Command::clt);
  EXPECT_EQ(a.hash, b.hash);
  std::string seeded = kBase;
  seeded.replace(seeded.find("\"seed\": 5"), 9, "\"seed\": 6");
  EXPECT_NE(parse_config(seeded, Command::clt).hash, a.hash);
}

TEST(Config, HashIgnoresKeyOrderAndDefaults) {
  const RunConfig a = parse_config(R"({"seed": 3, "model": {"q": 2, "p": 0.4}})", Command::sample);
  const RunConfig b = parse_config(R"({"model": {"p": 0.4, "q": 2}, "seed": 3, "sampler": {"thin": 1}})", Command::sample);
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.canonical, b.canonical);
}

TEST(Config, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Config, SchemaIsJson) {
  const auto j = nlohmann::json::parse(config_schema());
  EXPECT_EQ(j.at("additionalProperties"), false);
}

TEST(Output, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Output, CsvHeader) {
  const RunConfig rc = parse_config(kBase, Command::clt);
  CsvTable t(provenance(rc), {"a", "b"});
  t.row(std::vector<double>{1.5, 2});
  std::istringstream in(t.text());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "# config_hash=" + rc.hash);
  EXPECT_EQ(lines[1], "# seed=5");
  EXPECT_EQ(lines[4], "a,b");
  EXPECT_EQ(lines[5], "1.5,2");
  EXPECT_THROW(t.row(std::vector<double>{1.0}), Error);
}

TEST(Output, SvgBinCount) {
  const RunConfig rc = parse_config(kBase, Command::clt);
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 17);
  const std::string svg = svg_histogram(x, "demo", provenance(rc));
  std::size_t bars = 0;
  for (std::size_t pos = svg.find("class=\"bar\""); pos != std::string::npos; pos = svg.find("class=\"bar\"", pos + 1))
    ++bars;
  EXPECT_EQ(bars, 10u);
  EXPECT_NE(svg.find(rc.hash), std::string::npos);
}

TEST(Output, EdgeDumpRoundTrip) {
  const fs::path dir = temp_dir("edges");
  Rng rng(1);
  std::vector<EdgeConfig> configs(5, EdgeConfig(13));
  for (auto& c : configs) {
    for (auto& b : c) b = rng.bernoulli(0.5) ? 1 : 0;
  }
  DumpHeader h;
  h.t = 2;
  h.p = 0.25;
  h.q = 3;
  h.seed = 99;
  write_edge_dump(dir / "x.rcmedges", h, configs);
  DumpHeader back;
  EXPECT_EQ(read_edge_dump(dir / "x.rcmedges", &back), configs);
  EXPECT_EQ(back.length, 13u);
  EXPECT_EQ(back.count, 5u);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_DOUBLE_EQ(back.p, 0.25);
  std::ifstream in(dir / "x.rcmedges", std::ios::binary);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("rcm-edges-v1", 0), 0u);
  EXPECT_EQ(fs::file_size(dir / "x.rcmedges"), header.size() + 1 + 5 * 2);
  fs::remove_all(dir);
}

TEST(Output, SpinDumpRoundTrip) {
  const fs::path dir = temp_dir("spins");
  std::vector<SpinConfig> spins{{0, 1, 2}, {2, 2, 0}};
  DumpHeader h;
  write_spin_dump(dir / "s.rcmspins", h, spins);
  DumpHeader back;
  EXPECT_EQ(read_spin_dump(dir / "s.rcmspins", &back), spins);
  EXPECT_EQ(back.length, 3u);
  std::ofstream(dir / "bad.rcmspins") << "garbage\n";
  EXPECT_THROW(read_spin_dump(dir / "bad.rcmspins"), Error);
  fs::remove_all(dir);
}

TEST(Output, ExperimentFilesAndSummary) {
  RunConfig rc = parse_config(kBase, Command::clt);
  const fs::path dir = temp_dir("experiment");
  rc.output.directory = dir.string();
  const auto s = run_experiment(rc.plan, 1);
  const auto files = write_experiment(rc, s);
  for (const auto& f : files) EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto j = nlohmann::json::parse(summary_json(rc, s));
  EXPECT_EQ(j.at("config_hash"), rc.hash);
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_EQ(j.at("command"), "clt");
  EXPECT_EQ(j.at("radii").size(), 1u);
  fs::remove_all(dir);
}
