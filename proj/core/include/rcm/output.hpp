#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rcm/coloring.hpp"
#include "rcm/fk_model.hpp"
#include "rcm/harness.hpp"
#include "rcm/run_config.hpp"
#include "rcm/sampler.hpp"

namespace rcm {

inline constexpr int kOutputSchemaVersion = 1;

// (config hash, master seed, tool version) stamped into every output file.
struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  std::string command;
};

Provenance provenance(const RunConfig& rc);

// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

// CSV text: '#' provenance lines, a header row, then data rows.
class CsvTable {
 public:
  CsvTable(const Provenance& prov, std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  void row(std::span<const double> values);
  std::size_t columns() const noexcept { return columns_.size(); }
  const std::string& text() const noexcept { return text_; }

 private:
  std::vector<std::string> columns_;
  std::string text_;
};

void write_file(const std::filesystem::path& path, const std::string& content);

// Quick-look histogram: ceil(sqrt(N)) equal bins over the sample range and a
// normal density with the sample mean and variance, scaled to counts.
std::string svg_histogram(std::span<const double> x, const std::string& title, const Provenance& prov);

// Summary of a harness run as JSON text (stable key order, no timings).
std::string summary_json(const RunConfig& rc, const ExperimentSummary& s);

// Writes the data files of a clt/color/decay run into rc.output.directory and
// returns their names in write order.
std::vector<std::string> write_experiment(const RunConfig& rc, const ExperimentSummary& s);

// run_info.json: wall time and thread count, kept apart from the data files.
void write_run_info(const std::filesystem::path& dir, const RunConfig& rc, double wall_seconds, unsigned threads);

struct DumpHeader {
  int dimension = 2;
  int t = 0;
  BoundaryMode mode = BoundaryMode::free;
  double p = 0.0;
  double q = 1.0;
  Algorithm algorithm = Algorithm::swendsen_wang;
  std::uint64_t seed = 0;
  std::size_t length = 0;  // edges per record (edge dump) or vertices (spin dump)
  std::size_t count = 0;   // records
};

// Edge dump: one text header line, then per record ceil(length/8) bytes with
// edge e in bit (e mod 8) of byte e/8.
void write_edge_dump(const std::filesystem::path& path, DumpHeader h, std::span<const EdgeConfig> configs);
std::vector<EdgeConfig> read_edge_dump(const std::filesystem::path& path, DumpHeader* header = nullptr);

// Spin dump: one text header line, then one byte per vertex per record.
void write_spin_dump(const std::filesystem::path& path, DumpHeader h, std::span<const SpinConfig> spins);
std::vector<SpinConfig> read_spin_dump(const std::filesystem::path& path, DumpHeader* header = nullptr);

}  // namespace rcm
