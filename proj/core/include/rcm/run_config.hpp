#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcm/harness.hpp"

namespace rcm {

enum class Command { sample, exact, clt, color, decay };

const char* to_string(Command c) noexcept;
Command parse_command(const std::string& name);

struct OutputOptions {
  std::string directory = "rcm-out";
  bool csv = true;
  bool json = true;
  bool svg = true;
  int verbosity = 1;
  bool dump_configurations = false;
};

// Options read only by the exact command.
struct ExactOptions {
  std::vector<int> sides;  // rectangle sides; empty means the cube of radius radii[0]
  bool fkg = true;
  bool duality = false;
  bool oracle_records = false;
};

struct RunConfig {
  Command command = Command::clt;
  ExperimentPlan plan;
  ExactOptions exact;
  OutputOptions output;
  // Normalized configuration as JSON text with sorted keys and every default
  // filled in.
  std::string canonical;
  // FNV-1a (64 bit, hex) of the canonical text with the output section removed.
  std::string hash;
};

// Parses a JSON configuration. Unknown keys, wrong types and invalid values
// raise invalid-parameter with the dotted field path in the message; the
// vertex cap raises cap-exceeded. The command given here overrides any
// "command" key in the document.
RunConfig parse_config(const std::string& text, Command command);
RunConfig load_config(const std::string& path, Command command);

// JSON schema of the configuration file.
const std::string& config_schema();

std::uint64_t fnv1a64(const std::string& bytes) noexcept;

}  // namespace rcm
