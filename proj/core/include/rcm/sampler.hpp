#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcm/fk_model.hpp"
#include "rcm/lattice.hpp"
#include "rcm/rng.hpp"
#include "rcm/union_find.hpp"

namespace rcm {

enum class Algorithm { sweeny, swendsen_wang };

const char* to_string(Algorithm a) noexcept;
Algorithm parse_algorithm(const std::string& name);

// Throws unsupported-regime / unsupported-algorithm for parameter sets the
// algorithm cannot target (Sweeny needs q >= 1, Swendsen-Wang integer q).
void check_algorithm(Algorithm a, const FKParams& prm);

// Markov chain state. For Swendsen-Wang, spins holds one colour per vertex
// (0-based) plus the ghost spin, which is pinned to colour 0 in wired boxes.
struct ChainState {
  EdgeConfig edges;
  std::vector<std::uint8_t> spins;
  Rng rng;
  std::uint64_t sweep = 0;
};

// Ordered start: all bonds open, all spins colour 0.
ChainState initial_state(const BoxGeometry& g, Algorithm a, std::uint64_t seed);

// Single-bond heat-bath sweep in fixed edge order.
class SweenySweeper {
 public:
  SweenySweeper(const BoxGeometry& g, const FKParams& prm);
  void sweep(ChainState& st);

  // Whether the endpoints of edge e are joined by an open path avoiding e.
  bool connected_without(const EdgeConfig& omega, EdgeId e);

 private:
  const BoxGeometry* g_;
  FKParams prm_;
  double p_connected_;
  double p_disconnected_;
  DisjointSets coarse_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<VertexId> queue_a_;
  std::vector<VertexId> queue_b_;
};

// Edwards-Sokal alternation: bonds given spins, then spins given bonds.
class SwendsenWangSweeper {
 public:
  SwendsenWangSweeper(const BoxGeometry& g, const FKParams& prm);
  void sweep(ChainState& st);

 private:
  const BoxGeometry* g_;
  FKParams prm_;
  int colours_;
  DisjointSets ds_;
  std::vector<std::int16_t> cluster_colour_;
};

void sweeny_sweep(ChainState& st, const BoxGeometry& g, const FKParams& prm);
void sw_sweep(ChainState& st, const BoxGeometry& g, const FKParams& prm);

struct ChainOptions {
  Algorithm algorithm = Algorithm::swendsen_wang;
  std::uint64_t samples = 1;  // kept configurations
  std::uint64_t burnin = 0;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
};

// Runs burnin sweeps, then yields `samples` states, one every `thin` sweeps.
// The sink receives the kept index and the state after the kept sweep.
void run_chain(const BoxGeometry& g, const FKParams& prm, const ChainOptions& opt,
               const std::function<void(std::uint64_t, const ChainState&)>& sink);

std::vector<EdgeConfig> collect_chain(const BoxGeometry& g, const FKParams& prm, const ChainOptions& opt);

// Default burn-in: 10 L Swendsen-Wang sweeps or 100 Sweeny sweeps.
std::uint64_t default_burnin(const BoxGeometry& g, Algorithm a) noexcept;

}  // namespace rcm
