#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "moran/configuration.hpp"
#include "moran/graph.hpp"
#include "moran/rng.hpp"
#include "moran/sampler.hpp"

namespace moran {

/// Distribution of the single initial mutant.
struct InitScheme {
  enum class Kind { Uniform, Temperature, Convex };

  Kind kind = Kind::Uniform;
  double eta = 0.0;  // Convex only: weight of the temperature component

  static InitScheme uniform() { return {Kind::Uniform, 0.0}; }
  static InitScheme temperature() { return {Kind::Temperature, 1.0}; }
  static InitScheme convex(double eta);

  /// "uniform", "temperature" or "convex:<eta>".
  static InitScheme parse(std::string_view text);
  std::string str() const;
};

enum class Mode { Full, Jump };
enum class Outcome { Fixed, Extinct, Timeout };

const char* to_string(Mode m);
const char* to_string(Outcome o);
Mode parse_mode(std::string_view text);

inline constexpr std::uint64_t kDefaultMaxSteps = 1'000'000'000ULL;

struct TrajectoryOutcome {
  Outcome result = Outcome::Timeout;
  std::uint64_t steps_full_chain = 0;
  std::uint64_t steps_jump_chain = 0;
};

/// r|S| + n - |S|.
double total_fitness(const Configuration& s, double r, std::size_t n);

/// One step of the birth-death process (self-transitions included).
Configuration step(const WeightedGraph& g, const Configuration& s, double r, Rng& rng);

/// One step of the embedded jump chain: only (u,v) with type(u) != type(v)
/// and W[u,v] > 0, chosen with probability proportional to fitness(u) W[u,v].
Configuration jump_step(const WeightedGraph& g, const Configuration& s, double r, Rng& rng);

/// P(initial mutant = u) under the scheme.
std::vector<double> initial_distribution(const WeightedGraph& g, const InitScheme& scheme);
Configuration sample_initial(const WeightedGraph& g, const InitScheme& scheme, Rng& rng);

struct SimulationOptions {
  Mode mode = Mode::Jump;
  std::uint64_t max_steps = kDefaultMaxSteps;
  /// Merge vertices whose transposition is an automorphism of W; the jump
  /// chain on per-class mutant counts has the same law for |S|.
  bool lump = true;
  /// Basin elimination: above 0, strongly connected clusters of up to this
  /// many lumped states are left in one exactly sampled move. Jump mode only.
  std::size_t basin_limit = 0;
  /// Jump probability from which a move is considered to stay in the basin.
  double basin_threshold = 0.05;
};

/// Twin classes of a graph and the jump-chain rates between class counts.
class LumpedChain {
 public:
  struct InBlock {
    std::uint32_t from = 0;  // source class
    double log2_w = 0.0;     // W[x,y] for x in `from`, y in this class, x != y
  };

  LumpedChain(const WeightedGraph& g, double r, bool lump);

  std::size_t n() const noexcept { return n_; }
  double r() const noexcept { return r_; }
  std::size_t classes() const noexcept { return size_.size(); }
  std::uint32_t class_of(VertexId u) const { return class_of_[u]; }
  std::uint32_t class_size(std::size_t c) const { return size_[c]; }
  std::span<const InBlock> in_blocks(std::size_t c) const { return in_[c]; }
  std::span<const std::uint32_t> out_classes(std::size_t c) const { return out_[c]; }

  /// log2 rate at which class c gains (up) or loses (down) one mutant.
  double log2_up(std::span<const std::uint32_t> k, std::size_t c) const;
  double log2_down(std::span<const std::uint32_t> k, std::size_t c) const;

 private:
  std::size_t n_ = 0;
  double r_ = 1.0;
  double log2_r_ = 0.0;
  std::vector<std::uint32_t> class_of_;
  std::vector<std::uint32_t> size_;
  std::vector<std::vector<InBlock>> in_;
  std::vector<std::vector<std::uint32_t>> out_;
};

/// Reusable trajectory generator for one (graph, r, options). Copies share
/// the lumped chain and keep their own caches, so one copy per thread.
class Simulator {
 public:
  Simulator(const WeightedGraph& g, double r, SimulationOptions opt = {});

  TrajectoryOutcome run(const Configuration& s0, Rng& rng);

  const LumpedChain& chain() const { return *chain_; }
  const SimulationOptions& options() const { return opt_; }

 private:
  struct ExitTable {
    bool plain = false;
    std::vector<std::uint64_t> targets;
    std::vector<double> cumulative;
  };

  TrajectoryOutcome run_full(const Configuration& s0, Rng& rng) const;
  TrajectoryOutcome run_jump(const Configuration& s0, Rng& rng) const;
  TrajectoryOutcome run_basin(const Configuration& s0, Rng& rng);

  std::vector<std::uint32_t> counts_of(const Configuration& s) const;
  std::uint64_t encode(std::span<const std::uint32_t> k) const;
  void decode(std::uint64_t key, std::vector<std::uint32_t>& k) const;
  bool absorbing(std::span<const std::uint32_t> k) const;
  /// Changing moves from k as (event, log2 rate); event 2c is "up" in c,
  /// 2c+1 is "down".
  void moves(std::span<const std::uint32_t> k, std::vector<std::pair<std::uint32_t, double>>& out) const;
  const ExitTable& exits_from(std::uint64_t key);

  const WeightedGraph* graph_;
  double r_;
  SimulationOptions opt_;
  std::shared_ptr<const LumpedChain> chain_;
  std::vector<std::vector<double>> cumulative_rows_;  // full mode
  std::vector<std::uint64_t> radix_;                  // basin state encoding
  bool encodable_ = false;
  std::unordered_map<std::uint64_t, ExitTable> cache_;
};

/// Runs one trajectory from s0 until absorption or max_steps.
TrajectoryOutcome simulate(const WeightedGraph& g, const Configuration& s0, double r, Rng& rng,
                           Mode mode = Mode::Jump, std::uint64_t max_steps = kDefaultMaxSteps);

}  // namespace moran
