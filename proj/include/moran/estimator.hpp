#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "moran/dynamics.hpp"
#include "moran/graph.hpp"

namespace moran {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;
/// Estimates with more timeouts than this fraction of trials are flagged.
inline constexpr double kUnreliableTimeoutFraction = 0.05;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for `successes` out of `n`; [0, 1] when n = 0.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z);

struct FixationEstimate {
  std::uint64_t trials = 0;
  std::uint64_t fixations = 0;
  std::uint64_t timeouts = 0;
  double point = 0.0;  // fixations / (trials - timeouts)
  Interval wilson95;
  Interval wilson99;
  std::uint64_t seed = 0;
  double mean_jump_steps = 0.0;
  bool unreliable = false;
};

struct EstimateOptions {
  SimulationOptions sim;
  unsigned threads = 1;
};

/// Trial i draws from its own stream seeded by (seed, i), so the result does
/// not depend on the thread count.
FixationEstimate estimate_fixation(const WeightedGraph& g, double r, const InitScheme& scheme, std::uint64_t trials,
                                   std::uint64_t seed, const EstimateOptions& opt = {});

struct SweepSpec {
  std::string graph_id;
  std::function<WeightedGraph()> source;
  double r = 1.0;
  InitScheme scheme;
  std::uint64_t trials = 0;
};

struct SweepRow {
  std::string graph_id;
  std::size_t n = 0;
  double r = 1.0;
  InitScheme scheme;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<FixationEstimate> estimate;
  std::string error;  // empty unless the row failed
};

/// Row i uses seed + i. A failing row records its error and the sweep goes on.
std::vector<SweepRow> sweep(const std::vector<SweepSpec>& specs, std::uint64_t seed, const EstimateOptions& opt = {});

std::string csv_header();
std::string csv_row(const SweepRow& row);

}  // namespace moran
