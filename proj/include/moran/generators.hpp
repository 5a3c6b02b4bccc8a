#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "moran/graph.hpp"

namespace moran {

enum class Family { Complete, Star, Cycle, Grid, RandomConnected };

Family parse_family(std::string_view name);
const char* family_name(Family f);

struct FamilySpec {
  Family family = Family::Complete;
  std::size_t n = 0;  // Grid: rows * cols (0 means derive it)
  bool self_loops = false;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool torus = false;
  double p = 0.5;            // RandomConnected edge probability
  std::uint64_t seed = 0;    // RandomConnected
};

/// Unweighted undirected member of the family, every edge (and self-loop)
/// with weight 1. Star has its centre at vertex 0. RandomConnected is
/// G(n,p) united with a random recursive tree over a seeded permutation.
WeightedGraph generate(const FamilySpec& spec);

/// JSON graph format: {"n", "directed", "self_loops", "log_weights",
/// "edges": [[u, v, w], ...]}. With log_weights the weight is log2 and the
/// string "-inf" stands for 0. An optional fourth entry carries exact terms
/// as [[num, den, pow2, pow_n], ...].
WeightedGraph load_graph(std::string_view bytes);
/// Always writes log2 weights; undirected graphs list each pair once (u <= v).
std::string save_graph(const WeightedGraph& g);

WeightedGraph load_graph_file(const std::string& path);
void save_graph_file(const WeightedGraph& g, const std::string& path);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace moran
