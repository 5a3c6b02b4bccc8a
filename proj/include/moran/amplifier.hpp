#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "moran/graph.hpp"

namespace moran {

struct SpanningTree {
  VertexId root = 0;
  std::vector<std::int64_t> parent;  // -1 at the root
  std::vector<int> depth;
  std::vector<VertexId> order;       // BFS order, root first
  std::vector<std::vector<VertexId>> children;  // ascending
};

struct Branch {
  VertexId root = 0;
  std::vector<VertexId> members;  // ascending
};

struct AmplifierLayout {
  SpanningTree tree;
  std::vector<VertexId> separator;  // S
  std::vector<VertexId> hub;        // H
  std::vector<VertexId> frontier;   // F
  std::vector<int> lambda;          // tree distance to F; -1 when F is empty
  int mu = 0;
  int nu = 0;
  std::vector<Branch> branches;
  double epsilon = 0.0;
  double c = 0.0;      // 2 epsilon / 3
  double gamma = 0.0;  // epsilon / 3
  long long threshold = 0;   // ceil(n^{1-c})
  long long hub_target = 0;  // min(n, ceil(n^{1-gamma}))
  bool hub_oversized = false;  // root-to-S paths alone exceeded hub_target

  std::vector<char> in_hub;
  std::vector<char> in_frontier;
  std::vector<int> chl;         // |chl(u)|: tree children outside H
  std::vector<int> hub_degree;  // deg(u) for u in H, else 0
};

/// BFS tree over the undirected structural view (zero-weight edges count).
/// Neighbours are visited in ascending order.
SpanningTree bfs_spanning_tree(const WeightedGraph& g, VertexId root);

/// Bottom-up pass in reverse BFS order; u joins S once the part of its
/// subtree not already cut off exceeds `threshold`.
std::vector<VertexId> partition_separator(const SpanningTree& t, long long threshold);

/// Closure of the root-to-s paths for s in S, then padded by BFS over tree
/// children (ascending) until it has `target` vertices. Never shrinks the
/// closure, so the result may exceed `target`.
std::vector<VertexId> build_hub(const SpanningTree& t, const std::vector<VertexId>& S, long long target);

AmplifierLayout compute_layout(const WeightedGraph& g, double epsilon, VertexId root = 0);

/// Weight rules on the edge set of g. `kappa` replaces the exponent in
/// 2^{-n} when given. Edges that no rule covers get weight 0.
WeightedGraph assign_weights(const WeightedGraph& g, const AmplifierLayout& layout,
                             std::optional<int> kappa = std::nullopt);

/// Exact diameter of the undirected structural view.
int graph_diameter(const WeightedGraph& g);
bool check_diameter(const WeightedGraph& g, double epsilon);

struct AmplifierCheck {
  bool hub_weight_identity = false;          // exact, symbolic
  std::optional<bool> hub_isothermal_exact;  // exact, symbolic
  double hub_temperature_deviation = 0.0;    // max |T|H(u) - 1|, log-domain
  bool separator_size_ok = false;            // |S| <= ceil(n^c)
  bool branch_sizes_ok = false;              // m_j <= ceil(n^{1-c})
  bool branch_sum_ok = false;                // sum m_j = n - |H|
};

AmplifierCheck verify_amplifier(const WeightedGraph& weighted, const AmplifierLayout& layout,
                                std::optional<int> kappa = std::nullopt);

std::string layout_to_json(const AmplifierLayout& layout, int indent = 2);

}  // namespace moran
