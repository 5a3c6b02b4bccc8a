#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "moran/symbolic.hpp"

namespace moran {

using VertexId = std::uint32_t;

/// Nonnegative edge weight held as log2 (kLog2Zero for weight 0), with an
/// optional exact symbolic payload sum_i c_i * 2^{-a_i} * n^{-b_i}.
class EdgeWeight {
 public:
  EdgeWeight() = default;

  static EdgeWeight zero() { return EdgeWeight(); }
  static EdgeWeight from_value(double w);
  static EdgeWeight from_log2(double log2w);
  /// Weight given by exact terms; `n` is the population size the n^{-b}
  /// factors refer to.
  static EdgeWeight from_terms(const SymbolicSum& terms, double n);
  /// Pairs an already evaluated log2 value with its exact terms.
  static EdgeWeight from_parts(double log2w, std::optional<SymbolicSum> terms);

  bool is_zero() const noexcept;
  double log2() const noexcept { return log2_; }
  double value() const noexcept;
  const std::optional<SymbolicSum>& symbolic() const noexcept { return symbolic_; }

 private:
  double log2_ = -std::numeric_limits<double>::infinity();
  std::optional<SymbolicSum> symbolic_;
};

struct Edge {
  VertexId target = 0;
  EdgeWeight weight;
};

/// Entry of the row-normalized stochastic matrix W restricted to positive
/// weights: `vertex` is the other endpoint, prob = W[u,v] in linear and log2
/// form.
struct Arc {
  VertexId vertex = 0;
  double log2_prob = 0.0;
  double prob = 0.0;
};

struct ClassificationFlags {
  bool self_loop_free = true;
  bool unweighted = true;
  bool undirected = true;
  int max_degree = 0;

  friend bool operator==(const ClassificationFlags&, const ClassificationFlags&) = default;
};

/// Immutable weighted directed graph. Edge lists are sorted by target and
/// may contain zero-weight (structural only) edges; the stochastic view
/// (out_arcs / in_arcs) keeps positive weights only.
class WeightedGraph {
 public:
  std::size_t n() const noexcept { return out_edges_.size(); }

  std::span<const Edge> edges(VertexId u) const { return out_edges_[u]; }
  std::span<const Arc> out_arcs(VertexId u) const { return out_arcs_[u]; }
  std::span<const Arc> in_arcs(VertexId v) const { return in_arcs_[v]; }

  /// log2 of w(u) = sum_v w(u,v).
  double log2_total_weight(VertexId u) const { return log2_total_[u]; }

  /// W[u,v]; 0 when there is no positive edge.
  double transition(VertexId u, VertexId v) const;
  double log2_transition(VertexId u, VertexId v) const;
  /// Raw edge weight (zero when absent).
  EdgeWeight weight(VertexId u, VertexId v) const;
  bool has_edge(VertexId u, VertexId v) const;

  std::size_t edge_count() const noexcept { return edge_count_; }

  bool self_loop_free() const noexcept { return self_loop_free_; }
  bool unweighted() const noexcept { return unweighted_; }
  /// w(u,v) == w(v,u) for all pairs (within 1e-12 in log2).
  bool undirected_symmetric() const noexcept { return symmetric_; }
  bool has_symbolic_weights() const noexcept { return symbolic_; }

  /// Structural equality: same edges with bit-identical log2 weights.
  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  friend class GraphBuilder;
  WeightedGraph() = default;
  void finalize();

  std::vector<std::vector<Edge>> out_edges_;
  std::vector<std::vector<Arc>> out_arcs_;
  std::vector<std::vector<Arc>> in_arcs_;
  std::vector<double> log2_total_;
  std::size_t edge_count_ = 0;
  bool self_loop_free_ = true;
  bool unweighted_ = true;
  bool symmetric_ = true;
  bool symbolic_ = false;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n);

  /// Directed edge u -> v. Duplicate edges are rejected.
  GraphBuilder& add_edge(VertexId u, VertexId v, EdgeWeight w);
  /// Both directions (a single self-loop when u == v).
  GraphBuilder& add_undirected_edge(VertexId u, VertexId v, EdgeWeight w);

  std::size_t n() const noexcept { return edges_.size(); }

  /// Throws StructuralError if some vertex has no outgoing positive weight.
  WeightedGraph build() &&;

 private:
  std::vector<std::vector<Edge>> edges_;
};

/// T(u) = sum over in-neighbors v (u itself included when it has a
/// self-loop) of W[v,u].
double temperature(const WeightedGraph& g, VertexId u);
std::vector<double> temperatures(const WeightedGraph& g);
bool is_isothermal(const WeightedGraph& g, double tol);

/// G restricted to X. Weight on edges leaving X is folded into the
/// self-loop, so w|X(u) = w(u). Vertex i of the result is the i-th
/// smallest member of X.
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> X);

/// Temperature of u inside induced_subgraph(g, X).
double restricted_temperature(const WeightedGraph& g, std::span<const VertexId> X, VertexId u);

ClassificationFlags classify(const WeightedGraph& g);

/// Exact w(u) from the symbolic payload; nullopt when some positive edge of
/// u carries no symbolic terms.
std::optional<SymbolicSum> symbolic_total_weight(const WeightedGraph& g, VertexId u);

/// Exact isothermality of G|X. Requires every member of X to have the same
/// symbolic total weight D; then T|X(u) = N(u)/D with N(u) computed exactly.
/// Returns nullopt when the payload is missing or the totals differ.
std::optional<bool> exact_restricted_isothermal(const WeightedGraph& g, std::span<const VertexId> X);

/// Connectivity of the undirected view, ignoring weights.
bool structurally_connected(const WeightedGraph& g);
/// Strong connectivity of the positive-weight digraph.
bool strongly_connected(const WeightedGraph& g);

/// Out/in degree counting positive-weight edges (self-loop included).
int out_degree(const WeightedGraph& g, VertexId u);
int in_degree(const WeightedGraph& g, VertexId u);

}  // namespace moran
