#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moran/graph.hpp"

namespace moran {

/// 1 - 1/(r+1): temperature initialization, self-loop-free graphs.
double temp_bound_selfloopfree(double r);
/// 1 - 1/(4r+2): temperature initialization, unweighted graphs.
double temp_bound_unweighted(double r);
/// 1 - 1/(c + r c^2): uniform initialization, self-loop-free, degree c.
double uniform_bound_selfloopfree(double r, int c);
/// 1 - 1/(1 + r c): uniform initialization, unweighted, degree c.
double uniform_bound_unweighted(double r, int c);

/// x = P(|X_1| = 2), y = P(|X_1| = 0) from the single mutant u, and x/(x+y).
struct VertexBound {
  VertexId u = 0;
  double x = 0.0;
  double y = 0.0;
  double bound = 0.0;
};

VertexBound vertex_upper_bound(const WeightedGraph& g, VertexId u, double r);

/// Sum over in-neighbours v != u of 1/|Out(v)|. Unweighted graphs only.
double t_prime(const WeightedGraph& g, VertexId u);

/// Union over u of {v in Out(u) : W[u,v] >= 1/c}. Self-loop-free graphs only.
std::vector<VertexId> hot_vertices(const WeightedGraph& g);

struct TheoremBound {
  int theorem = 0;
  std::string scheme;          // "temperature" or "uniform"
  std::optional<int> degree;   // c, for the degree-dependent bounds
  double bound = 0.0;
};

struct BoundsReport {
  ClassificationFlags flags;
  double r = 1.0;
  std::vector<TheoremBound> applicable;
  std::vector<VertexBound> per_vertex;
};

/// Theorems enter only when r >= 1 and their structural hypothesis holds;
/// the degree is always measured on g.
BoundsReport bounds_report(const WeightedGraph& g, double r);

std::string to_json(const BoundsReport& report, int indent = 2);

}  // namespace moran
