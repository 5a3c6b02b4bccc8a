#include "moran/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "moran/errors.hpp"
#include "moran/log_math.hpp"

namespace moran {

namespace {

constexpr double kFlagTol = 1e-12;

bool log2_close(double a, double b) {
  if (is_log2_zero(a) || is_log2_zero(b)) return a == b;
  return std::abs(a - b) <= kFlagTol;
}

void check_vertex(std::size_t n, VertexId u, const char* what) {
  if (u >= n) throw InputError(std::string(what) + ": vertex " + std::to_string(u) + " out of range (n=" + std::to_string(n) + ")");
}

std::vector<VertexId> sorted_members(std::size_t n, std::span<const VertexId> X) {
  if (X.empty()) throw InputError("induced_subgraph: empty vertex set");
  std::vector<VertexId> xs(X.begin(), X.end());
  for (VertexId x : xs) check_vertex(n, x, "induced_subgraph");
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

EdgeWeight EdgeWeight::from_value(double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("edge weight must be finite and nonnegative");
  EdgeWeight e;
  e.log2_ = w == 0.0 ? kLog2Zero : std::log2(w);
  return e;
}

EdgeWeight EdgeWeight::from_log2(double log2w) {
  if (std::isnan(log2w) || log2w == std::numeric_limits<double>::infinity()) throw InputError("edge log-weight must be finite or -inf");
  EdgeWeight e;
  e.log2_ = log2w;
  return e;
}

EdgeWeight EdgeWeight::from_terms(const SymbolicSum& terms, double n) {
  for (const auto& t : terms.terms()) {
    if (t.coefficient.num() < 0) throw InputError("symbolic weight term with negative coefficient: " + terms.str());
    if (t.pow2 < 0 || t.pow_n < 0) throw InputError("symbolic weight term with negative exponent: " + terms.str());
  }
  EdgeWeight e;
  e.log2_ = terms.is_zero() ? kLog2Zero : terms.log2_value(n);
  e.symbolic_ = terms;
  return e;
}

EdgeWeight EdgeWeight::from_parts(double log2w, std::optional<SymbolicSum> terms) {
  EdgeWeight e = from_log2(log2w);
  e.symbolic_ = std::move(terms);
  return e;
}

bool EdgeWeight::is_zero() const noexcept { return is_log2_zero(log2_); }

double EdgeWeight::value() const noexcept { return is_zero() ? 0.0 : std::exp2(log2_); }

double WeightedGraph::transition(VertexId u, VertexId v) const {
  const double l = log2_transition(u, v);
  return is_log2_zero(l) ? 0.0 : std::exp2(l);
}

double WeightedGraph::log2_transition(VertexId u, VertexId v) const {
  const auto& arcs = out_arcs_.at(u);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), v, [](const Arc& a, VertexId x) { return a.vertex < x; });
  if (it == arcs.end() || it->vertex != v) return kLog2Zero;
  return it->log2_prob;
}

EdgeWeight WeightedGraph::weight(VertexId u, VertexId v) const {
  const auto& es = out_edges_.at(u);
  auto it = std::lower_bound(es.begin(), es.end(), v, [](const Edge& e, VertexId x) { return e.target < x; });
  if (it == es.end() || it->target != v) return EdgeWeight::zero();
  return it->weight;
}

bool WeightedGraph::has_edge(VertexId u, VertexId v) const {
  const auto& es = out_edges_.at(u);
  auto it = std::lower_bound(es.begin(), es.end(), v, [](const Edge& e, VertexId x) { return e.target < x; });
  return it != es.end() && it->target == v;
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.n() != b.n()) return false;
  for (std::size_t u = 0; u < a.n(); ++u) {
    const auto& ea = a.out_edges_[u];
    const auto& eb = b.out_edges_[u];
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (ea[i].target != eb[i].target) return false;
      const double la = ea[i].weight.log2();
      const double lb = eb[i].weight.log2();
      if (!(la == lb)) return false;
    }
  }
  return true;
}

void WeightedGraph::finalize() {
  const std::size_t n = out_edges_.size();
  out_arcs_.assign(n, {});
  in_arcs_.assign(n, {});
  log2_total_.assign(n, kLog2Zero);
  edge_count_ = 0;
  self_loop_free_ = true;
  unweighted_ = true;
  symmetric_ = true;
  symbolic_ = false;

  for (std::size_t u = 0; u < n; ++u) {
    Log2Accumulator acc;
    double first_positive = kLog2Zero;
    for (const Edge& e : out_edges_[u]) {
      ++edge_count_;
      if (e.weight.symbolic()) symbolic_ = true;
      if (e.weight.is_zero()) continue;
      acc.add(e.weight.log2());
      if (e.target == u) self_loop_free_ = false;
      if (is_log2_zero(first_positive)) {
        first_positive = e.weight.log2();
      } else if (!log2_close(first_positive, e.weight.log2())) {
        unweighted_ = false;
      }
    }
    log2_total_[u] = acc.value();
    if (is_log2_zero(log2_total_[u])) throw StructuralError("vertex " + std::to_string(u) + " has no outgoing edge of positive weight");
    for (const Edge& e : out_edges_[u]) {
      if (e.weight.is_zero()) continue;
      const double lp = e.weight.log2() - log2_total_[u];
      out_arcs_[u].push_back({e.target, lp, std::exp2(lp)});
      in_arcs_[e.target].push_back({static_cast<VertexId>(u), lp, std::exp2(lp)});
    }
  }

  for (std::size_t u = 0; u < n && symmetric_; ++u) {
    for (const Edge& e : out_edges_[u]) {
      if (!log2_close(e.weight.log2(), weight(e.target, static_cast<VertexId>(u)).log2())) {
        symmetric_ = false;
        break;
      }
    }
  }
}

GraphBuilder::GraphBuilder(std::size_t n) : edges_(n) {
  if (n == 0) throw InputError("graph must have at least one vertex");
}

GraphBuilder& GraphBuilder::add_edge(VertexId u, VertexId v, EdgeWeight w) {
  check_vertex(edges_.size(), u, "add_edge");
  check_vertex(edges_.size(), v, "add_edge");
  auto& es = edges_[u];
  auto it = std::lower_bound(es.begin(), es.end(), v, [](const Edge& e, VertexId x) { return e.target < x; });
  if (it != es.end() && it->target == v) {
    throw InputError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  es.insert(it, Edge{v, std::move(w)});
  return *this;
}

GraphBuilder& GraphBuilder::add_undirected_edge(VertexId u, VertexId v, EdgeWeight w) {
  add_edge(u, v, w);
  if (u != v) add_edge(v, u, std::move(w));
  return *this;
}

WeightedGraph GraphBuilder::build() && {
  WeightedGraph g;
  g.out_edges_ = std::move(edges_);
  g.finalize();
  return g;
}

double temperature(const WeightedGraph& g, VertexId u) {
  check_vertex(g.n(), u, "temperature");
  double t = 0.0;
  for (const Arc& a : g.in_arcs(u)) t += a.prob;
  return t;
}

std::vector<double> temperatures(const WeightedGraph& g) {
  std::vector<double> t(g.n(), 0.0);
  for (VertexId u = 0; u < g.n(); ++u) {
    for (const Arc& a : g.out_arcs(u)) t[a.vertex] += a.prob;
  }
  return t;
}

bool is_isothermal(const WeightedGraph& g, double tol) {
  if (!(tol > 0.0)) throw InputError("is_isothermal: tol must be positive");
  for (double t : temperatures(g)) {
    if (std::abs(t - 1.0) > tol) return false;
  }
  return true;
}

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> X) {
  const std::vector<VertexId> xs = sorted_members(g.n(), X);
  if (!g.undirected_symmetric()) throw InputError("induced_subgraph: graph weights are not symmetric");
  std::vector<std::int64_t> index(g.n(), -1);
  for (std::size_t i = 0; i < xs.size(); ++i) index[xs[i]] = static_cast<std::int64_t>(i);

  GraphBuilder b(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const VertexId u = xs[i];
    Log2Accumulator loop;
    SymbolicSum loop_terms;
    bool exact = true;
    bool had_loop = false;
    for (const Edge& e : g.edges(u)) {
      const std::int64_t j = index[e.target];
      if (e.target != u && j >= 0) {
        b.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j), e.weight);
        continue;
      }
      if (e.target == u) had_loop = true;
      loop.add(e.weight.log2());
      if (e.weight.symbolic()) {
        loop_terms.add(*e.weight.symbolic());
      } else if (!e.weight.is_zero()) {
        exact = false;
      }
    }
    const double l = loop.value();
    if (had_loop || !is_log2_zero(l)) {
      std::optional<SymbolicSum> terms;
      if (exact && g.has_symbolic_weights()) terms = loop_terms;
      b.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(i), EdgeWeight::from_parts(l, std::move(terms)));
    }
  }
  return std::move(b).build();
}

double restricted_temperature(const WeightedGraph& g, std::span<const VertexId> X, VertexId u) {
  const std::vector<VertexId> xs = sorted_members(g.n(), X);
  auto it = std::lower_bound(xs.begin(), xs.end(), u);
  if (it == xs.end() || *it != u) throw InputError("restricted_temperature: vertex " + std::to_string(u) + " is not in X");
  const WeightedGraph sub = induced_subgraph(g, xs);
  return temperature(sub, static_cast<VertexId>(it - xs.begin()));
}

ClassificationFlags classify(const WeightedGraph& g) {
  ClassificationFlags f;
  f.self_loop_free = g.self_loop_free();
  f.unweighted = g.unweighted();
  f.undirected = g.undirected_symmetric();
  for (VertexId u = 0; u < g.n(); ++u) {
    f.max_degree = std::max({f.max_degree, out_degree(g, u), in_degree(g, u)});
  }
  return f;
}

std::optional<SymbolicSum> symbolic_total_weight(const WeightedGraph& g, VertexId u) {
  check_vertex(g.n(), u, "symbolic_total_weight");
  SymbolicSum total;
  for (const Edge& e : g.edges(u)) {
    if (e.weight.symbolic()) {
      total.add(*e.weight.symbolic());
    } else if (!e.weight.is_zero()) {
      return std::nullopt;
    }
  }
  return total;
}

std::optional<bool> exact_restricted_isothermal(const WeightedGraph& g, std::span<const VertexId> X) {
  const std::vector<VertexId> xs = sorted_members(g.n(), X);
  std::vector<char> member(g.n(), 0);
  for (VertexId x : xs) member[x] = 1;

  std::optional<SymbolicSum> common;
  for (VertexId u : xs) {
    auto total = symbolic_total_weight(g, u);
    if (!total) return std::nullopt;
    if (!common) {
      common = std::move(total);
    } else if (!(*common == *total)) {
      return std::nullopt;
    }
  }

  // With a common total D, T|X(u) = N(u) / D where N(u) collects the
  // restricted weights entering u.
  for (VertexId u : xs) {
    SymbolicSum incoming;
    for (const Edge& e : g.edges(u)) {
      if (e.target == u || !member[e.target]) {
        if (e.weight.symbolic()) incoming.add(*e.weight.symbolic());
      }
    }
    for (VertexId v : xs) {
      if (v == u) continue;
      const EdgeWeight w = g.weight(v, u);
      if (w.symbolic()) {
        incoming.add(*w.symbolic());
      } else if (!w.is_zero()) {
        return std::nullopt;
      }
    }
    if (!(incoming == *common)) return false;
  }
  return true;
}

bool structurally_connected(const WeightedGraph& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<VertexId>> adj(n);
  for (VertexId u = 0; u < n; ++u) {
    for (const Edge& e : g.edges(u)) {
      if (e.target == u) continue;
      adj[u].push_back(e.target);
      adj[e.target].push_back(u);
    }
  }
  std::vector<char> seen(n, 0);
  std::queue<VertexId> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    for (VertexId v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

bool strongly_connected(const WeightedGraph& g) {
  const std::size_t n = g.n();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (const Arc& a : forward ? g.out_arcs(u) : g.in_arcs(u)) {
        if (!seen[a.vertex]) {
          seen[a.vertex] = 1;
          ++count;
          stack.push_back(a.vertex);
        }
      }
    }
    return count == n;
  };
  return reach_all(true) && reach_all(false);
}

int out_degree(const WeightedGraph& g, VertexId u) { return static_cast<int>(g.out_arcs(u).size()); }

int in_degree(const WeightedGraph& g, VertexId u) { return static_cast<int>(g.in_arcs(u).size()); }

}  // namespace moran
