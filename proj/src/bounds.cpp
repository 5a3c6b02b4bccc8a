#include "moran/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "moran/errors.hpp"
#include "moran/exact.hpp"

namespace moran {

namespace {

void require_r(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw InputError("bound requires r >= 1");
}

void require_c(int c) {
  if (c < 1) throw InputError("bound requires degree c >= 1");
}

}  // namespace

double temp_bound_selfloopfree(double r) {
  require_r(r);
  return 1.0 - 1.0 / (r + 1.0);
}

double temp_bound_unweighted(double r) {
  require_r(r);
  return 1.0 - 1.0 / (4.0 * r + 2.0);
}

double uniform_bound_selfloopfree(double r, int c) {
  require_r(r);
  require_c(c);
  const double cd = c;
  return 1.0 - 1.0 / (cd + r * cd * cd);
}

double uniform_bound_unweighted(double r, int c) {
  require_r(r);
  require_c(c);
  return 1.0 - 1.0 / (1.0 + r * c);
}

VertexBound vertex_upper_bound(const WeightedGraph& g, VertexId u, double r) {
  if (!(r > 0.0)) throw InputError("fitness r must be positive");
  if (u >= g.n()) throw InputError("vertex out of range");
  const double fitness = r + static_cast<double>(g.n()) - 1.0;
  double out = 0.0;
  for (const Arc& a : g.out_arcs(u)) {
    if (a.vertex != u) out += a.prob;
  }
  double in = 0.0;
  for (const Arc& a : g.in_arcs(u)) {
    if (a.vertex != u) in += a.prob;
  }
  VertexBound vb;
  vb.u = u;
  vb.x = r * out / fitness;
  vb.y = in / fitness;
  vb.bound = three_state_bound(vb.x, vb.y);
  return vb;
}

double t_prime(const WeightedGraph& g, VertexId u) {
  if (!g.unweighted()) throw InputError("t_prime needs an unweighted graph");
  if (u >= g.n()) throw InputError("vertex out of range");
  double t = 0.0;
  for (const Arc& a : g.in_arcs(u)) {
    if (a.vertex != u) t += 1.0 / static_cast<double>(out_degree(g, a.vertex));
  }
  return t;
}

std::vector<VertexId> hot_vertices(const WeightedGraph& g) {
  if (!g.self_loop_free()) throw InputError("hot_vertices needs a self-loop-free graph");
  const int c = classify(g).max_degree;
  const double gamma = 1.0 / c;
  std::vector<char> hot(g.n(), 0);
  for (VertexId u = 0; u < g.n(); ++u) {
    for (const Arc& a : g.out_arcs(u)) {
      if (a.prob >= gamma * (1.0 - 1e-12)) hot[a.vertex] = 1;
    }
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.n(); ++v) {
    if (hot[v]) out.push_back(v);
  }
  return out;
}

BoundsReport bounds_report(const WeightedGraph& g, double r) {
  BoundsReport rep;
  rep.flags = classify(g);
  rep.r = r;
  if (r >= 1.0) {
    const int c = rep.flags.max_degree;
    if (rep.flags.self_loop_free) rep.applicable.push_back({1, "temperature", std::nullopt, temp_bound_selfloopfree(r)});
    if (rep.flags.unweighted) rep.applicable.push_back({2, "temperature", std::nullopt, temp_bound_unweighted(r)});
    if (rep.flags.self_loop_free) rep.applicable.push_back({3, "uniform", c, uniform_bound_selfloopfree(r, c)});
    if (rep.flags.unweighted) rep.applicable.push_back({4, "uniform", c, uniform_bound_unweighted(r, c)});
  }
  for (VertexId u = 0; u < g.n(); ++u) rep.per_vertex.push_back(vertex_upper_bound(g, u, r));
  return rep;
}

std::string to_json(const BoundsReport& report, int indent) {
  nlohmann::ordered_json j;
  j["flags"] = {{"self_loop_free", report.flags.self_loop_free},
                {"unweighted", report.flags.unweighted},
                {"undirected", report.flags.undirected},
                {"max_degree", report.flags.max_degree}};
  j["r"] = report.r;
  j["applicable"] = nlohmann::ordered_json::array();
  for (const TheoremBound& t : report.applicable) {
    nlohmann::ordered_json row{{"theorem", t.theorem}, {"scheme", t.scheme}};
    row["c"] = t.degree ? nlohmann::ordered_json(*t.degree) : nlohmann::ordered_json(nullptr);
    row["bound"] = t.bound;
    j["applicable"].push_back(row);
  }
  j["per_vertex"] = nlohmann::ordered_json::array();
  for (const VertexBound& v : report.per_vertex) {
    j["per_vertex"].push_back({{"u", v.u}, {"x", v.x}, {"y", v.y}, {"bound", v.bound}});
  }
  return j.dump(indent);
}

}  // namespace moran
