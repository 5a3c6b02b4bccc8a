#include "moran/amplifier.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <queue>

#include "moran/errors.hpp"
#include "moran/log_math.hpp"

namespace moran {

namespace {

std::vector<std::vector<VertexId>> undirected_adjacency(const WeightedGraph& g) {
  std::vector<std::vector<VertexId>> adj(g.n());
  for (VertexId u = 0; u < g.n(); ++u) {
    for (const Edge& e : g.edges(u)) {
      if (e.target == u) continue;
      adj[u].push_back(e.target);
      adj[e.target].push_back(u);
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<VertexId>>& adj, VertexId src) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<VertexId> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    for (VertexId v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

SymbolicSum term(std::int64_t coefficient, int pow2, int pow_n) {
  SymbolicSum s;
  s.add(SymbolicTerm{Rational(coefficient), pow2, pow_n});
  return s;
}

}  // namespace

SpanningTree bfs_spanning_tree(const WeightedGraph& g, VertexId root) {
  const std::size_t n = g.n();
  if (root >= n) throw InputError("root vertex out of range");
  const auto adj = undirected_adjacency(g);
  SpanningTree t;
  t.root = root;
  t.parent.assign(n, -1);
  t.depth.assign(n, -1);
  t.children.assign(n, {});
  std::queue<VertexId> q;
  t.depth[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    t.order.push_back(u);
    for (VertexId v : adj[u]) {
      if (t.depth[v] >= 0) continue;
      t.depth[v] = t.depth[u] + 1;
      t.parent[v] = u;
      t.children[u].push_back(v);
      q.push(v);
    }
  }
  if (t.order.size() != n) throw StructuralError("graph is not connected; no spanning tree");
  return t;
}

std::vector<VertexId> partition_separator(const SpanningTree& t, long long threshold) {
  if (threshold < 1) throw InputError("separator threshold must be at least 1");
  const std::size_t n = t.parent.size();
  std::vector<long long> size(n, 1);
  std::vector<VertexId> S;
  for (std::size_t i = t.order.size(); i-- > 0;) {
    const VertexId u = t.order[i];
    if (size[u] > threshold) {
      S.push_back(u);
    } else if (t.parent[u] >= 0) {
      size[static_cast<std::size_t>(t.parent[u])] += size[u];
    }
  }
  return S;
}

std::vector<VertexId> build_hub(const SpanningTree& t, const std::vector<VertexId>& S, long long target) {
  const std::size_t n = t.parent.size();
  std::vector<char> in(n, 0);
  std::size_t count = 0;
  auto add = [&](VertexId v) {
    if (!in[v]) {
      in[v] = 1;
      ++count;
    }
  };
  add(t.root);
  for (VertexId s : S) {
    for (std::int64_t v = s; v >= 0 && !in[static_cast<std::size_t>(v)]; v = t.parent[static_cast<std::size_t>(v)]) {
      add(static_cast<VertexId>(v));
    }
  }
  const std::size_t goal = static_cast<std::size_t>(std::clamp<long long>(target, 1, static_cast<long long>(n)));
  std::queue<VertexId> q;
  for (VertexId u = 0; u < n; ++u) {
    if (!in[u]) continue;
    for (VertexId c : t.children[u]) {
      if (!in[c]) q.push(c);
    }
  }
  while (count < goal && !q.empty()) {
    const VertexId v = q.front();
    q.pop();
    if (in[v]) continue;
    add(v);
    for (VertexId c : t.children[v]) {
      if (!in[c]) q.push(c);
    }
  }
  std::vector<VertexId> H;
  for (VertexId u = 0; u < n; ++u) {
    if (in[u]) H.push_back(u);
  }
  return H;
}

AmplifierLayout compute_layout(const WeightedGraph& g, double epsilon, VertexId root) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must be in (0,1)");
  if (!g.undirected_symmetric()) throw InputError("construction needs symmetric (undirected) weights");
  const std::size_t n = g.n();
  for (VertexId u = 0; u < n; ++u) {
    if (!g.has_edge(u, u)) throw InputError("construction needs a self-loop at every vertex; vertex " + std::to_string(u) + " has none");
  }
  AmplifierLayout L;
  L.epsilon = epsilon;
  L.c = 2.0 * epsilon / 3.0;
  L.gamma = epsilon / 3.0;
  const double nd = static_cast<double>(n);
  L.threshold = ceil_pow(nd, 1.0 - L.c);
  L.hub_target = std::min<long long>(static_cast<long long>(n), ceil_pow(nd, 1.0 - L.gamma));
  L.tree = bfs_spanning_tree(g, root);
  L.separator = partition_separator(L.tree, L.threshold);
  L.hub = build_hub(L.tree, L.separator, L.hub_target);
  L.hub_oversized = static_cast<long long>(L.hub.size()) > L.hub_target;

  L.in_hub.assign(n, 0);
  for (VertexId u : L.hub) L.in_hub[u] = 1;
  const auto adj = undirected_adjacency(g);

  L.in_frontier.assign(n, 0);
  L.hub_degree.assign(n, 0);
  for (VertexId u : L.hub) {
    for (VertexId v : adj[u]) {
      if (L.in_hub[v]) {
        ++L.hub_degree[u];
      } else {
        L.in_frontier[u] = 1;
      }
    }
  }
  for (VertexId u : L.hub) {
    if (L.in_frontier[u]) L.frontier.push_back(u);
  }

  L.chl.assign(n, 0);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId c : L.tree.children[u]) {
      if (!L.in_hub[c]) ++L.chl[u];
    }
  }
  for (VertexId u : L.frontier) L.mu = std::max(L.mu, L.chl[u]);
  for (VertexId u : L.hub) L.nu = std::max(L.nu, L.hub_degree[u]);

  // Multi-source BFS from F along tree edges.
  L.lambda.assign(n, -1);
  std::queue<VertexId> q;
  for (VertexId u : L.frontier) {
    L.lambda[u] = 0;
    q.push(u);
  }
  while (!q.empty()) {
    const VertexId u = q.front();
    q.pop();
    auto visit = [&](VertexId v) {
      if (L.lambda[v] < 0) {
        L.lambda[v] = L.lambda[u] + 1;
        q.push(v);
      }
    };
    if (L.tree.parent[u] >= 0) visit(static_cast<VertexId>(L.tree.parent[u]));
    for (VertexId c : L.tree.children[u]) visit(c);
  }

  for (VertexId u : L.tree.order) {
    if (L.in_hub[u] || L.tree.parent[u] < 0 || !L.in_hub[static_cast<std::size_t>(L.tree.parent[u])]) continue;
    Branch b;
    b.root = u;
    std::vector<VertexId> stack{u};
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      b.members.push_back(v);
      for (VertexId c : L.tree.children[v]) stack.push_back(c);
    }
    std::sort(b.members.begin(), b.members.end());
    L.branches.push_back(std::move(b));
  }
  std::sort(L.branches.begin(), L.branches.end(), [](const Branch& a, const Branch& b) { return a.root < b.root; });
  return L;
}

WeightedGraph assign_weights(const WeightedGraph& g, const AmplifierLayout& L, std::optional<int> kappa) {
  const std::size_t n = g.n();
  if (L.in_hub.size() != n || L.tree.parent.size() != n) throw InputError("layout does not match graph size");
  if (!g.undirected_symmetric()) throw InputError("construction needs symmetric (undirected) weights");
  const int k2 = kappa.value_or(static_cast<int>(n));
  if (k2 < 0) throw InputError("kappa must be nonnegative");
  const double nd = static_cast<double>(n);

  auto is_parent = [&](VertexId p, VertexId c) { return L.tree.parent[c] == static_cast<std::int64_t>(p); };

  GraphBuilder b(n);
  for (VertexId u = 0; u < n; ++u) {
    for (const Edge& e : g.edges(u)) {
      const VertexId v = e.target;
      SymbolicSum w;
      if (u == v) {
        if (L.in_hub[u]) {
          const std::int64_t loops = L.in_frontier[u] ? L.mu - L.chl[u] : L.mu;
          const std::int64_t rest = static_cast<std::int64_t>(L.nu) - L.hub_degree[u];
          if (loops < 0 || rest < 0) throw StructuralError("negative self-loop weight at hub vertex " + std::to_string(u));
          w.add(SymbolicTerm{Rational(loops), k2, 0});
          w.add(SymbolicTerm{Rational(rest), 0, 0});
        } else {
          if (L.lambda[u] < 1) throw StructuralError("branch vertex " + std::to_string(u) + " has no frontier distance");
          w = term(1, 0, 2 * L.lambda[u]);
        }
      } else if (L.in_hub[u] && L.in_hub[v]) {
        w = term(1, 0, 0);
      } else if (is_parent(u, v) || is_parent(v, u)) {
        const VertexId p = is_parent(u, v) ? u : v;
        if (L.lambda[p] < 0) throw StructuralError("tree vertex " + std::to_string(p) + " has no frontier distance");
        w = term(1, k2, 4 * L.lambda[p]);
      }
      b.add_edge(u, v, EdgeWeight::from_terms(w, nd));
    }
  }
  return std::move(b).build();
}

int graph_diameter(const WeightedGraph& g) {
  const auto adj = undirected_adjacency(g);
  int diam = 0;
  for (VertexId s = 0; s < g.n(); ++s) {
    for (int d : bfs_distances(adj, s)) {
      if (d < 0) throw StructuralError("graph is not connected; diameter undefined");
      diam = std::max(diam, d);
    }
  }
  return diam;
}

bool check_diameter(const WeightedGraph& g, double epsilon) {
  const double limit = std::pow(static_cast<double>(g.n()), 1.0 - epsilon);
  return static_cast<double>(graph_diameter(g)) <= limit * (1.0 + 1e-12);
}

AmplifierCheck verify_amplifier(const WeightedGraph& weighted, const AmplifierLayout& L, std::optional<int> kappa) {
  const std::size_t n = weighted.n();
  const int k2 = kappa.value_or(static_cast<int>(n));
  AmplifierCheck c;
  SymbolicSum expected;
  expected.add(SymbolicTerm{Rational(L.mu), k2, 0});
  expected.add(SymbolicTerm{Rational(L.nu), 0, 0});
  c.hub_weight_identity = true;
  for (VertexId u : L.hub) {
    const auto total = symbolic_total_weight(weighted, u);
    if (!total || !(*total == expected)) c.hub_weight_identity = false;
  }
  c.hub_isothermal_exact = exact_restricted_isothermal(weighted, L.hub);
  const WeightedGraph sub = induced_subgraph(weighted, L.hub);
  for (double t : temperatures(sub)) c.hub_temperature_deviation = std::max(c.hub_temperature_deviation, std::abs(t - 1.0));
  const double nd = static_cast<double>(n);
  c.separator_size_ok = static_cast<long long>(L.separator.size()) <= ceil_pow(nd, L.c);
  const long long cap = ceil_pow(nd, 1.0 - L.c);
  c.branch_sizes_ok = true;
  std::size_t total = 0;
  for (const Branch& b : L.branches) {
    total += b.members.size();
    if (static_cast<long long>(b.members.size()) > cap) c.branch_sizes_ok = false;
  }
  c.branch_sum_ok = total + L.hub.size() == n;
  return c;
}

std::string layout_to_json(const AmplifierLayout& L, int indent) {
  nlohmann::ordered_json j;
  j["S"] = L.separator;
  j["H"] = L.hub;
  j["F"] = L.frontier;
  j["lambda"] = L.lambda;
  j["mu"] = L.mu;
  j["nu"] = L.nu;
  j["branches"] = nlohmann::ordered_json::array();
  for (const Branch& b : L.branches) j["branches"].push_back({{"root", b.root}, {"members", b.members}});
  j["root"] = L.tree.root;
  j["epsilon"] = L.epsilon;
  j["threshold"] = L.threshold;
  j["hub_target"] = L.hub_target;
  j["hub_oversized"] = L.hub_oversized;
  return j.dump(indent);
}

}  // namespace moran
