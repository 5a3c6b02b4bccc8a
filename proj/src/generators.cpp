#include "moran/generators.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "moran/errors.hpp"
#include "moran/log_math.hpp"
#include "moran/rng.hpp"

namespace moran {

namespace {

using json = nlohmann::json;

WeightedGraph from_pairs(std::size_t n, const std::set<std::pair<VertexId, VertexId>>& pairs, bool self_loops) {
  GraphBuilder b(n);
  const EdgeWeight one = EdgeWeight::from_value(1.0);
  for (const auto& [u, v] : pairs) b.add_undirected_edge(u, v, one);
  if (self_loops) {
    for (VertexId u = 0; u < n; ++u) b.add_edge(u, u, one);
  }
  return std::move(b).build();
}

void add_pair(std::set<std::pair<VertexId, VertexId>>& pairs, std::size_t u, std::size_t v) {
  if (u == v) return;
  pairs.emplace(static_cast<VertexId>(std::min(u, v)), static_cast<VertexId>(std::max(u, v)));
}

std::string where_edge(std::size_t i) { return "edges[" + std::to_string(i) + "]"; }

}  // namespace

Family parse_family(std::string_view name) {
  if (name == "complete") return Family::Complete;
  if (name == "star") return Family::Star;
  if (name == "cycle") return Family::Cycle;
  if (name == "grid") return Family::Grid;
  if (name == "random" || name == "random_connected") return Family::RandomConnected;
  throw InputError("unknown family: " + std::string(name));
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Complete:
      return "complete";
    case Family::Star:
      return "star";
    case Family::Cycle:
      return "cycle";
    case Family::Grid:
      return "grid";
    case Family::RandomConnected:
      return "random";
  }
  return "complete";
}

WeightedGraph generate(const FamilySpec& spec) {
  std::size_t n = spec.n;
  std::set<std::pair<VertexId, VertexId>> pairs;
  switch (spec.family) {
    case Family::Complete:
      if (n < 2) throw InputError("complete graph needs n >= 2");
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) add_pair(pairs, u, v);
      }
      break;
    case Family::Star:
      if (n < 2) throw InputError("star needs n >= 2");
      for (std::size_t v = 1; v < n; ++v) add_pair(pairs, 0, v);
      break;
    case Family::Cycle:
      if (n < 3) throw InputError("cycle needs n >= 3");
      for (std::size_t u = 0; u < n; ++u) add_pair(pairs, u, (u + 1) % n);
      break;
    case Family::Grid: {
      if (spec.rows == 0 || spec.cols == 0) throw InputError("grid needs rows >= 1 and cols >= 1");
      const std::size_t cells = spec.rows * spec.cols;
      if (n != 0 && n != cells) throw InputError("grid n must equal rows * cols");
      n = cells;
      if (n < 2) throw InputError("grid needs at least 2 vertices");
      auto id = [&](std::size_t i, std::size_t j) { return i * spec.cols + j; };
      for (std::size_t i = 0; i < spec.rows; ++i) {
        for (std::size_t j = 0; j < spec.cols; ++j) {
          if (j + 1 < spec.cols) add_pair(pairs, id(i, j), id(i, j + 1));
          if (i + 1 < spec.rows) add_pair(pairs, id(i, j), id(i + 1, j));
          if (spec.torus) {
            if (spec.cols > 2 && j + 1 == spec.cols) add_pair(pairs, id(i, j), id(i, 0));
            if (spec.rows > 2 && i + 1 == spec.rows) add_pair(pairs, id(i, j), id(0, j));
          }
        }
      }
      break;
    }
    case Family::RandomConnected: {
      if (n < 2) throw InputError("random graph needs n >= 2");
      if (!(spec.p > 0.0 && spec.p <= 1.0)) throw InputError("random graph needs p in (0,1]");
      Rng rng(derive_seed(spec.seed, 0));
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
          if (rng.uniform() < spec.p) add_pair(pairs, u, v);
        }
      }
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      for (std::size_t i = 1; i < n; ++i) add_pair(pairs, perm[i], perm[rng.below(i)]);
      break;
    }
  }
  return from_pairs(n, pairs, spec.self_loops);
}

WeightedGraph load_graph(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError("json", e.what());
  }
  if (!j.is_object()) throw ParseError("", "graph file must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    throw ParseError("n", "missing or not a positive integer");
  }
  const std::size_t n = j["n"].get<std::size_t>();
  auto flag = [&](const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw ParseError(key, "must be a boolean");
    return j[key].get<bool>();
  };
  const bool directed = flag("directed", true);
  const bool log_weights = flag("log_weights", false);
  const bool self_loops = flag("self_loops", true);
  if (!j.contains("edges") || !j["edges"].is_array()) throw ParseError("edges", "missing or not an array");

  GraphBuilder b(n);
  const auto& edges = j["edges"];
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string where = where_edge(i);
    if (!e.is_array() || e.size() < 3 || e.size() > 4) throw ParseError(where, "edge must be [u, v, weight] or [u, v, weight, terms]");
    if (!e[0].is_number_integer() || !e[1].is_number_integer()) throw ParseError(where, "endpoints must be integers");
    const long long u = e[0].get<long long>();
    const long long v = e[1].get<long long>();
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
      throw ParseError(where, "endpoint out of range for n = " + std::to_string(n));
    }
    if (u == v && !self_loops) throw ParseError(where, "self-loop in a graph declared without self-loops");
    double l = kLog2Zero;
    if (log_weights) {
      if (e[2].is_string() && e[2].get<std::string>() == "-inf") {
        l = kLog2Zero;
      } else if (e[2].is_number()) {
        l = e[2].get<double>();
        if (!std::isfinite(l)) throw ParseError(where, "log weight must be finite or \"-inf\"");
      } else {
        throw ParseError(where, "log weight must be a number or \"-inf\"");
      }
    } else {
      if (!e[2].is_number()) throw ParseError(where, "weight must be a number");
      const double w = e[2].get<double>();
      if (!(w >= 0.0) || !std::isfinite(w)) throw ParseError(where, "negative or non-finite weight");
      l = w == 0.0 ? kLog2Zero : std::log2(w);
    }
    std::optional<SymbolicSum> terms;
    if (e.size() == 4) {
      if (!e[3].is_array()) throw ParseError(where, "terms must be an array");
      SymbolicSum s;
      for (const auto& t : e[3]) {
        if (!t.is_array() || t.size() != 4) throw ParseError(where, "term must be [num, den, pow2, pow_n]");
        for (const auto& x : t) {
          if (!x.is_number_integer()) throw ParseError(where, "term entries must be integers");
        }
        try {
          s.add(SymbolicTerm{Rational(t[0].get<std::int64_t>(), t[1].get<std::int64_t>()), t[2].get<int>(), t[3].get<int>()});
        } catch (const Error& ex) {
          throw ParseError(where, ex.what());
        }
      }
      terms = std::move(s);
    }
    const EdgeWeight w = EdgeWeight::from_parts(l, std::move(terms));
    try {
      if (directed) {
        b.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), w);
      } else {
        b.add_undirected_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), w);
      }
    } catch (const InputError& ex) {
      throw ParseError(where, ex.what());
    }
  }
  try {
    return std::move(b).build();
  } catch (const StructuralError& ex) {
    throw ParseError("edges", ex.what());
  }
}

std::string save_graph(const WeightedGraph& g) {
  // Listing pairs once is only lossless when both directions match bit for bit.
  bool undirected = true;
  for (VertexId u = 0; u < g.n() && undirected; ++u) {
    for (const Edge& e : g.edges(u)) {
      const EdgeWeight back = g.weight(e.target, u);
      if (!g.has_edge(e.target, u) || !(back.log2() == e.weight.log2()) || back.symbolic() != e.weight.symbolic()) {
        undirected = false;
        break;
      }
    }
  }
  bool loops = false;
  for (VertexId u = 0; u < g.n(); ++u) loops = loops || g.has_edge(u, u);
  std::ostringstream os;
  os << "{\n  \"n\": " << g.n() << ",\n  \"directed\": " << (undirected ? "false" : "true")
     << ",\n  \"self_loops\": " << (loops ? "true" : "false") << ",\n  \"log_weights\": true,\n  \"edges\": [";
  bool first = true;
  for (VertexId u = 0; u < g.n(); ++u) {
    for (const Edge& e : g.edges(u)) {
      if (undirected && e.target < u) continue;
      json row = json::array({u, e.target});
      if (e.weight.is_zero()) {
        row.push_back("-inf");
      } else {
        row.push_back(e.weight.log2());
      }
      if (e.weight.symbolic()) {
        json terms = json::array();
        for (const SymbolicTerm& t : e.weight.symbolic()->terms()) {
          terms.push_back({t.coefficient.num(), t.coefficient.den(), t.pow2, t.pow_n});
        }
        row.push_back(terms);
      }
      os << (first ? "\n    " : ",\n    ") << row.dump();
      first = false;
    }
  }
  os << "\n  ]\n}\n";
  return os.str();
}

WeightedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_graph(ss.str());
}

void save_graph_file(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << save_graph(g);
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace moran
