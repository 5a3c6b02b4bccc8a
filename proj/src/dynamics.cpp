#include "moran/dynamics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <queue>

#include "moran/errors.hpp"
#include "moran/log_math.hpp"

namespace moran {

namespace {

constexpr double kTwinTol = 1e-12;
constexpr std::size_t kCacheCap = 200000;
constexpr std::size_t kDenseCap = 4'000'000;

bool close_log2(double a, double b) {
  if (is_log2_zero(a) || is_log2_zero(b)) return a == b;
  return std::abs(a - b) <= kTwinTol;
}

// Arcs of `arcs` with endpoints outside {a, b}.
bool same_arcs_except(std::span<const Arc> x, std::span<const Arc> y, VertexId a, VertexId b) {
  auto skip = [&](std::span<const Arc> s, std::size_t i) {
    while (i < s.size() && (s[i].vertex == a || s[i].vertex == b)) ++i;
    return i;
  };
  std::size_t i = skip(x, 0);
  std::size_t j = skip(y, 0);
  while (i < x.size() && j < y.size()) {
    if (x[i].vertex != y[j].vertex || !close_log2(x[i].log2_prob, y[j].log2_prob)) return false;
    i = skip(x, i + 1);
    j = skip(y, j + 1);
  }
  return i == x.size() && j == y.size();
}

bool are_twins(const WeightedGraph& g, VertexId u, VertexId v) {
  if (!close_log2(g.log2_transition(u, u), g.log2_transition(v, v))) return false;
  if (!close_log2(g.log2_transition(u, v), g.log2_transition(v, u))) return false;
  return same_arcs_except(g.out_arcs(u), g.out_arcs(v), u, v) && same_arcs_except(g.in_arcs(u), g.in_arcs(v), u, v);
}

std::vector<std::uint32_t> neighbourhood_key(const WeightedGraph& g, VertexId u, bool closed) {
  std::vector<std::uint32_t> key;
  auto append = [&](std::span<const Arc> arcs) {
    bool placed = !closed;
    for (const Arc& a : arcs) {
      if (a.vertex == u) continue;
      if (!placed && a.vertex > u) {
        key.push_back(u);
        placed = true;
      }
      key.push_back(a.vertex);
    }
    if (!placed) key.push_back(u);
    key.push_back(UINT32_MAX);
  };
  append(g.out_arcs(u));
  append(g.in_arcs(u));
  return key;
}

std::vector<std::uint32_t> twin_classes(const WeightedGraph& g) {
  const std::size_t n = g.n();
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Twins share either their open or their closed neighbourhood.
  for (bool closed : {false, true}) {
    std::map<std::vector<std::uint32_t>, std::vector<VertexId>> groups;
    for (VertexId u = 0; u < n; ++u) groups[neighbourhood_key(g, u, closed)].push_back(u);
    for (const auto& [key, members] : groups) {
      if (members.size() < 2) continue;
      std::vector<VertexId> reps;
      for (VertexId u : members) {
        bool merged = false;
        for (VertexId rep : reps) {
          if (are_twins(g, rep, u)) {
            parent[find(u)] = find(rep);
            merged = true;
            break;
          }
        }
        if (!merged) reps.push_back(u);
      }
    }
  }
  std::vector<std::uint32_t> cls(n);
  std::vector<std::int64_t> id_of_root(n, -1);
  std::uint32_t next = 0;
  for (VertexId u = 0; u < n; ++u) {
    const std::uint32_t root = find(u);
    if (id_of_root[root] < 0) id_of_root[root] = next++;
    cls[u] = static_cast<std::uint32_t>(id_of_root[root]);
  }
  return cls;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s < a ? UINT64_MAX : s;
}

// Number of full-chain steps spent in a state whose per-step probability of
// a configuration change is p (at least one).
std::uint64_t holding_steps(double log2_p, Rng& rng) {
  const double u = rng.uniform_pos();
  if (log2_p >= 0.0) return 1;
  const double p = std::exp2(log2_p);
  const double denom = p > 1e-8 ? std::log1p(-p) : -p;
  if (denom == 0.0) return UINT64_MAX;
  const double t = std::ceil(std::log(u) / denom);
  if (!(t < 1.8e19)) return UINT64_MAX;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(t));
}

VertexId sample_row(std::span<const Arc> arcs, Rng& rng) {
  double x = rng.uniform();
  for (const Arc& a : arcs) {
    if (x < a.prob) return a.vertex;
    x -= a.prob;
  }
  return arcs.back().vertex;
}

}  // namespace

InitScheme InitScheme::convex(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InputError("convex initialization needs eta in [0,1]");
  return {Kind::Convex, eta};
}

InitScheme InitScheme::parse(std::string_view text) {
  if (text == "uniform") return uniform();
  if (text == "temperature") return temperature();
  constexpr std::string_view prefix = "convex:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string rest(text.substr(prefix.size()));
    std::size_t used = 0;
    double eta = 0.0;
    try {
      eta = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) throw InputError("bad convex parameter: " + rest);
    return convex(eta);
  }
  throw InputError("unknown scheme: " + std::string(text));
}

std::string InitScheme::str() const {
  switch (kind) {
    case Kind::Uniform:
      return "uniform";
    case Kind::Temperature:
      return "temperature";
    case Kind::Convex: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "convex:%.12g", eta);
      return buf;
    }
  }
  return "uniform";
}

const char* to_string(Mode m) { return m == Mode::Full ? "full" : "jump"; }

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Fixed:
      return "fixed";
    case Outcome::Extinct:
      return "extinct";
    case Outcome::Timeout:
      return "timeout";
  }
  return "timeout";
}

Mode parse_mode(std::string_view text) {
  if (text == "full") return Mode::Full;
  if (text == "jump") return Mode::Jump;
  throw InputError("unknown mode: " + std::string(text));
}

double total_fitness(const Configuration& s, double r, std::size_t n) {
  const double k = static_cast<double>(s.count());
  return r * k + static_cast<double>(n) - k;
}

Configuration step(const WeightedGraph& g, const Configuration& s, double r, Rng& rng) {
  if (!(r > 0.0)) throw InputError("fitness r must be positive");
  const std::size_t n = g.n();
  if (s.n() != n) throw InputError("configuration size does not match graph");
  if (s.is_absorbing()) return s;
  const std::size_t k = s.count();
  const double x = rng.uniform() * total_fitness(s, r, n);
  const bool mutant_born = x < r * static_cast<double>(k);
  std::size_t idx = mutant_born ? static_cast<std::size_t>(x / r) : static_cast<std::size_t>(x - r * static_cast<double>(k));
  idx = std::min(idx, (mutant_born ? k : n - k) - 1);
  VertexId u = 0;
  for (VertexId w = 0; w < n; ++w) {
    if (s.contains(w) != mutant_born) continue;
    if (idx-- == 0) {
      u = w;
      break;
    }
  }
  const VertexId v = sample_row(g.out_arcs(u), rng);
  Configuration next = s;
  next.set(v, mutant_born);
  return next;
}

Configuration jump_step(const WeightedGraph& g, const Configuration& s, double r, Rng& rng) {
  if (!(r > 0.0)) throw InputError("fitness r must be positive");
  if (s.n() != g.n()) throw InputError("configuration size does not match graph");
  if (s.is_absorbing()) throw InputError("jump_step needs a non-absorbing configuration");
  const double log2_r = std::log2(r);
  std::vector<std::pair<VertexId, VertexId>> moves;
  std::vector<double> logs;
  for (VertexId u = 0; u < g.n(); ++u) {
    const bool mu = s.contains(u);
    for (const Arc& a : g.out_arcs(u)) {
      if (s.contains(a.vertex) == mu) continue;
      moves.emplace_back(u, a.vertex);
      logs.push_back(a.log2_prob + (mu ? log2_r : 0.0));
    }
  }
  if (moves.empty()) throw StructuralError("no configuration-changing transition has positive weight");
  const double hi = *std::max_element(logs.begin(), logs.end());
  double total = 0.0;
  for (double& l : logs) {
    l = std::exp2(l - hi);
    total += l;
  }
  double x = rng.uniform() * total;
  std::size_t pick = moves.size() - 1;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (x < logs[i]) {
      pick = i;
      break;
    }
    x -= logs[i];
  }
  Configuration next = s;
  next.set(moves[pick].second, s.contains(moves[pick].first));
  return next;
}

std::vector<double> initial_distribution(const WeightedGraph& g, const InitScheme& scheme) {
  const std::size_t n = g.n();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  if (scheme.kind == InitScheme::Kind::Uniform) return p;
  const double eta = scheme.kind == InitScheme::Kind::Temperature ? 1.0 : scheme.eta;
  const std::vector<double> t = temperatures(g);
  const double total = std::accumulate(t.begin(), t.end(), 0.0);
  for (std::size_t u = 0; u < n; ++u) p[u] = (1.0 - eta) * p[u] + eta * t[u] / total;
  return p;
}

Configuration sample_initial(const WeightedGraph& g, const InitScheme& scheme, Rng& rng) {
  const std::vector<double> p = initial_distribution(g, scheme);
  double x = rng.uniform();
  VertexId pick = static_cast<VertexId>(p.size() - 1);
  for (VertexId u = 0; u < p.size(); ++u) {
    if (x < p[u]) {
      pick = u;
      break;
    }
    x -= p[u];
  }
  return Configuration::singleton(g.n(), pick);
}

LumpedChain::LumpedChain(const WeightedGraph& g, double r, bool lump) : n_(g.n()), r_(r), log2_r_(std::log2(r)) {
  if (!(r > 0.0)) throw InputError("fitness r must be positive");
  if (lump) {
    class_of_ = twin_classes(g);
  } else {
    class_of_.resize(n_);
    std::iota(class_of_.begin(), class_of_.end(), 0u);
  }
  const std::size_t k = *std::max_element(class_of_.begin(), class_of_.end()) + 1;
  size_.assign(k, 0);
  std::vector<VertexId> rep(k, 0);
  for (VertexId u = n_; u-- > 0;) {
    ++size_[class_of_[u]];
    rep[class_of_[u]] = u;
  }
  in_.assign(k, {});
  out_.assign(k, {});
  for (std::size_t d = 0; d < k; ++d) {
    const VertexId y = rep[d];
    for (const Arc& a : g.in_arcs(y)) {
      if (a.vertex == y) continue;
      const std::uint32_t c = class_of_[a.vertex];
      auto it = std::find_if(in_[d].begin(), in_[d].end(), [&](const InBlock& b) { return b.from == c; });
      if (it == in_[d].end()) in_[d].push_back({c, a.log2_prob});
    }
    for (const InBlock& b : in_[d]) {
      if (b.from != d) out_[b.from].push_back(static_cast<std::uint32_t>(d));
    }
  }
}

double LumpedChain::log2_up(std::span<const std::uint32_t> k, std::size_t c) const {
  const std::uint32_t residents = size_[c] - k[c];
  if (residents == 0) return kLog2Zero;
  Log2Accumulator acc;
  for (const InBlock& b : in_[c]) {
    const std::uint32_t sources = k[b.from];
    if (sources > 0) acc.add(std::log2(static_cast<double>(sources)) + b.log2_w);
  }
  const double s = acc.value();
  if (is_log2_zero(s)) return kLog2Zero;
  return log2_r_ + std::log2(static_cast<double>(residents)) + s;
}

double LumpedChain::log2_down(std::span<const std::uint32_t> k, std::size_t c) const {
  if (k[c] == 0) return kLog2Zero;
  Log2Accumulator acc;
  for (const InBlock& b : in_[c]) {
    const std::uint32_t sources = size_[b.from] - k[b.from];
    if (sources > 0) acc.add(std::log2(static_cast<double>(sources)) + b.log2_w);
  }
  const double s = acc.value();
  if (is_log2_zero(s)) return kLog2Zero;
  return std::log2(static_cast<double>(k[c])) + s;
}

Simulator::Simulator(const WeightedGraph& g, double r, SimulationOptions opt)
    : graph_(&g), r_(r), opt_(opt), chain_(std::make_shared<LumpedChain>(g, r, opt.lump && opt.mode == Mode::Jump)) {
  if (opt_.max_steps == 0) throw InputError("max_steps must be positive");
  if (opt_.mode == Mode::Full) {
    cumulative_rows_.resize(g.n());
    for (VertexId u = 0; u < g.n(); ++u) {
      double c = 0.0;
      for (const Arc& a : g.out_arcs(u)) cumulative_rows_[u].push_back(c += a.prob);
    }
  }
  if (opt_.mode == Mode::Jump && opt_.basin_limit > 0) {
    if (!(opt_.basin_threshold > 0.0 && opt_.basin_threshold <= 1.0)) throw InputError("basin threshold must be in (0,1]");
    radix_.resize(chain_->classes());
    std::uint64_t acc = 1;
    encodable_ = true;
    for (std::size_t c = 0; c < chain_->classes(); ++c) {
      radix_[c] = acc;
      if (__builtin_mul_overflow(acc, std::uint64_t{chain_->class_size(c)} + 1, &acc) || acc > (std::uint64_t{1} << 62)) {
        encodable_ = false;
        break;
      }
    }
  }
}

TrajectoryOutcome Simulator::run(const Configuration& s0, Rng& rng) {
  if (s0.n() != graph_->n()) throw InputError("configuration size does not match graph");
  if (opt_.mode == Mode::Full) return run_full(s0, rng);
  if (opt_.basin_limit > 0 && encodable_) return run_basin(s0, rng);
  return run_jump(s0, rng);
}

std::vector<std::uint32_t> Simulator::counts_of(const Configuration& s) const {
  std::vector<std::uint32_t> k(chain_->classes(), 0);
  for (VertexId u : s.members()) ++k[chain_->class_of(u)];
  return k;
}

bool Simulator::absorbing(std::span<const std::uint32_t> k) const {
  std::size_t m = 0;
  for (std::uint32_t x : k) m += x;
  return m == 0 || m == chain_->n();
}

TrajectoryOutcome Simulator::run_full(const Configuration& s0, Rng& rng) const {
  const WeightedGraph& g = *graph_;
  const std::size_t n = g.n();
  TrajectoryOutcome out;
  std::vector<int> mutant(n, 0);
  std::vector<VertexId> lists[2];
  std::vector<std::uint32_t> slot(n);
  for (VertexId u = 0; u < n; ++u) {
    mutant[u] = s0.contains(u);
    slot[u] = static_cast<std::uint32_t>(lists[mutant[u]].size());
    lists[mutant[u]].push_back(u);
  }
  auto move = [&](VertexId v, int to) {
    auto& from = lists[1 - to];
    const VertexId last = from.back();
    from[slot[v]] = last;
    slot[last] = slot[v];
    from.pop_back();
    slot[v] = static_cast<std::uint32_t>(lists[to].size());
    lists[to].push_back(v);
    mutant[v] = to;
  };
  for (;;) {
    const std::size_t k = lists[1].size();
    if (k == 0 || k == n) {
      out.result = k == 0 ? Outcome::Extinct : Outcome::Fixed;
      return out;
    }
    if (out.steps_full_chain >= opt_.max_steps) {
      out.result = Outcome::Timeout;
      return out;
    }
    ++out.steps_full_chain;
    const double mutant_mass = r_ * static_cast<double>(k);
    const double x = rng.uniform() * (mutant_mass + static_cast<double>(n - k));
    const int type = x < mutant_mass ? 1 : 0;
    const std::size_t idx = type ? static_cast<std::size_t>(x / r_) : static_cast<std::size_t>(x - mutant_mass);
    const VertexId u = lists[type][std::min(idx, lists[type].size() - 1)];
    const auto& cum = cumulative_rows_[u];
    const double y = rng.uniform() * cum.back();
    const std::size_t j = std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), y) - cum.begin(), cum.size() - 1);
    const VertexId v = g.out_arcs(u)[j].vertex;
    if (mutant[v] != type) {
      move(v, type);
      ++out.steps_jump_chain;
    }
  }
}

TrajectoryOutcome Simulator::run_jump(const Configuration& s0, Rng& rng) const {
  const LumpedChain& ch = *chain_;
  const std::size_t n = ch.n();
  TrajectoryOutcome out;
  std::vector<std::uint32_t> k = counts_of(s0);
  std::size_t m = s0.count();
  BinnedSampler sampler(2 * ch.classes());
  auto refresh = [&](std::size_t c) {
    sampler.set(2 * c, ch.log2_up(k, c));
    sampler.set(2 * c + 1, ch.log2_down(k, c));
  };
  for (std::size_t c = 0; c < ch.classes(); ++c) refresh(c);
  for (;;) {
    if (m == 0 || m == n) {
      out.result = m == 0 ? Outcome::Extinct : Outcome::Fixed;
      return out;
    }
    if (out.steps_jump_chain >= opt_.max_steps) {
      out.result = Outcome::Timeout;
      return out;
    }
    if (sampler.empty()) throw StructuralError("no configuration-changing transition has positive weight");
    const double fitness = r_ * static_cast<double>(m) + static_cast<double>(n - m);
    out.steps_full_chain = saturating_add(out.steps_full_chain, holding_steps(sampler.log2_total() - std::log2(fitness), rng));
    const std::size_t ev = sampler.sample(rng);
    const std::size_t c = ev / 2;
    if (ev % 2 == 0) {
      ++k[c];
      ++m;
    } else {
      --k[c];
      --m;
    }
    ++out.steps_jump_chain;
    refresh(c);
    for (std::uint32_t d : ch.out_classes(c)) refresh(d);
  }
}

std::uint64_t Simulator::encode(std::span<const std::uint32_t> k) const {
  std::uint64_t key = 0;
  for (std::size_t c = 0; c < k.size(); ++c) key += radix_[c] * k[c];
  return key;
}

void Simulator::decode(std::uint64_t key, std::vector<std::uint32_t>& k) const {
  k.resize(radix_.size());
  for (std::size_t c = radix_.size(); c-- > 0;) {
    k[c] = static_cast<std::uint32_t>(key / radix_[c]);
    key %= radix_[c];
  }
}

void Simulator::moves(std::span<const std::uint32_t> k, std::vector<std::pair<std::uint32_t, double>>& out) const {
  out.clear();
  for (std::size_t c = 0; c < chain_->classes(); ++c) {
    const double up = chain_->log2_up(k, c);
    if (!is_log2_zero(up)) out.emplace_back(static_cast<std::uint32_t>(2 * c), up);
    const double down = chain_->log2_down(k, c);
    if (!is_log2_zero(down)) out.emplace_back(static_cast<std::uint32_t>(2 * c + 1), down);
  }
}

const Simulator::ExitTable& Simulator::exits_from(std::uint64_t key) {
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (cache_.size() >= kCacheCap) cache_.clear();
  ExitTable& table = cache_[key];

  struct Row {
    std::vector<std::pair<std::uint64_t, double>> moves;  // (target, probability)
  };
  std::vector<std::uint64_t> basin{key};
  std::unordered_map<std::uint64_t, std::size_t> index{{key, 0}};
  std::vector<Row> rows;
  std::vector<std::uint32_t> k;
  std::vector<std::pair<std::uint32_t, double>> buf;
  for (std::size_t i = 0; i < basin.size(); ++i) {
    decode(basin[i], k);
    moves(k, buf);
    if (buf.empty()) throw StructuralError("no configuration-changing transition has positive weight");
    double lt = kLog2Zero;
    {
      Log2Accumulator acc;
      for (const auto& mv : buf) acc.add(mv.second);
      lt = acc.value();
    }
    Row row;
    for (const auto& [ev, l] : buf) {
      const double p = std::exp2(l - lt);
      if (p < DBL_MIN) {
        table.plain = true;
        return table;
      }
      const std::size_t c = ev / 2;
      const std::uint64_t target = ev % 2 == 0 ? basin[i] + radix_[c] : basin[i] - radix_[c];
      row.moves.emplace_back(target, p);
      if (p < opt_.basin_threshold || index.count(target) || basin.size() >= opt_.basin_limit) continue;
      std::vector<std::uint32_t> kt = k;
      ev % 2 == 0 ? ++kt[c] : --kt[c];
      if (absorbing(kt)) continue;
      index.emplace(target, basin.size());
      basin.push_back(target);
    }
    rows.push_back(std::move(row));
  }
  const std::size_t m = basin.size();
  if (m == 1) {
    table.plain = true;
    return table;
  }

  std::vector<std::uint64_t> exit_keys;
  std::unordered_map<std::uint64_t, std::size_t> exit_index;
  for (const Row& row : rows) {
    for (const auto& [t, p] : row.moves) {
      if (!index.count(t) && !exit_index.count(t)) {
        exit_index.emplace(t, exit_keys.size());
        exit_keys.push_back(t);
      }
    }
  }
  const std::size_t e = exit_keys.size();
  if (m * (m + e) > kDenseCap) {
    table.plain = true;
    return table;
  }
  std::vector<double> A(m * m, 0.0);
  std::vector<double> X(m * e, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [t, p] : rows[i].moves) {
      if (auto it = index.find(t); it != index.end()) {
        A[i * m + it->second] += p;
      } else {
        X[i * e + exit_index.at(t)] += p;
      }
    }
  }

  // Censor the chain onto the start state one state at a time. Outflow
  // totals are formed as sums of positive terms, never as 1 - stay.
  std::vector<char> alive(m, 1);
  for (std::size_t kk = m; kk-- > 1;) {
    double out_mass = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (alive[j] && j != kk) out_mass += A[kk * m + j];
    }
    for (std::size_t j = 0; j < e; ++j) out_mass += X[kk * e + j];
    if (!(out_mass > 0.0)) throw StructuralError("basin state without outflow");
    for (std::size_t i = 0; i < m; ++i) {
      if (!alive[i] || i == kk) continue;
      const double a = A[i * m + kk];
      if (a == 0.0) continue;
      const double f = a / out_mass;
      A[i * m + kk] = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (alive[j] && j != kk && j != i) A[i * m + j] += f * A[kk * m + j];
      }
      for (std::size_t j = 0; j < e; ++j) X[i * e + j] += f * X[kk * e + j];
    }
    alive[kk] = 0;
  }

  double total = 0.0;
  for (std::size_t j = 0; j < e; ++j) total += X[j];
  if (!(total > 0.0) || !std::isfinite(total)) {
    table.plain = true;
    return table;
  }
  double run = 0.0;
  for (std::size_t j = 0; j < e; ++j) {
    if (X[j] <= 0.0) continue;
    run += X[j];
    table.targets.push_back(exit_keys[j]);
    table.cumulative.push_back(run);
  }
  return table;
}

TrajectoryOutcome Simulator::run_basin(const Configuration& s0, Rng& rng) {
  TrajectoryOutcome out;
  std::vector<std::uint32_t> k = counts_of(s0);
  std::uint64_t key = encode(k);
  std::vector<std::pair<std::uint32_t, double>> buf;
  const std::size_t n = chain_->n();
  for (;;) {
    std::size_t m = 0;
    for (std::uint32_t x : k) m += x;
    if (m == 0 || m == n) {
      out.result = m == 0 ? Outcome::Extinct : Outcome::Fixed;
      return out;
    }
    if (out.steps_jump_chain >= opt_.max_steps) {
      out.result = Outcome::Timeout;
      return out;
    }
    const ExitTable& table = exits_from(key);
    if (table.plain) {
      moves(k, buf);
      if (buf.empty()) throw StructuralError("no configuration-changing transition has positive weight");
      double hi = kLog2Zero;
      for (const auto& mv : buf) hi = std::max(hi, mv.second);
      double total = 0.0;
      for (auto& mv : buf) total += (mv.second = std::exp2(mv.second - hi));
      double x = rng.uniform() * total;
      std::size_t pick = buf.size() - 1;
      for (std::size_t i = 0; i < buf.size(); ++i) {
        if (x < buf[i].second) {
          pick = i;
          break;
        }
        x -= buf[i].second;
      }
      const std::size_t c = buf[pick].first / 2;
      if (buf[pick].first % 2 == 0) {
        ++k[c];
        key += radix_[c];
      } else {
        --k[c];
        key -= radix_[c];
      }
    } else {
      const double x = rng.uniform() * table.cumulative.back();
      const std::size_t j = std::min<std::size_t>(
          std::upper_bound(table.cumulative.begin(), table.cumulative.end(), x) - table.cumulative.begin(),
          table.cumulative.size() - 1);
      key = table.targets[j];
      decode(key, k);
    }
    ++out.steps_jump_chain;
  }
}

TrajectoryOutcome simulate(const WeightedGraph& g, const Configuration& s0, double r, Rng& rng, Mode mode,
                           std::uint64_t max_steps) {
  SimulationOptions opt;
  opt.mode = mode;
  opt.max_steps = max_steps;
  Simulator sim(g, r, opt);
  return sim.run(s0, rng);
}

}  // namespace moran
