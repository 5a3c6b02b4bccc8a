// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Runtime limits count toward the verdict.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fmt/core.h>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "moran/amplifier.hpp"
#include "moran/errors.hpp"
#include "moran/estimator.hpp"
#include "moran/exact.hpp"
#include "moran/generators.hpp"
#include "support/oracles.hpp"

using namespace moran;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

constexpr double kZ99 = 2.5758293035489004;

std::vector<WeightedGraph> corpus(const char* name) { return oracle::load_corpus(std::string(MORAN_TEST_DATA "/") + name); }

std::vector<double> ranks(std::initializer_list<double> xs) { return xs; }

// Positive-weight degree, self-loops included, from raw weights.
int max_degree(const oracle::Matrix& w) {
  int best = 0;
  for (std::size_t u = 0; u < w.size(); ++u) {
    int out = 0;
    int in = 0;
    for (std::size_t v = 0; v < w.size(); ++v) {
      out += w[u][v] > 0.0;
      in += w[v][u] > 0.0;
    }
    best = std::max({best, out, in});
  }
  return best;
}

bool self_loop_free(const oracle::Matrix& w) {
  for (std::size_t u = 0; u < w.size(); ++u) {
    if (w[u][u] > 0.0) return false;
  }
  return true;
}

bool unweighted(const oracle::Matrix& w) {
  for (const auto& row : w) {
    for (double x : row) {
      if (x != 0.0 && x != 1.0) return false;
    }
  }
  return true;
}

WeightedGraph undirected_graph(std::size_t n, const std::vector<std::pair<int, int>>& edges, bool loops) {
  GraphBuilder b(n);
  for (const auto& [u, v] : edges) b.add_undirected_edge(u, v, EdgeWeight::from_value(1.0));
  if (loops) {
    for (VertexId u = 0; u < n; ++u) b.add_edge(u, u, EdgeWeight::from_value(1.0));
  }
  return std::move(b).build();
}

long long ceil_pow_ref(double n, double e) { return static_cast<long long>(std::ceil(std::pow(n, e) - 1e-9)); }

Verdict c1_well_mixed() {
  double worst = 0.0;
  for (std::size_t n = 2; n <= 10; ++n) {
    const WeightedGraph g = generate({Family::Complete, n, false});
    for (double r : ranks({0.5, 1.0, 1.5, 2.0})) {
      const double closed = well_mixed_closed_form(n, r);
      worst = std::max(worst, std::abs(closed - oracle::well_mixed(n, r)));
      for (double x : fixation_vector(g, r)) worst = std::max(worst, std::abs(x - closed));
    }
  }
  return {worst <= 1e-9, fmt::format("max deviation {:.3g} over n=2..10, 4 values of r (tol 1e-9)", worst)};
}

Verdict c2_jump_equivalence() {
  const auto graphs = corpus("with_self_loops.json");
  double worst = 0.0;
  const double rs[] = {0.5, 1.0, 1.5, 2.0, 3.0};
  for (std::size_t i = 0; i < 20; ++i) {
    const double r = rs[i % 5];
    const auto jump = fixation_all_states(graphs[i], r, kDefaultExactLimit, ChainKind::Jump);
    const auto full = fixation_all_states(graphs[i], r, kDefaultExactLimit, ChainKind::Full);
    for (std::size_t s = 0; s < jump.size(); ++s) worst = std::max(worst, std::abs(jump[s] - full[s]));
  }
  return {worst <= 1e-10, fmt::format("20 graphs with self-loops, all configurations: max |full - jump| = {:.3g} (tol 1e-10)", worst)};
}

Verdict c3_calibration() {
  const auto graphs = corpus("with_self_loops.json");
  const double rs[] = {0.8, 1.2, 1.5, 2.0, 3.0};
  const InitScheme schemes[] = {InitScheme::uniform(), InitScheme::temperature(), InitScheme::convex(0.4)};
  int inside = 0;
  std::string misses;
  for (std::size_t i = 0; i < 20; ++i) {
    const WeightedGraph& g = graphs[20 + i];
    const double r = rs[i % 5];
    const InitScheme& scheme = schemes[i % 3];
    const oracle::Matrix w = oracle::raw_weights(g);
    const std::vector<double> rho = oracle::fixation_vector(w, r);
    const double u = oracle::uniform_value(rho);
    const double t = oracle::temperature_value(w, rho);
    const double exact = (1.0 - scheme.eta) * u + scheme.eta * t;
    EstimateOptions opt;
    const FixationEstimate e = estimate_fixation(g, r, scheme, 100000, 1000 + i, opt);
    if (e.wilson99.lo <= exact && exact <= e.wilson99.hi && e.timeouts == 0) {
      ++inside;
    } else {
      misses += fmt::format(" [#{} exact {:.5f} est {:.5f}]", i, exact, e.point);
    }
  }
  return {inside >= 19, fmt::format("{}/20 configurations inside wilson99 at 1e5 trials (need 19){}", inside, misses)};
}

Verdict c4_theorem1() {
  const auto graphs = corpus("weighted_selfloop_free.json");
  double margin = -1.0;
  std::size_t checked = 0;
  for (const WeightedGraph& g : graphs) {
    const oracle::Matrix w = oracle::raw_weights(g);
    if (!self_loop_free(w) || g.n() > 7) return {false, "corpus graph violates the hypothesis"};
    for (double r : ranks({1.0, 2.0, 5.0})) {
      const double rho = scheme_average(g, fixation_vector(g, r), InitScheme::temperature());
      const double bound = 1.0 - 1.0 / (r + 1.0);
      margin = std::max(margin, rho - bound);
      ++checked;
    }
  }
  return {checked == 600 && margin <= 1e-9,
          fmt::format("{} cases, max(rho_T - bound) = {:.4g} (tol 1e-9)", checked, margin)};
}

Verdict c5_theorem2() {
  double margin = -1.0;
  std::size_t checked = 0;
  auto check = [&](const WeightedGraph& g) {
    for (double r : ranks({1.0, 1.5, 2.0, 5.0})) {
      const double rho = scheme_average(g, fixation_vector(g, r), InitScheme::temperature());
      margin = std::max(margin, rho - (1.0 - 1.0 / (4.0 * r + 2.0)));
      ++checked;
    }
  };
  std::size_t graphs = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    oracle::for_each_connected_graph(n, [&](const std::vector<std::pair<int, int>>& edges) {
      check(undirected_graph(n, edges, false));
      check(undirected_graph(n, edges, true));
      graphs += 2;
    });
  }
  for (const WeightedGraph& g : corpus("unweighted_n7.json")) {
    if (!unweighted(oracle::raw_weights(g))) return {false, "corpus graph is weighted"};
    check(g);
    ++graphs;
  }
  return {margin <= 1e-9, fmt::format("{} graphs (all connected n<=6 with/without loops + n=7 corpus), {} cases, "
                                      "max(rho_T - bound) = {:.4g}",
                                      graphs, checked, margin)};
}

Verdict c6_theorems34() {
  double margin = -1.0;
  std::size_t thm3 = 0;
  std::size_t thm4 = 0;
  for (const WeightedGraph& g : corpus("degree_bounded.json")) {
    const oracle::Matrix w = oracle::raw_weights(g);
    const int c = max_degree(w);
    if (c > 4 || g.n() > 7) return {false, "corpus graph exceeds the degree or size cap"};
    const bool slf = self_loop_free(w);
    const bool unw = unweighted(w);
    if (!slf && !unw) continue;
    for (double r : ranks({1.0, 1.5, 2.0, 5.0})) {
      const double rho = scheme_average(g, fixation_vector(g, r), InitScheme::uniform());
      if (slf) {
        margin = std::max(margin, rho - (1.0 - 1.0 / (c + r * c * c)));
        ++thm3;
      }
      if (unw) {
        margin = std::max(margin, rho - (1.0 - 1.0 / (1.0 + r * c)));
        ++thm4;
      }
    }
  }
  return {thm3 > 0 && thm4 > 0 && margin <= 1e-9,
          fmt::format("{} self-loop-free and {} unweighted cases, max(rho_U - bound) = {:.4g}", thm3, thm4, margin)};
}

Verdict c7_star() {
  const WeightedGraph star = generate({Family::Star, 200, false});
  EstimateOptions opt;
  opt.sim.basin_limit = 256;
  std::string detail;
  bool ok = true;
  for (double r : ranks({1.5, 2.0})) {
    const FixationEstimate e = estimate_fixation(star, r, InitScheme::uniform(), 100000, 70 + static_cast<int>(r * 10), opt);
    const double target = 1.0 - 1.0 / (r * r);
    ok = ok && std::abs(e.point - target) <= 0.03 && e.timeouts == 0;
    detail += fmt::format(" r={}: {:.4f} vs {:.4f};", r, e.point, target);
  }
  return {ok, "star n=200, 1e5 trials:" + detail + " (tol 0.03)"};
}

Verdict c8_construction() {
  bool ok = true;
  std::string bad;
  int cases = 0;
  double worst_dev = 0.0;
  for (std::size_t n : {27, 64, 125}) {
    FamilySpec torus;
    torus.family = Family::Grid;
    torus.rows = n == 27 ? 3 : n == 64 ? 8 : 5;
    torus.cols = n / torus.rows;
    torus.torus = true;
    torus.self_loops = true;
    const std::pair<const char*, WeightedGraph> inputs[] = {{"complete", generate({Family::Complete, n, true})},
                                                            {"torus", generate(torus)},
                                                            {"star", generate({Family::Star, n, true})}};
    for (const auto& [name, g] : inputs) {
      ++cases;
      const double nd = static_cast<double>(n);
      const AmplifierLayout L = compute_layout(g, 0.5);
      const WeightedGraph w = assign_weights(g, L);
      std::string why;
      // Symbolic identity w(u) = mu 2^-n + nu for hub vertices.
      SymbolicSum expected;
      if (L.mu > 0) expected.add(SymbolicTerm{Rational(L.mu), static_cast<int>(n), 0});
      if (L.nu > 0) expected.add(SymbolicTerm{Rational(L.nu), 0, 0});
      for (VertexId u : L.hub) {
        const auto total = symbolic_total_weight(w, u);
        if (!total || !(*total == expected)) why += " weight-identity";
      }
      // Isothermal hub from raw weights: outside weight folds into the self-loop.
      const oracle::Matrix raw = oracle::raw_weights(w);
      std::vector<char> in_h(n, 0);
      for (VertexId u : L.hub) in_h[u] = 1;
      std::vector<double> total(n, 0.0);
      for (std::size_t u = 0; u < n; ++u) {
        for (double x : raw[u]) total[u] += x;
      }
      for (VertexId u : L.hub) {
        double t = 0.0;
        for (VertexId v : L.hub) {
          double wv = raw[v][u];
          if (v == u) {
            for (std::size_t x = 0; x < n; ++x) {
              if (!in_h[x]) wv += raw[u][x];
            }
          }
          t += wv / total[v];
        }
        worst_dev = std::max(worst_dev, std::abs(t - 1.0));
        if (std::abs(t - 1.0) > 1e-9) why += " isothermal";
      }
      if (static_cast<long long>(L.separator.size()) > ceil_pow_ref(nd, 2.0 * 0.5 / 3.0)) why += " |S|";
      std::size_t sum = 0;
      for (const Branch& b : L.branches) {
        sum += b.members.size();
        if (static_cast<long long>(b.members.size()) > ceil_pow_ref(nd, 1.0 - 2.0 * 0.5 / 3.0)) why += " branch";
      }
      if (sum + L.hub.size() != n) why += " branch-sum";
      if (!why.empty()) {
        ok = false;
        bad += fmt::format(" {}{}:{}", name, n, why);
      }
    }
  }
  return {ok, fmt::format("{} constructions, max |T_H - 1| = {:.3g}{}", cases, worst_dev, ok ? "" : "; failed:" + bad)};
}

Verdict c9_amplifier_trend() {
  EstimateOptions opt;
  opt.sim.basin_limit = 256;
  const std::size_t sizes[] = {27, 64, 125};
  std::vector<WeightedGraph> amps;
  for (std::size_t n : sizes) {
    const WeightedGraph g = generate({Family::Complete, n, true});
    amps.push_back(assign_weights(g, compute_layout(g, 0.5)));
  }
  bool ok = true;
  std::string detail;
  for (const InitScheme& scheme : {InitScheme::uniform(), InitScheme::temperature()}) {
    std::vector<FixationEstimate> est;
    for (std::size_t i = 0; i < 3; ++i) est.push_back(estimate_fixation(amps[i], 1.1, scheme, 10000, 7 + i, opt));
    for (std::size_t i = 0; i + 1 < 3; ++i) {
      const bool up = est[i + 1].point >= est[i].point || est[i + 1].wilson95.hi >= est[i].wilson95.lo;
      ok = ok && up;
    }
    const double need = 1.0 - 1.0 / 1.1 + 0.3;
    ok = ok && est[2].point >= need;
    for (const auto& e : est) ok = ok && !e.unreliable;
    detail += fmt::format(" {}: {:.4f} {:.4f} {:.4f} (n=125 needs >= {:.4f});", scheme.str(), est[0].point, est[1].point,
                          est[2].point, need);
    const FixationEstimate low = estimate_fixation(amps[2], 0.9, scheme, 10000, 99, opt);
    ok = ok && low.point <= 0.05 && !low.unreliable;
    detail += fmt::format(" r=0.9: {:.4f};", low.point);
  }
  return {ok, "K_n amplifier, r=1.1, 1e4 trials:" + detail};
}

Verdict c10_duality() {
  double margin = -1.0;
  std::size_t checked = 0;
  for (const WeightedGraph& g : corpus("weighted_selfloop_free.json")) {
    for (double r : ranks({1.5, 2.0, 4.0})) {
      const double up = scheme_average(g, fixation_vector(g, r), InitScheme::uniform());
      const double down = scheme_average(g, fixation_vector(g, 1.0 / r), InitScheme::uniform());
      margin = std::max(margin, down - (1.0 - up));
      ++checked;
    }
  }
  return {margin <= 1e-9, fmt::format("{} cases, max(rho(1/r) - (1 - rho(r))) = {:.4g} (tol 1e-9)", checked, margin)};
}

Verdict c11_mj_chain() {
  struct Case {
    std::size_t m;
    double alpha;
    double q;
  };
  const Case cases[] = {{1, 0.5, 0.5}, {3, 1.0 / 65, 1.0 / 16}, {10, 1.0 / 1001, std::ldexp(1.0, -10)}};
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 31;
  for (const Case& c : cases) {
    const double x = mj_absorption(c.m, c.alpha, c.q);
    const double dense = oracle::mj_dense(c.m, c.alpha, c.q);
    const std::uint64_t walks = 1000000;
    const std::uint64_t hits = oracle::mj_monte_carlo(c.m, c.alpha, c.q, walks, seed++);
    const double lo = oracle::wilson_lo(static_cast<double>(hits), walks, kZ99);
    const double hi = oracle::wilson_hi(static_cast<double>(hits), walks, kZ99);
    const bool pass = std::abs(x - dense) <= 1e-12 && lo <= x && x <= hi;
    ok = ok && pass;
    detail += fmt::format(" m={}: x={:.6g} |x-dense|={:.2g} MC {}/{};", c.m, x, std::abs(x - dense), hits, walks);
  }
  return {ok, detail};
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + MORAN_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict c12_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("moran_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  {
    std::ofstream cfg(p("sweep.json"));
    cfg << R"({"specs": [
      {"graph": "amp.json", "r": [0.9, 1.1], "scheme": ["uniform", "temperature"], "trials": 2000},
      {"family": {"family": "random", "n": 8, "p": 0.3, "seed": 5, "self_loops": true}, "r": 1.5,
       "scheme": "convex:0.5", "trials": 5000, "graph_id": "rnd8"}]})";
  }
  // Each command writes its primary output to <tag>.out; {T} is the thread count.
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen", "generate --family random --n 40 --p 0.1 --seed 11 --self-loops --out {O}"},
      {"k64", "generate --family complete --n 64 --self-loops --out {O}"},
      {"amp", "construct --graph " + p("k64.ref") + " --epsilon 0.5 --out {O} --layout {O}.layout"},
      {"sim", "simulate --graph " + p("amp.json") + " --r 1.1 --scheme temperature --trials 10000 --seed 7 --threads {T} --out {O}"},
      {"simfull", "simulate --graph " + p("gen.ref") + " --r 2 --mode full --basin 0 --trials 3000 --seed 3 --threads {T} --out {O}"},
      {"exact", "exact --graph " + p("small.json") + " --r 1.5 --out {O}"},
      {"bounds", "bounds --graph " + p("small.json") + " --r 2 --out {O}"},
      {"sweep", "sweep --config " + p("sweep.json") + " --seed 21 --threads {T} --out {O}"},
  };
  if (run_cli("generate --family random --n 8 --p 0.4 --seed 2 --out " + p("small.json"), dir / "setup.log") != 0 ||
      run_cli("generate --family complete --n 64 --self-loops --out " + p("k64.ref"), dir / "setup.log") != 0 ||
      run_cli("construct --graph " + p("k64.ref") + " --epsilon 0.5 --out " + p("amp.json"), dir / "setup.log") != 0 ||
      run_cli("generate --family random --n 40 --p 0.1 --seed 11 --self-loops --out " + p("gen.ref"), dir / "setup.log") != 0) {
    fs::remove_all(dir);
    return {false, "setup commands failed"};
  }
  bool ok = true;
  std::string bad;
  auto expand = [](std::string s, const std::string& out, const std::string& threads) {
    for (std::size_t at; (at = s.find("{O}")) != std::string::npos;) s.replace(at, 3, out);
    for (std::size_t at; (at = s.find("{T}")) != std::string::npos;) s.replace(at, 3, threads);
    return s;
  };
  for (const auto& [tag, tmpl] : commands) {
    std::vector<std::string> outputs;
    const std::pair<const char*, const char*> runs[] = {{"a", "1"}, {"b", "1"}, {"c", "4"}};
    for (const auto& [run, threads] : runs) {
      const std::string out = p(tag + "." + run);
      const int code = run_cli(expand(tmpl, out, threads), dir / (tag + ".log"));
      if (code != 0) {
        ok = false;
        bad += fmt::format(" {} exit {}", tag, code);
      }
      std::string bytes = oracle::read_text(out);
      if (fs::exists(out + ".layout")) bytes += oracle::read_text(out + ".layout");
      outputs.push_back(bytes);
    }
    if (outputs[0].empty() || outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
      ok = false;
      bad += " " + tag + " differs";
    }
  }
  fs::remove_all(dir);
  return {ok, fmt::format("{} commands x (2 runs at 1 thread + 1 run at 4 threads){}", commands.size(),
                          ok ? ", all byte-identical" : ";" + bad)};
}

}  // namespace

// With an argument, runs only the criterion with that number.
int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "well-mixed exactness", 10, c1_well_mixed},
      {2, "jump-chain equivalence", 60, c2_jump_equivalence},
      {3, "Monte Carlo calibration", 300, c3_calibration},
      {4, "temperature bound, self-loop-free weighted", 120, c4_theorem1},
      {5, "temperature bound, unweighted", 600, c5_theorem2},
      {6, "uniform bounds, degree-bounded", 120, c6_theorems34},
      {7, "star quadratic amplification", 120, c7_star},
      {8, "construction invariants", 30, c8_construction},
      {9, "strong-amplification trend", 1800, c9_amplifier_trend},
      {10, "duality inequality", 120, c10_duality},
      {11, "branch chain absorption", 60, c11_mj_chain},
      {12, "CLI determinism", 300, c12_determinism},
  };
  int failed = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failed;
    fmt::print("[{}] C{:<2} {}: {} ({:.1f} s, limit {:.0f} s{})\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail, secs,
               c.limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  if (ran == 0) {
    fmt::print(stderr, "no criterion numbered {}\n", only);
    return 2;
  }
  fmt::print("{} of {} criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
