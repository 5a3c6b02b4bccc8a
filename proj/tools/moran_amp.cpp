// moran_amp: command-line front end for the Moran-process library.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "moran/amplifier.hpp"
#include "moran/bounds.hpp"
#include "moran/errors.hpp"
#include "moran/estimator.hpp"
#include "moran/exact.hpp"
#include "moran/generators.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace moran;

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kUsage = 2, kPrecondition = 3, kCapacity = 4, kIo = 5 };

struct Context {
  std::vector<std::string> argv;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string graph_hash;
};

Context ctx;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeightedGraph load_input(const std::string& path) {
  const std::string bytes = read_file(path);
  ctx.graph_hash = fnv1a_hex(bytes);
  return load_graph(bytes);
}

void write_manifest(const std::string& path) {
  json m;
  std::string line;
  for (std::size_t i = 0; i < ctx.argv.size(); ++i) line += (i ? " " : "") + ctx.argv[i];
  m["command"] = line;
  m["argv"] = ctx.argv;
  m["seed"] = ctx.has_seed ? json(ctx.seed) : json(nullptr);
  m["graph_hash"] = ctx.graph_hash.empty() ? json(nullptr) : json(ctx.graph_hash);
  m["tool_version"] = kVersion;
  m["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  std::ofstream out(path + ".manifest.json", std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path + ".manifest.json");
  out << m.dump(2) << "\n";
}

// Writes `content` to `path` (stdout when empty) plus a manifest sidecar.
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << content;
  out.close();
  if (!out) throw std::ios_base::failure("write failed for " + path);
  write_manifest(path);
}

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MORAN_AMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw InputError("MORAN_AMP_THREADS must be a positive integer");
  }
  return 1;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

struct GenerateArgs {
  std::string family;
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool torus = false;
  bool self_loops = false;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

struct ConstructArgs {
  std::string graph;
  double epsilon = 0.5;
  VertexId root = 0;
  int kappa = -1;
  bool force = false;
  std::string out;
  std::string layout;
};

struct SimArgs {
  std::string graph;
  std::string graph_id;
  double r = 1.0;
  std::string scheme = "uniform";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string mode = "jump";
  std::uint64_t max_steps = kDefaultMaxSteps;
  std::size_t basin = 256;
  bool no_lump = false;
  unsigned threads = 0;
  std::string out;
};

struct ExactArgs {
  std::string graph;
  double r = 1.0;
  std::size_t limit = kDefaultExactLimit;
  std::string chain = "jump";
  std::string out;
};

struct BoundsArgs {
  std::string graph;
  double r = 1.0;
  std::string out;
};

struct SweepArgs {
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  FamilySpec spec;
  spec.family = parse_family(a.family);
  spec.n = a.n;
  spec.rows = a.rows;
  spec.cols = a.cols;
  spec.torus = a.torus;
  spec.self_loops = a.self_loops;
  spec.p = a.p;
  spec.seed = a.seed;
  ctx.seed = a.seed;
  ctx.has_seed = spec.family == Family::RandomConnected;
  if (spec.family != Family::Grid && spec.n == 0) throw CLI::ValidationError("--n", "required for this family");
  const std::string bytes = save_graph(generate(spec));
  ctx.graph_hash = fnv1a_hex(bytes);
  emit(a.out, bytes);
  return kOk;
}

int cmd_construct(const ConstructArgs& a) {
  const WeightedGraph g = load_input(a.graph);
  if (!(a.epsilon > 0.0 && a.epsilon < 1.0)) throw InputError("--epsilon must be in (0,1)");
  if (!check_diameter(g, a.epsilon)) {
    const int d = graph_diameter(g);
    const double limit = std::pow(static_cast<double>(g.n()), 1.0 - a.epsilon);
    std::fprintf(stderr, "diameter %d exceeds n^(1-epsilon) = %.6g\n", d, limit);
    if (!a.force) return kPrecondition;
    std::fprintf(stderr, "warning: --force given, constructing anyway\n");
  }
  const AmplifierLayout layout = compute_layout(g, a.epsilon, a.root);
  if (layout.hub_oversized) {
    std::fprintf(stderr, "warning: hub has %zu vertices, above the target %lld\n", layout.hub.size(), layout.hub_target);
  }
  const std::optional<int> kappa = a.kappa >= 0 ? std::optional<int>(a.kappa) : std::nullopt;
  const WeightedGraph w = assign_weights(g, layout, kappa);
  const AmplifierCheck chk = verify_amplifier(w, layout, kappa);
  std::fprintf(stderr, "hub weight identity: %s; hub isothermal (exact): %s; max |T_H - 1| = %.3g\n",
               chk.hub_weight_identity ? "yes" : "no",
               chk.hub_isothermal_exact ? (*chk.hub_isothermal_exact ? "yes" : "no") : "n/a",
               chk.hub_temperature_deviation);
  emit(a.out, save_graph(w));
  const std::string layout_path = !a.layout.empty() ? a.layout : (a.out.empty() || a.out == "-" ? "" : a.out + ".layout.json");
  if (!layout_path.empty()) emit(layout_path, layout_to_json(layout) + "\n");
  return kOk;
}

int cmd_simulate(const SimArgs& a) {
  const WeightedGraph g = load_input(a.graph);
  ctx.seed = a.seed;
  ctx.has_seed = true;
  EstimateOptions opt;
  opt.sim.mode = parse_mode(a.mode);
  opt.sim.max_steps = a.max_steps;
  opt.sim.basin_limit = a.basin;
  opt.sim.lump = !a.no_lump;
  opt.threads = resolve_threads(a.threads);
  SweepRow row;
  row.graph_id = a.graph_id.empty() ? stem_of(a.graph) : a.graph_id;
  row.n = g.n();
  row.r = a.r;
  row.scheme = InitScheme::parse(a.scheme);
  row.trials = a.trials;
  row.seed = a.seed;
  row.estimate = estimate_fixation(g, a.r, row.scheme, a.trials, a.seed, opt);
  emit(a.out, csv_header() + "\n" + csv_row(row) + "\n");
  return kOk;
}

int cmd_exact(const ExactArgs& a) {
  const WeightedGraph g = load_input(a.graph);
  ChainKind chain = ChainKind::Jump;
  if (a.chain == "full") {
    chain = ChainKind::Full;
  } else if (a.chain != "jump") {
    throw InputError("--chain must be jump or full");
  }
  const std::vector<double> rho = fixation_vector(g, a.r, a.limit, chain);
  json j;
  j["n"] = g.n();
  j["r"] = a.r;
  j["chain"] = a.chain;
  j["rho"] = rho;
  j["uniform"] = scheme_average(g, rho, InitScheme::uniform());
  j["temperature"] = scheme_average(g, rho, InitScheme::temperature());
  emit(a.out, j.dump(2) + "\n");
  return kOk;
}

int cmd_bounds(const BoundsArgs& a) {
  const WeightedGraph g = load_input(a.graph);
  emit(a.out, to_json(bounds_report(g, a.r)) + "\n");
  return kOk;
}

std::vector<json> as_list(const json& v) {
  if (v.is_array()) return std::vector<json>(v.begin(), v.end());
  return {v};
}

int cmd_sweep(const SweepArgs& a, bool seed_given) {
  const std::string text = read_file(a.config);
  ctx.graph_hash = fnv1a_hex(text);
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(a.config, e.what());
  }
  if (!cfg.is_object() || !cfg.contains("specs") || !cfg["specs"].is_array()) {
    throw ParseError(a.config, "config needs a \"specs\" array");
  }
  const fs::path base = fs::path(a.config).parent_path();
  std::uint64_t seed = a.seed;
  if (!seed_given && cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
  ctx.seed = seed;
  ctx.has_seed = true;

  EstimateOptions opt;
  opt.threads = resolve_threads(a.threads);
  try {
    opt.sim.mode = parse_mode(cfg.value("mode", std::string("jump")));
    opt.sim.max_steps = cfg.value("max_steps", kDefaultMaxSteps);
    opt.sim.basin_limit = cfg.value("basin", std::size_t{256});
    opt.sim.lump = cfg.value("lump", true);
  } catch (const json::exception& e) {
    throw ParseError(a.config, e.what());
  }

  std::vector<SweepSpec> specs;
  for (std::size_t i = 0; i < cfg["specs"].size(); ++i) {
    const json& s = cfg["specs"][i];
    const std::string where = "specs[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ParseError(where, "spec must be an object");
    std::function<WeightedGraph()> source;
    std::string id = s.value("graph_id", std::string());
    if (s.contains("graph")) {
      fs::path p = s["graph"].get<std::string>();
      if (p.is_relative()) p = base / p;
      source = [p]() { return load_graph_file(p.string()); };
      if (id.empty()) id = p.stem().string();
    } else if (s.contains("family")) {
      const json& f = s["family"];
      FamilySpec fsp;
      try {
        fsp.family = parse_family(f.at("family").get<std::string>());
        fsp.n = f.value("n", std::size_t{0});
        fsp.rows = f.value("rows", std::size_t{0});
        fsp.cols = f.value("cols", std::size_t{0});
        fsp.torus = f.value("torus", false);
        fsp.self_loops = f.value("self_loops", false);
        fsp.p = f.value("p", 0.5);
        fsp.seed = f.value("seed", std::uint64_t{0});
      } catch (const json::exception& e) {
        throw ParseError(where, e.what());
      }
      source = [fsp]() { return generate(fsp); };
      if (id.empty()) id = std::string(family_name(fsp.family)) + "_" + std::to_string(fsp.n);
    } else {
      throw ParseError(where, "spec needs \"graph\" or \"family\"");
    }
    if (s.contains("construct")) {
      const double eps = s["construct"].value("epsilon", 0.5);
      const VertexId root = s["construct"].value("root", VertexId{0});
      source = [source, eps, root]() {
        const WeightedGraph g = source();
        return assign_weights(g, compute_layout(g, eps, root));
      };
    }
    if (!s.contains("r") || !s.contains("trials")) throw ParseError(where, "spec needs \"r\" and \"trials\"");
    const std::vector<json> rs = as_list(s["r"]);
    const std::vector<json> schemes = s.contains("scheme") ? as_list(s["scheme"]) : std::vector<json>{json("uniform")};
    for (const json& r : rs) {
      for (const json& sch : schemes) {
        SweepSpec spec;
        spec.graph_id = id;
        spec.source = source;
        try {
          spec.r = r.get<double>();
          spec.scheme = InitScheme::parse(sch.get<std::string>());
          spec.trials = s["trials"].get<std::uint64_t>();
        } catch (const json::exception& e) {
          throw ParseError(where, e.what());
        }
        specs.push_back(std::move(spec));
      }
    }
  }
  const std::vector<SweepRow> rows = sweep(specs, seed, opt);
  std::string out = csv_header() + "\n";
  for (const SweepRow& row : rows) out += csv_row(row) + "\n";
  emit(a.out, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);
  CLI::App app{"Moran process on weighted graphs: simulation, exact solving, bounds and amplifier construction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a graph of a standard family");
  g->add_option("--family", gen.family, "complete | star | cycle | grid | random")->required();
  g->add_option("--n", gen.n, "Number of vertices");
  g->add_option("--rows", gen.rows, "Grid rows");
  g->add_option("--cols", gen.cols, "Grid columns");
  g->add_flag("--torus", gen.torus, "Wrap grid edges");
  g->add_flag("--self-loops", gen.self_loops, "Add a unit self-loop at every vertex");
  g->add_option("--p", gen.p, "Edge probability for random graphs");
  g->add_option("--seed", gen.seed, "Seed for random graphs");
  g->add_option("--out", gen.out, "Output file (stdout when omitted)");

  ConstructArgs con;
  auto* c = app.add_subcommand("construct", "Assign amplifier weights to an undirected graph with self-loops");
  c->add_option("--graph", con.graph, "Input graph JSON")->required();
  c->add_option("--epsilon", con.epsilon, "Diameter exponent epsilon in (0,1)");
  c->add_option("--root", con.root, "Spanning tree root");
  c->add_option("--kappa", con.kappa, "Replace the exponent n in 2^-n");
  c->add_flag("--force", con.force, "Construct even if the diameter bound fails");
  c->add_option("--out", con.out, "Weighted graph output (stdout when omitted)");
  c->add_option("--layout", con.layout, "Layout output (default <out>.layout.json)");

  SimArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo fixation estimate, one CSV row");
  s->add_option("--graph", sim.graph, "Input graph JSON")->required();
  s->add_option("--graph-id", sim.graph_id, "Identifier written to the CSV");
  s->add_option("--r", sim.r, "Mutant fitness")->required();
  s->add_option("--scheme", sim.scheme, "uniform | temperature | convex:<eta>");
  s->add_option("--trials", sim.trials, "Number of trajectories");
  s->add_option("--seed", sim.seed, "Master seed");
  s->add_option("--mode", sim.mode, "jump | full");
  s->add_option("--max-steps", sim.max_steps, "Step cap per trajectory");
  s->add_option("--basin", sim.basin, "Basin elimination state limit, 0 turns it off");
  s->add_flag("--no-lump", sim.no_lump, "Disable twin-class lumping");
  s->add_option("--threads", sim.threads, "Worker threads (default MORAN_AMP_THREADS or 1)");
  s->add_option("--out", sim.out, "CSV output (stdout when omitted)");

  ExactArgs ex;
  auto* e = app.add_subcommand("exact", "Exact fixation probabilities for small graphs");
  e->add_option("--graph", ex.graph, "Input graph JSON")->required();
  e->add_option("--r", ex.r, "Mutant fitness")->required();
  e->add_option("--limit", ex.limit, "Largest n accepted");
  e->add_option("--chain", ex.chain, "jump | full");
  e->add_option("--out", ex.out, "JSON output (stdout when omitted)");

  BoundsArgs bd;
  auto* b = app.add_subcommand("bounds", "Classification, theorem bounds and per-vertex bounds");
  b->add_option("--graph", bd.graph, "Input graph JSON")->required();
  b->add_option("--r", bd.r, "Mutant fitness")->required();
  b->add_option("--out", bd.out, "JSON output (stdout when omitted)");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Run a list of estimates from a JSON config");
  w->add_option("--config", sw.config, "Sweep config JSON")->required();
  auto* sweep_seed = w->add_option("--seed", sw.seed, "Master seed (overrides the config)");
  w->add_option("--threads", sw.threads, "Worker threads (default MORAN_AMP_THREADS or 1)");
  w->add_option("--out", sw.out, "CSV output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (c->parsed()) return cmd_construct(con);
    if (s->parsed()) return cmd_simulate(sim);
    if (e->parsed()) return cmd_exact(ex);
    if (b->parsed()) return cmd_bounds(bd);
    if (w->parsed()) return cmd_sweep(sw, sweep_seed->count() > 0);
  } catch (const CLI::ValidationError& err) {
    std::fprintf(stderr, "usage error: %s\n", err.what());
    return kUsage;
  } catch (const ParseError& err) {
    std::fprintf(stderr, "parse error: %s\n", err.what());
    return kIo;
  } catch (const CapacityError& err) {
    std::fprintf(stderr, "capacity error: %s\n", err.what());
    return kCapacity;
  } catch (const InputError& err) {
    std::fprintf(stderr, "input error: %s\n", err.what());
    return kPrecondition;
  } catch (const StructuralError& err) {
    std::fprintf(stderr, "precondition failed: %s\n", err.what());
    return kPrecondition;
  } catch (const std::ios_base::failure& err) {
    std::fprintf(stderr, "i/o error: %s\n", err.what());
    return kIo;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return kUsage;
}
