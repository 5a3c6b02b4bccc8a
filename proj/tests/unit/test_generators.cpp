#include <doctest.h>

#include <string>

#include "moran/amplifier.hpp"
#include "moran/errors.hpp"
#include "moran/generators.hpp"
#include "support/oracles.hpp"

using namespace moran;

TEST_CASE("complete and star families") {
  const WeightedGraph k4 = generate({Family::Complete, 4, false});
  CHECK(k4.edge_count() == 12);  // 6 undirected edges, both directions
  for (VertexId u = 0; u < 4; ++u) CHECK(out_degree(k4, u) == 3);

  const WeightedGraph s5 = generate({Family::Star, 5, false});
  for (VertexId u = 1; u < 5; ++u) {
    CHECK(s5.has_edge(0, u));
    for (VertexId v = 1; v < 5; ++v) CHECK_FALSE(s5.has_edge(u, v));
  }
}

TEST_CASE("torus grid is 4-regular with loops and diameter 4") {
  FamilySpec spec;
  spec.family = Family::Grid;
  spec.rows = 4;
  spec.cols = 4;
  spec.torus = true;
  spec.self_loops = true;
  const WeightedGraph g = generate(spec);
  REQUIRE(g.n() == 16);
  for (VertexId u = 0; u < 16; ++u) {
    CHECK(g.has_edge(u, u));
    CHECK(out_degree(g, u) == 5);
  }
  CHECK(graph_diameter(g) == 4);
}

TEST_CASE("generated graphs are connected and deterministic") {
  std::vector<FamilySpec> specs;
  for (std::size_t n : {3, 7, 20}) {
    specs.push_back({Family::Complete, n, true});
    specs.push_back({Family::Star, n, false});
    specs.push_back({Family::Cycle, n, false});
    FamilySpec r{Family::RandomConnected, n, true};
    r.p = 0.1;
    r.seed = 42 + n;
    specs.push_back(r);
  }
  FamilySpec grid;
  grid.family = Family::Grid;
  grid.rows = 3;
  grid.cols = 5;
  specs.push_back(grid);
  for (const FamilySpec& s : specs) {
    const WeightedGraph g = generate(s);
    CHECK(structurally_connected(g));
    CHECK(strongly_connected(g));
    CHECK(save_graph(g) == save_graph(generate(s)));
  }
  FamilySpec a{Family::RandomConnected, 12, false};
  a.p = 0.3;
  a.seed = 1;
  FamilySpec b = a;
  b.seed = 2;
  CHECK(save_graph(generate(a)) != save_graph(generate(b)));
}

TEST_CASE("family validation") {
  CHECK(parse_family("random") == Family::RandomConnected);
  CHECK_THROWS_AS(parse_family("hypercube"), InputError);
  CHECK_THROWS_AS(generate({Family::Cycle, 2, false}), InputError);
  CHECK_THROWS_AS(generate({Family::Complete, 0, false}), InputError);
}

TEST_CASE("save and load round trip") {
  for (const auto& g : oracle::load_corpus(MORAN_TEST_DATA "/weighted_selfloop_free.json")) {
    CHECK(load_graph(save_graph(g)) == g);
  }
  const WeightedGraph base = generate({Family::Complete, 27, true});
  const WeightedGraph amp = assign_weights(base, compute_layout(base, 0.5));
  const WeightedGraph back = load_graph(save_graph(amp));
  CHECK(back == amp);
  CHECK(back.has_symbolic_weights());
  CHECK(save_graph(back) == save_graph(amp));
}

TEST_CASE("load_graph input handling") {
  const WeightedGraph g = load_graph(R"({"n":2,"log_weights":true,"edges":[[0,1,0.0],[1,0,0.0],[0,0,"-inf"],[1,1,0.0]]})");
  CHECK(g.has_edge(0, 0));
  CHECK(g.transition(0, 0) == 0.0);
  CHECK(g.out_arcs(0).size() == 1);

  const WeightedGraph u = load_graph(R"({"n":3,"directed":false,"edges":[[0,1,1],[1,2,2]]})");
  CHECK(u.weight(2, 1).value() == doctest::Approx(2.0));

  try {
    load_graph(R"({"n":2,"edges":[[0,1,1],[1,5,1]]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.where() == "edges[1]");
  }
  CHECK_THROWS_AS(load_graph(R"({"n":2,"self_loops":false,"edges":[[0,1,1],[1,0,1],[0,0,1]]})"), ParseError);
  CHECK_THROWS_AS(load_graph("{not json"), ParseError);
  CHECK_THROWS_AS(load_graph(R"({"n":2,"edges":[[0,1,-1],[1,0,1]]})"), ParseError);
}
