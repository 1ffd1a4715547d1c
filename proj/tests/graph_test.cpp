#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "corpus.hpp"
#include "percolab/graph.hpp"

using namespace percolab;

namespace {

std::size_t degree_sum(const Graph& g) {
  std::size_t s = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) s += g.degree(v);
  return s;
}

GraphDefect defect_of(std::size_t n, std::vector<Edge> edges) {
  try {
    build_graph(n, std::move(edges));
  } catch (const GraphError& e) {
    return e.defect();
  }
  ADD_FAILURE() << "expected rejection";
  return GraphDefect::too_large;
}

}  // namespace

TEST(BuildGraph, SingleEdge) {
  const auto g = build_graph(2, {{0, 1}});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 1u);
}

TEST(BuildGraph, Triangle) {
  const auto g = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(graph_metrics(g).max_degree, 2u);
  EXPECT_EQ(g.edge(2), (Edge{0, 2}));
}

TEST(BuildGraph, DistinctRejections) {
  EXPECT_EQ(defect_of(2, {{0, 0}}), GraphDefect::self_loop);
  EXPECT_EQ(defect_of(3, {{0, 1}, {1, 0}}), GraphDefect::duplicate_edge);
  EXPECT_EQ(defect_of(2, {{0, 2}}), GraphDefect::endpoint_out_of_range);
}

TEST(BuildGraph, AdjacencyMatchesEdges) {
  const auto g = generate(random_regular(30, 4, 9));
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto nb = g.neighbors(v);
    const auto ids = g.incident_edges(v);
    ASSERT_EQ(nb.size(), ids.size());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const auto e = g.edge(ids[i]);
      EXPECT_TRUE((e.u == v && e.v == nb[i]) || (e.v == v && e.u == nb[i]));
    }
  }
}

TEST(Generate, Counts) {
  EXPECT_EQ(generate(complete(6)).edge_count(), 15u);
  EXPECT_EQ(generate(cycle(7)).edge_count(), 7u);
  const auto q3 = generate(hypercube(3));
  EXPECT_EQ(q3.vertex_count(), 8u);
  EXPECT_EQ(q3.edge_count(), 12u);
  const auto grid = generate(box(2, 3));
  EXPECT_EQ(grid.vertex_count(), 9u);
  EXPECT_EQ(grid.edge_count(), 12u);
  const auto cube = generate(box(3, 4));
  EXPECT_EQ(cube.edge_count(), 3u * 16u * 3u);  // d s^(d-1) (s-1)
  const auto torus = generate(box(2, 5, true));
  EXPECT_EQ(torus.edge_count(), 50u);
  EXPECT_EQ(graph_metrics(torus).min_degree, 4u);
}

TEST(Generate, RandomRegularDegreeAudit) {
  const auto g = generate(random_regular(10, 3, 1));
  EXPECT_EQ(g.vertex_count(), 10u);
  EXPECT_EQ(g.edge_count(), 15u);
  for (Vertex v = 0; v < 10; ++v) EXPECT_EQ(g.degree(v), 3u);
}

TEST(Generate, RandomRegularIsSimpleRegularAndDeterministic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (std::size_t d : {3u, 4u}) {
      const auto g = generate(random_regular(50, d, seed));
      std::set<std::pair<Vertex, Vertex>> seen;
      for (const auto& e : g.edges()) {
        EXPECT_NE(e.u, e.v);
        EXPECT_TRUE(seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second);
      }
      for (Vertex v = 0; v < 50; ++v) EXPECT_EQ(g.degree(v), d);
      const auto again = generate(random_regular(50, d, seed));
      EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), again.edges().begin(), again.edges().end()));
    }
  }
}

TEST(Generate, RandomRegularRejectsBadSpecs) {
  EXPECT_THROW(generate(random_regular(5, 3, 1)), Error);  // n d odd
  EXPECT_THROW(generate(random_regular(4, 4, 1)), Error);  // d >= n
  EXPECT_EQ(random_regular_retry_budget(3), 74u);          // ceil(10 e^2)
}

TEST(Generate, InvalidSpecs) {
  EXPECT_THROW(generate(cycle(2)), Error);
  EXPECT_THROW(generate(box(2, 2, true)), Error);
  EXPECT_THROW(generate(path(0)), Error);
}

TEST(Generate, HandshakeForEveryFamily) {
  const std::vector<FamilySpec> specs = {complete(7),   cycle(9),         path(6),
                                         hypercube(5),  box(3, 3),        box(2, 4, true),
                                         random_regular(40, 3, 2), product(cycle(5), complete(3))};
  for (const auto& spec : specs) {
    const auto g = generate(spec);
    EXPECT_EQ(degree_sum(g), 2 * g.edge_count()) << to_string(spec);
  }
}

TEST(CartesianProduct, CycleTimesEdgeIsCube) {
  const auto g = cartesian_product(generate(cycle(4)), generate(complete(2)));
  EXPECT_EQ(g.vertex_count(), 8u);
  EXPECT_EQ(g.edge_count(), 12u);
  EXPECT_EQ(girth(g), 4u);
  const auto m = graph_metrics(g);
  EXPECT_EQ(m.min_degree, 3u);
  EXPECT_EQ(m.max_degree, 3u);
  EXPECT_EQ(m.diameter, 3u);
}

TEST(CartesianProduct, SingleVertexIsIdentity) {
  const auto h = generate(random_regular(12, 3, 5));
  const auto g = cartesian_product(generate(complete(1)), h);
  EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));
}

TEST(CartesianProduct, CycleTimesTriangleDegrees) {
  const auto g = generate(product(cycle(100), complete(3)));
  EXPECT_EQ(g.vertex_count(), 300u);
  for (Vertex v = 0; v < 300; ++v) EXPECT_EQ(g.degree(v), 4u);
}

TEST(CartesianProduct, SwapIsomorphismAndDegrees) {
  const auto a = generate(path(4));
  const auto b = generate(cycle(3));
  const auto ab = cartesian_product(a, b);
  const auto ba = cartesian_product(b, a);
  EXPECT_EQ(ab.edge_count(), a.vertex_count() * b.edge_count() + b.vertex_count() * a.edge_count());
  // (x, y) -> (y, x) maps edges of a x b onto edges of b x a.
  for (const auto& e : ab.edges()) {
    auto swap = [&](Vertex v) { return static_cast<Vertex>((v % 3) * 4 + v / 3); };
    EXPECT_TRUE(ba.has_edge(swap(e.u), swap(e.v)));
  }
  for (Vertex x = 0; x < 4; ++x)
    for (Vertex y = 0; y < 3; ++y) EXPECT_EQ(ab.degree(x * 3 + y), a.degree(x) + b.degree(y));
}

TEST(Girth, Examples) {
  EXPECT_EQ(girth(generate(cycle(5))), 5u);
  EXPECT_EQ(girth(generate(hypercube(3))), 4u);
  EXPECT_FALSE(girth(generate(path(4))).has_value());
  EXPECT_EQ(girth(corpus_graphs::petersen()), 5u);
  EXPECT_EQ(girth(generate(complete(5))), 3u);
}

TEST(Girth, CycleFamilyAndBipartiteParity) {
  for (std::size_t n = 3; n <= 40; ++n) EXPECT_EQ(girth(generate(cycle(n))), n);
  for (const auto& spec : {hypercube(4), box(2, 5), box(3, 3), box(2, 6, true)}) {
    const auto gi = girth(generate(spec));
    ASSERT_TRUE(gi.has_value());
    EXPECT_EQ(*gi % 2, 0u) << to_string(spec);
  }
}

TEST(Girth, MatchesBruteForceOnRandomRegular) {
  // Shortest cycle through each edge (u, v) = 1 + dist(u, v) without that edge.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = generate(random_regular(24, 3, seed));
    std::size_t best = 1000;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
      std::vector<Edge> rest;
      for (EdgeId j = 0; j < g.edge_count(); ++j)
        if (j != id) rest.push_back(g.edge(j));
      const auto h = build_graph(g.vertex_count(), rest);
      const Vertex src[] = {g.edge(id).u};
      const auto dist = bfs_distances(h, src);
      if (dist[g.edge(id).v] >= 0) best = std::min<std::size_t>(best, dist[g.edge(id).v] + 1);
    }
    EXPECT_EQ(girth(g), best);
  }
}

TEST(Ball, Examples) {
  const auto c10 = generate(cycle(10));
  const Vertex zero[] = {0};
  EXPECT_EQ(ball(c10, zero, 0), std::vector<Vertex>({0}));
  EXPECT_EQ(ball(c10, zero, 2), std::vector<Vertex>({0, 1, 2, 8, 9}));
  EXPECT_EQ(ball(generate(hypercube(4)), zero, 1).size(), 5u);
  const Vertex two[] = {0, 5};
  EXPECT_EQ(ball(c10, two, 1), std::vector<Vertex>({0, 1, 4, 5, 6, 9}));
}

TEST(Metrics, Examples) {
  const auto k4 = graph_metrics(generate(complete(4)));
  EXPECT_EQ(k4.max_degree, 3u);
  EXPECT_EQ(k4.diameter, 1u);
  const auto c8 = graph_metrics(generate(cycle(8)));
  EXPECT_EQ(c8.max_degree, 2u);
  EXPECT_EQ(c8.diameter, 4u);
  const auto two = graph_metrics(build_graph(4, {{0, 1}, {2, 3}}));
  EXPECT_FALSE(two.connected);
  EXPECT_FALSE(two.diameter.has_value());
  EXPECT_EQ(two.components, 2u);
}

TEST(GraphText, RoundTripWithComments) {
  const auto g = generate(random_regular(20, 3, 4));
  std::stringstream buf;
  write_graph(buf, g);
  std::string text = "# generated\n" + buf.str();
  std::istringstream in(text);
  const auto back = read_graph(in);
  EXPECT_EQ(back.vertex_count(), g.vertex_count());
  EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), back.edges().begin(), back.edges().end()));
  std::stringstream again;
  write_graph(again, back);
  EXPECT_EQ(again.str(), buf.str());
}

TEST(GraphText, Malformed) {
  for (const char* text : {"", "3\n", "3 2\n0 1\n", "3 1\n0 x\n", "3 1\n0 1\n1 2\n", "2 1\n0 5\n", "2 1\n1 1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_graph(in), Error) << text;
  }
}

TEST(FamilySpec, ParseAndPrint) {
  for (const char* text : {"complete:5", "cycle:8", "path:3", "hypercube:10", "box:3,8,torus", "box:2,3",
                           "rr:10000,3,seed=7", "cycle:100*complete:3"}) {
    EXPECT_EQ(to_string(parse_family(text)), text);
  }
  EXPECT_EQ(to_string(parse_family("rr:10,3")), "rr:10,3,seed=1");
  EXPECT_THROW(parse_family("wheel:5"), Error);
  EXPECT_THROW(parse_family("cycle:-1"), Error);
  EXPECT_THROW(parse_family("cycle"), Error);
}
