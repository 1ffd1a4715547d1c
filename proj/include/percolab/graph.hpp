#pragma once

// Undirected simple graphs, the generator families used throughout the
// library, and exact structural metrics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "percolab/error.hpp"
#include "percolab/rng.hpp"

namespace percolab {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class GraphDefect { self_loop, duplicate_edge, endpoint_out_of_range, too_large };

class GraphError : public Error {
public:
  GraphError(GraphDefect defect, const std::string& what) : Error(ErrorKind::invalid_argument, what), defect_(defect) {}

  GraphDefect defect() const noexcept { return defect_; }

private:
  GraphDefect defect_;
};

/// Immutable simple graph. Edge ids are positions in the edge sequence.
class Graph {
public:
  Graph() = default;

  static Graph build(std::size_t n, std::vector<Edge> edges) {
    if (n > std::numeric_limits<Vertex>::max() || edges.size() > std::numeric_limits<EdgeId>::max())
      throw GraphError(GraphDefect::too_large, "graph exceeds 32-bit vertex or edge ids");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto [u, v] = edges[i];
      if (u >= n || v >= n)
        throw GraphError(GraphDefect::endpoint_out_of_range,
                         "edge " + std::to_string(i) + " has an endpoint outside [0, " + std::to_string(n) + ")");
      if (u == v) throw GraphError(GraphDefect::self_loop, "edge " + std::to_string(i) + " is a self-loop");
    }
    {
      std::vector<std::pair<Vertex, Vertex>> keys;
      keys.reserve(edges.size());
      for (const auto& e : edges) keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
      std::sort(keys.begin(), keys.end());
      const auto dup = std::adjacent_find(keys.begin(), keys.end());
      if (dup != keys.end())
        throw GraphError(GraphDefect::duplicate_edge,
                         "duplicate edge " + std::to_string(dup->first) + " " + std::to_string(dup->second));
    }

    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.offsets_.assign(n + 1, 0);
    for (const auto& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.neighbors_.resize(2 * g.edges_.size());
    g.incident_.resize(2 * g.edges_.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
      const auto [u, v] = g.edges_[id];
      g.neighbors_[cursor[u]] = v;
      g.incident_[cursor[u]++] = id;
      g.neighbors_[cursor[v]] = u;
      g.incident_[cursor[v]++] = id;
    }
    return g;
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  /// Edge ids parallel to neighbors(v).
  std::span<const EdgeId> incident_edges(Vertex v) const noexcept {
    return {incident_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex u, Vertex v) const noexcept {
    const auto nb = neighbors(u);
    return std::find(nb.begin(), nb.end(), v) != nb.end();
  }

private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> neighbors_;
  std::vector<EdgeId> incident_;
};

inline Graph build_graph(std::size_t n, std::vector<Edge> edges) { return Graph::build(n, std::move(edges)); }

// ---------------------------------------------------------------------------
// Families

struct FamilySpec;

namespace family {
struct Complete {
  std::size_t n;
};
struct Cycle {
  std::size_t n;
};
struct Path {
  std::size_t n;
};
struct Hypercube {
  std::size_t d;
};
/// [side]^d, optionally with wrap-around edges.
struct Box {
  std::size_t d;
  std::size_t side;
  bool torus = false;
};
struct RandomRegular {
  std::size_t n;
  std::size_t d;
  std::uint64_t seed = 1;
};
struct Product {
  std::shared_ptr<const FamilySpec> left;
  std::shared_ptr<const FamilySpec> right;
};
}  // namespace family

struct FamilySpec {
  std::variant<family::Complete, family::Cycle, family::Path, family::Hypercube, family::Box, family::RandomRegular,
               family::Product>
      kind;
};

inline FamilySpec complete(std::size_t n) { return {family::Complete{n}}; }
inline FamilySpec cycle(std::size_t n) { return {family::Cycle{n}}; }
inline FamilySpec path(std::size_t n) { return {family::Path{n}}; }
inline FamilySpec hypercube(std::size_t d) { return {family::Hypercube{d}}; }
inline FamilySpec box(std::size_t d, std::size_t side, bool torus = false) { return {family::Box{d, side, torus}}; }
inline FamilySpec random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  return {family::RandomRegular{n, d, seed}};
}
inline FamilySpec product(FamilySpec left, FamilySpec right) {
  return {family::Product{std::make_shared<const FamilySpec>(std::move(left)),
                          std::make_shared<const FamilySpec>(std::move(right))}};
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Shell-friendly name, `rr:10000,3,seed=7`, `cycle:100*complete:3`.
inline std::string to_string(const FamilySpec& spec) {
  return std::visit(
      overloaded{
          [](const family::Complete& f) { return "complete:" + std::to_string(f.n); },
          [](const family::Cycle& f) { return "cycle:" + std::to_string(f.n); },
          [](const family::Path& f) { return "path:" + std::to_string(f.n); },
          [](const family::Hypercube& f) { return "hypercube:" + std::to_string(f.d); },
          [](const family::Box& f) {
            return "box:" + std::to_string(f.d) + "," + std::to_string(f.side) + (f.torus ? ",torus" : "");
          },
          [](const family::RandomRegular& f) {
            return "rr:" + std::to_string(f.n) + "," + std::to_string(f.d) + ",seed=" + std::to_string(f.seed);
          },
          [](const family::Product& f) { return to_string(*f.left) + "*" + to_string(*f.right); },
      },
      spec.kind);
}

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

inline std::uint64_t parse_count(const std::string& text, const std::string& context) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::invalid_argument, "expected a nonnegative integer in '" + context + "', got '" + text + "'");
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    fail(ErrorKind::invalid_argument, "integer out of range in '" + context + "'");
  }
}

}  // namespace detail

inline FamilySpec parse_family(const std::string& text) {
  if (const auto star = text.find('*'); star != std::string::npos)
    return product(parse_family(text.substr(0, star)), parse_family(text.substr(star + 1)));

  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::invalid_argument, "family '" + text + "' lacks ':' parameters");
  const std::string name = text.substr(0, colon);
  const auto params = detail::split(text.substr(colon + 1), ',');
  auto count = [&](std::size_t i) {
    if (i >= params.size()) fail(ErrorKind::invalid_argument, "family '" + text + "' is missing parameters");
    return detail::parse_count(params[i], text);
  };
  auto expect_arity = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi)
      fail(ErrorKind::invalid_argument, "family '" + text + "' has the wrong number of parameters");
  };

  if (name == "complete" || name == "k") {
    expect_arity(1, 1);
    return complete(count(0));
  }
  if (name == "cycle" || name == "c") {
    expect_arity(1, 1);
    return cycle(count(0));
  }
  if (name == "path" || name == "p") {
    expect_arity(1, 1);
    return path(count(0));
  }
  if (name == "hypercube" || name == "q") {
    expect_arity(1, 1);
    return hypercube(count(0));
  }
  if (name == "box" || name == "torus") {
    expect_arity(2, 3);
    bool torus = name == "torus";
    if (params.size() == 3) {
      if (params[2] != "torus" && params[2] != "open")
        fail(ErrorKind::invalid_argument, "box flag must be 'torus' or 'open' in '" + text + "'");
      torus = params[2] == "torus";
    }
    return box(count(0), count(1), torus);
  }
  if (name == "rr") {
    expect_arity(2, 3);
    std::uint64_t seed = 1;
    if (params.size() == 3) {
      const auto& s = params[2];
      seed = detail::parse_count(s.rfind("seed=", 0) == 0 ? s.substr(5) : s, text);
    }
    return random_regular(count(0), count(1), seed);
  }
  fail(ErrorKind::invalid_argument, "unknown family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Generators

inline Graph cartesian_product(const Graph& g, const Graph& h) {
  const std::size_t ng = g.vertex_count();
  const std::size_t nh = h.vertex_count();
  std::vector<Edge> edges;
  edges.reserve(ng * h.edge_count() + nh * g.edge_count());
  auto id = [nh](std::size_t a, std::size_t b) { return static_cast<Vertex>(a * nh + b); };
  for (std::size_t a = 0; a < ng; ++a)
    for (const auto& e : h.edges()) edges.push_back({id(a, e.u), id(a, e.v)});
  for (std::size_t b = 0; b < nh; ++b)
    for (const auto& e : g.edges()) edges.push_back({id(e.u, b), id(e.v, b)});
  return Graph::build(ng * nh, std::move(edges));
}

/// Retry budget of the pairing model: ceil(10 * exp((d^2 - 1) / 4)).
inline std::uint64_t random_regular_retry_budget(std::size_t d) {
  const double dd = static_cast<double>(d);
  const double budget = std::ceil(10.0 * std::exp((dd * dd - 1.0) / 4.0));
  return budget > 1e15 ? static_cast<std::uint64_t>(1e15) : static_cast<std::uint64_t>(budget);
}

/// Uniform simple d-regular graph by the pairing model with whole-matching rejection.
inline Graph generate_random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  require(n >= 1, ErrorKind::invalid_argument, "random regular graph needs n >= 1");
  require(d < n, ErrorKind::invalid_argument, "random regular graph needs d < n");
  require((n * d) % 2 == 0, ErrorKind::invalid_argument, "random regular graph needs n*d even");

  const std::uint64_t budget = random_regular_retry_budget(d);
  std::vector<Vertex> points(n * d);
  std::vector<std::pair<Vertex, Vertex>> pairs(n * d / 2);
  for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
    Rng rng = Rng::stream(seed, attempt);
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / d);
    rng.shuffle(std::span<Vertex>(points));
    bool simple = true;
    for (std::size_t i = 0; i < pairs.size() && simple; ++i) {
      const Vertex a = points[2 * i];
      const Vertex b = points[2 * i + 1];
      simple = a != b;
      pairs[i] = {std::min(a, b), std::max(a, b)};
    }
    if (!simple) continue;
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) continue;

    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [a, b] : pairs) edges.push_back({a, b});
    return Graph::build(n, std::move(edges));
  }
  fail(ErrorKind::retry_exhausted, "random regular generator exhausted its retry budget of " +
                                       std::to_string(budget) + " pairings");
}

inline Graph generate(const FamilySpec& spec) {
  auto positive = [](std::size_t value, const char* what) {
    require(value >= 1, ErrorKind::invalid_argument, std::string(what) + " must be at least 1");
  };
  return std::visit(
      overloaded{
          [&](const family::Complete& f) {
            positive(f.n, "complete graph size");
            std::vector<Edge> edges;
            for (Vertex u = 0; u < f.n; ++u)
              for (Vertex v = u + 1; v < f.n; ++v) edges.push_back({u, v});
            return Graph::build(f.n, std::move(edges));
          },
          [&](const family::Cycle& f) {
            require(f.n >= 3, ErrorKind::invalid_argument, "a simple cycle needs at least 3 vertices");
            std::vector<Edge> edges;
            for (Vertex v = 0; v < f.n; ++v) edges.push_back({v, static_cast<Vertex>((v + 1) % f.n)});
            return Graph::build(f.n, std::move(edges));
          },
          [&](const family::Path& f) {
            positive(f.n, "path size");
            std::vector<Edge> edges;
            for (Vertex v = 0; v + 1 < f.n; ++v) edges.push_back({v, v + 1});
            return Graph::build(f.n, std::move(edges));
          },
          [&](const family::Hypercube& f) {
            positive(f.d, "hypercube dimension");
            require(f.d < 31, ErrorKind::invalid_argument, "hypercube dimension too large");
            const std::size_t n = std::size_t{1} << f.d;
            std::vector<Edge> edges;
            edges.reserve(f.d * n / 2);
            for (Vertex v = 0; v < n; ++v)
              for (std::size_t i = 0; i < f.d; ++i) {
                const Vertex w = v ^ (Vertex{1} << i);
                if (v < w) edges.push_back({v, w});
              }
            return Graph::build(n, std::move(edges));
          },
          [&](const family::Box& f) {
            positive(f.d, "box dimension");
            positive(f.side, "box side");
            require(!f.torus || f.side >= 3, ErrorKind::invalid_argument,
                    "a simple torus needs side at least 3");
            double size = std::pow(static_cast<double>(f.side), static_cast<double>(f.d));
            require(size < 4e9, ErrorKind::invalid_argument, "box has too many vertices");
            std::size_t n = 1;
            for (std::size_t i = 0; i < f.d; ++i) n *= f.side;
            std::vector<Edge> edges;
            for (std::size_t v = 0; v < n; ++v) {
              std::size_t rest = v;
              std::size_t stride = 1;
              for (std::size_t i = 0; i < f.d; ++i) {
                const std::size_t coord = rest % f.side;
                rest /= f.side;
                if (coord + 1 < f.side)
                  edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v + stride)});
                else if (f.torus)
                  edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v - coord * stride)});
                stride *= f.side;
              }
            }
            return Graph::build(n, std::move(edges));
          },
          [&](const family::RandomRegular& f) { return generate_random_regular(f.n, f.d, f.seed); },
          [&](const family::Product& f) { return cartesian_product(generate(*f.left), generate(*f.right)); },
      },
      spec.kind);
}

// ---------------------------------------------------------------------------
// Metrics

/// Component label per vertex, labels numbered in order of first vertex.
inline std::vector<std::uint32_t> connected_components(const Graph& g) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(g.vertex_count(), unset);
  std::vector<Vertex> stack;
  std::uint32_t next = 0;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v))
        if (label[w] == unset) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return label;
}

/// Breadth-first distances from a set of sources; unreachable vertices get -1.
inline std::vector<std::int64_t> bfs_distances(const Graph& g, std::span<const Vertex> sources,
                                               std::int64_t max_depth = std::numeric_limits<std::int64_t>::max()) {
  std::vector<std::int64_t> dist(g.vertex_count(), -1);
  std::vector<Vertex> frontier;
  for (Vertex s : sources) {
    if (s >= g.vertex_count()) fail(ErrorKind::invalid_argument, "source vertex out of range");
    if (dist[s] < 0) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  std::vector<Vertex> next;
  for (std::int64_t depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
    next.clear();
    for (Vertex v : frontier)
      for (Vertex w : g.neighbors(v))
        if (dist[w] < 0) {
          dist[w] = depth + 1;
          next.push_back(w);
        }
    frontier.swap(next);
  }
  return dist;
}

/// B(A, r): vertices within distance r of the center set, sorted.
inline std::vector<Vertex> ball(const Graph& g, std::span<const Vertex> centers, std::size_t radius) {
  const auto dist = bfs_distances(g, centers, static_cast<std::int64_t>(radius));
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (dist[v] >= 0) out.push_back(v);
  return out;
}

/// Length of a shortest cycle, or nullopt for a forest.
inline std::optional<std::size_t> girth(const Graph& g) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  const std::size_t n = g.vertex_count();
  std::vector<std::int64_t> dist(n, -1);
  std::vector<EdgeId> via(n);
  std::vector<Vertex> queue;
  queue.reserve(n);
  for (Vertex root = 0; root < n; ++root) {
    queue.clear();
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    via[root] = std::numeric_limits<EdgeId>::max();
    queue.push_back(root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      if (static_cast<std::size_t>(2 * dist[v] + 1) >= best) break;
      const auto nb = g.neighbors(v);
      const auto ids = g.incident_edges(v);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        const Vertex w = nb[i];
        if (ids[i] == via[v]) continue;
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          via[w] = ids[i];
          queue.push_back(w);
        } else {
          best = std::min(best, static_cast<std::size_t>(dist[v] + dist[w] + 1));
        }
      }
    }
  }
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best;
}

struct GraphMetrics {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t max_degree = 0;
  std::size_t min_degree = 0;
  std::size_t components = 0;
  bool connected = false;
  std::optional<std::size_t> diameter;  // nullopt when disconnected (infinite)
};

inline GraphMetrics graph_metrics(const Graph& g) {
  GraphMetrics m;
  m.vertices = g.vertex_count();
  m.edges = g.edge_count();
  if (g.vertex_count() == 0) return m;
  m.min_degree = std::numeric_limits<std::size_t>::max();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    m.max_degree = std::max(m.max_degree, g.degree(v));
    m.min_degree = std::min(m.min_degree, g.degree(v));
  }
  const auto labels = connected_components(g);
  m.components = *std::max_element(labels.begin(), labels.end()) + 1;
  m.connected = m.components == 1;
  if (m.connected) {
    std::int64_t diam = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      const Vertex src[] = {v};
      const auto dist = bfs_distances(g, src);
      diam = std::max(diam, *std::max_element(dist.begin(), dist.end()));
    }
    m.diameter = static_cast<std::size_t>(diam);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Text format: "n m" header, then m lines "u v"; lines starting with '#' are comments.

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      return true;
    }
    return false;
  };
  auto malformed = [&](const std::string& why) -> Error {
    return Error(ErrorKind::invalid_argument, "malformed graph file, line " + std::to_string(line_no) + ": " + why);
  };
  auto parse_pair = [&](const std::string& text) {
    std::istringstream fields(text);
    long long a = -1;
    long long b = -1;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra) || a < 0 || b < 0) throw malformed("expected two nonnegative integers");
    return std::pair<std::uint64_t, std::uint64_t>(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  };

  if (!next_line(line)) throw malformed("missing 'n m' header");
  const auto [n, m] = parse_pair(line);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!next_line(line)) throw malformed("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    const auto [u, v] = parse_pair(line);
    if (u >= n || v >= n) throw malformed("endpoint out of range");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  if (next_line(line)) throw malformed("trailing content after the declared edges");
  return Graph::build(n, std::move(edges));
}

}  // namespace percolab
