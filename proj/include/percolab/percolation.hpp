#pragma once

// Bond percolation on a fixed graph: sampling G(p), component analytics,
// and the multi-phase sprinkling coupling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "percolab/disjoint_sets.hpp"
#include "percolab/error.hpp"
#include "percolab/graph.hpp"
#include "percolab/rng.hpp"

namespace percolab {

/// One bit per edge id.
using EdgeMask = std::vector<bool>;

inline void require_probability(double p, const char* what = "p") {
  require(p >= 0.0 && p <= 1.0, ErrorKind::precondition, std::string(what) + " must lie in [0, 1]");
}

/// ceil(x), treating values within 1e-9 (relative) of an integer as that integer,
/// so ceil(0.3 * 10) is 3 and not 4.
inline std::size_t robust_ceil(double x) {
  const double r = std::round(x);
  if (std::fabs(x - r) <= 1e-9 * std::max(1.0, std::fabs(x))) return static_cast<std::size_t>(std::max(r, 0.0));
  return static_cast<std::size_t>(std::max(std::ceil(x), 0.0));
}

/// ceil(c * n), the size a component needs to count as large.
inline std::size_t large_size_threshold(std::size_t n, double c) {
  require(c > 0.0 && c <= 1.0, ErrorKind::precondition, "large-component fraction c must lie in (0, 1]");
  return std::max<std::size_t>(1, robust_ceil(c * static_cast<double>(n)));
}

/// ceil(n^omega), the sublinear notion of large.
inline std::size_t omega_size_threshold(std::size_t n, double omega) {
  require(omega > 0.0 && omega < 1.0, ErrorKind::precondition, "omega must lie in (0, 1)");
  return std::max<std::size_t>(1, robust_ceil(std::pow(static_cast<double>(n), omega)));
}

struct Components {
  std::vector<std::uint32_t> labels;  // numbered by first vertex
  std::vector<std::size_t> size_of_label;
  std::vector<std::size_t> sizes;  // sorted descending
};

inline Components components_of(const Graph& g, const EdgeMask& open) {
  require(open.size() == g.edge_count(), ErrorKind::invalid_argument, "edge mask length differs from edge count");
  DisjointSets sets(g.vertex_count());
  for (EdgeId id = 0; id < g.edge_count(); ++id)
    if (open[id]) sets.unite(g.edges()[id].u, g.edges()[id].v);

  Components out;
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> root_label(g.vertex_count(), unset);
  out.labels.resize(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto root = sets.find(v);
    if (root_label[root] == unset) {
      root_label[root] = static_cast<std::uint32_t>(out.size_of_label.size());
      out.size_of_label.push_back(0);
    }
    out.labels[v] = root_label[root];
    ++out.size_of_label[root_label[root]];
  }
  out.sizes = out.size_of_label;
  std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
  return out;
}

/// A percolation configuration on a graph together with its components.
/// The graph must outlive the sample.
struct PercSample {
  const Graph* graph = nullptr;
  EdgeMask open;
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t> sizes;  // descending, sums to n
  double p = 0.0;

  std::size_t open_count() const { return static_cast<std::size_t>(std::count(open.begin(), open.end(), true)); }
};

inline PercSample make_sample(const Graph& g, EdgeMask open, double p) {
  auto comps = components_of(g, open);
  return PercSample{&g, std::move(open), std::move(comps.labels), std::move(comps.sizes), p};
}

/// Open iff U_e < p with one uniform per edge in edge-id order, so two
/// calls with the same stream are coupled monotonically in p.
inline EdgeMask sample_open_edges(const Graph& g, double p, Rng& rng) {
  require_probability(p);
  EdgeMask open(g.edge_count());
  for (EdgeId id = 0; id < g.edge_count(); ++id) open[id] = rng.uniform() < p;
  return open;
}

inline PercSample sample(const Graph& g, double p, Rng& rng) { return make_sample(g, sample_open_edges(g, p, rng), p); }

inline PercSample sample(const Graph& g, double p, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0);
  return sample(g, p, rng);
}

struct ClusterStats {
  std::size_t largest = 0;
  std::size_t second = 0;
  std::vector<std::size_t> count_at_least;  // parallel to the threshold list
};

inline std::size_t count_components_at_least(std::span<const std::size_t> sizes_desc, std::size_t s) {
  return static_cast<std::size_t>(
      std::upper_bound(sizes_desc.begin(), sizes_desc.end(), s, std::greater<>()) - sizes_desc.begin());
}

inline ClusterStats component_stats(std::span<const std::size_t> sizes_desc, std::span<const std::size_t> thresholds) {
  ClusterStats st;
  st.largest = sizes_desc.empty() ? 0 : sizes_desc[0];
  st.second = sizes_desc.size() < 2 ? 0 : sizes_desc[1];
  for (std::size_t s : thresholds) st.count_at_least.push_back(count_components_at_least(sizes_desc, s));
  return st;
}

inline ClusterStats component_stats(const PercSample& s, std::span<const std::size_t> thresholds) {
  return component_stats(std::span<const std::size_t>(s.sizes), thresholds);
}

/// Components with at least ceil(c n) vertices.
inline std::size_t count_large_components(const PercSample& s, double c) {
  return count_components_at_least(s.sizes, large_size_threshold(s.labels.size(), c));
}

/// Components with at least ceil(n^omega) vertices.
inline std::size_t count_large_components_omega(const PercSample& s, double omega) {
  return count_components_at_least(s.sizes, omega_size_threshold(s.labels.size(), omega));
}

// ---------------------------------------------------------------------------
// Sprinkling

/// p2 with (1 - p1)(1 - p2) = 1 - p.
inline double sprinkle_split(double p, double p1) {
  require_probability(p);
  require_probability(p1, "p1");
  require(p1 <= p, ErrorKind::precondition, "sprinkling needs p1 <= p");
  if (p1 == 1.0) return 0.0;
  return std::clamp((p - p1) / (1.0 - p1), 0.0, 1.0);
}

struct SprinklePlan {
  std::vector<double> phases;

  double union_probability() const {
    double closed = 1.0;
    for (double p : phases) closed *= 1.0 - p;
    return 1.0 - closed;
  }
};

struct SprinkleResult {
  std::vector<EdgeMask> phases;
  PercSample combined;
};

/// Phase i draws from stream (seed, i); the union is the bitwise or.
inline SprinkleResult sprinkle_union(const Graph& g, const SprinklePlan& plan, std::uint64_t seed) {
  for (double p : plan.phases) require_probability(p, "phase probability");
  SprinkleResult out;
  EdgeMask all(g.edge_count(), false);
  for (std::size_t i = 0; i < plan.phases.size(); ++i) {
    Rng rng = Rng::stream(seed, i);
    out.phases.push_back(sample_open_edges(g, plan.phases[i], rng));
    for (EdgeId id = 0; id < g.edge_count(); ++id)
      if (out.phases.back()[id]) all[id] = true;
  }
  out.combined = make_sample(g, std::move(all), plan.union_probability());
  return out;
}

}  // namespace percolab
