#pragma once

// Exhaustive enumeration of all 2^|E| configurations of a small graph.
// Ground truth for the Monte Carlo estimators elsewhere in the library.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "percolab/disjoint_sets.hpp"
#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"
#include "percolab/upset.hpp"

namespace percolab::exact {

inline constexpr std::size_t stats_edge_limit = 24;
inline constexpr std::size_t pivotal_edge_limit = 20;

inline void guard(const Graph& g, std::size_t limit, const char* what) {
  require(g.edge_count() <= limit, ErrorKind::size_guard,
          std::string(what) + " enumerates 2^|E| configurations and allows |E| <= " + std::to_string(limit) +
              ", got " + std::to_string(g.edge_count()));
}

/// weight[k] = p^k (1-p)^(m-k), one evaluation per popcount class. With
/// m <= 24 neither power underflows, and dyadic p gives exact weights.
inline std::vector<double> popcount_weights(std::size_t m, double p) {
  require_probability(p);
  std::vector<double> w(m + 1, 0.0);
  const double q = 1.0 - p;
  for (std::size_t k = 0; k <= m; ++k)
    w[k] = std::pow(p, static_cast<double>(k)) * std::pow(q, static_cast<double>(m - k));
  return w;
}

inline EdgeMask mask_to_edges(std::uint64_t mask, std::size_t m) {
  EdgeMask out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = (mask >> i) & 1U;
  return out;
}

/// Component sizes (descending) of configuration `mask`.
inline void configuration_sizes(const Graph& g, std::uint64_t mask, DisjointSets& sets, std::vector<std::size_t>& sizes) {
  sets.reset(g.vertex_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    if ((mask >> i) & 1U) sets.unite(g.edges()[i].u, g.edges()[i].v);
  sizes.clear();
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (sets.find(v) == v) sizes.push_back(sets.size_of(v));
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
}

struct ExactStats {
  double p = 0.0;
  double mean_l1 = 0.0;
  double mean_l2 = 0.0;
  std::vector<std::size_t> thresholds;
  std::vector<double> any_large;  // P(L1 >= s)
  std::vector<double> two_large;  // P(at least two components >= s)
  double connected = 0.0;
  double total_weight = 0.0;
};

inline ExactStats exact_cluster_stats(const Graph& g, double p, std::span<const std::size_t> thresholds) {
  guard(g, stats_edge_limit, "exact_cluster_stats");
  const std::size_t m = g.edge_count();
  const auto weight = popcount_weights(m, p);
  ExactStats out;
  out.p = p;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  out.any_large.assign(thresholds.size(), 0.0);
  out.two_large.assign(thresholds.size(), 0.0);
  DisjointSets sets;
  std::vector<std::size_t> sizes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const double w = weight[static_cast<std::size_t>(std::popcount(mask))];
    if (w == 0.0) continue;
    configuration_sizes(g, mask, sets, sizes);
    out.total_weight += w;
    const double l1 = sizes.empty() ? 0.0 : static_cast<double>(sizes[0]);
    const double l2 = sizes.size() < 2 ? 0.0 : static_cast<double>(sizes[1]);
    out.mean_l1 += w * l1;
    out.mean_l2 += w * l2;
    if (sizes.size() <= 1) out.connected += w;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      const auto c = count_components_at_least(sizes, thresholds[i]);
      if (c >= 1) out.any_large[i] += w;
      if (c >= 2) out.two_large[i] += w;
    }
  }
  return out;
}

/// Membership bit for every configuration, indexed by mask.
inline std::vector<bool> membership_table(const Graph& g, const UpSetSpec& u) {
  const std::size_t m = g.edge_count();
  std::vector<bool> table(std::size_t{1} << m);
  EdgeMask config(m);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    for (std::size_t i = 0; i < m; ++i) config[i] = (mask >> i) & 1U;
    table[mask] = u.contains(g, config);
  }
  return table;
}

inline double exact_event_prob(const Graph& g, double p, const UpSetSpec& u) {
  guard(g, stats_edge_limit, "exact_event_prob");
  const std::size_t m = g.edge_count();
  const auto weight = popcount_weights(m, p);
  EdgeMask config(m);
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const double w = weight[static_cast<std::size_t>(std::popcount(mask))];
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) config[i] = (mask >> i) & 1U;
    if (u.contains(g, config)) total += w;
  }
  return total;
}

/// (1/m) sum_e sum_A P(A) [A + e in U and A - e not in U].
inline double exact_pivotal_prob(const Graph& g, double p, const UpSetSpec& u) {
  guard(g, pivotal_edge_limit, "exact_pivotal_prob");
  const std::size_t m = g.edge_count();
  require(m >= 1, ErrorKind::precondition, "graph has no edges");
  const auto table = membership_table(g, u);
  const auto weight = popcount_weights(m, p);
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    const double w = weight[static_cast<std::size_t>(std::popcount(mask))];
    if (w == 0.0) continue;
    std::size_t pivotal = 0;
    for (std::size_t e = 0; e < m; ++e) {
      const std::uint64_t bit = std::uint64_t{1} << e;
      if (table[mask | bit] && !table[mask & ~bit]) ++pivotal;
    }
    total += w * static_cast<double>(pivotal);
  }
  return total / static_cast<double>(m);
}

/// Single-edge additions suffice: any superset is reached by a chain of them.
inline bool verify_monotone(const Graph& g, const UpSetSpec& u) {
  guard(g, pivotal_edge_limit, "verify_monotone");
  const std::size_t m = g.edge_count();
  const auto table = membership_table(g, u);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    if (!table[mask]) continue;
    for (std::size_t e = 0; e < m; ++e)
      if (!table[mask | (std::uint64_t{1} << e)]) return false;
  }
  return true;
}

/// Exact probability of a predicate on the descending component sizes.
template <class Pred>
double exact_size_event_prob(const Graph& g, double p, Pred&& pred) {
  guard(g, stats_edge_limit, "exact_size_event_prob");
  const std::size_t m = g.edge_count();
  const auto weight = popcount_weights(m, p);
  DisjointSets sets;
  std::vector<std::size_t> sizes;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const double w = weight[static_cast<std::size_t>(std::popcount(mask))];
    if (w == 0.0) continue;
    configuration_sizes(g, mask, sets, sizes);
    if (pred(std::span<const std::size_t>(sizes))) total += w;
  }
  return total;
}

}  // namespace percolab::exact
