#pragma once

// Pivotal edges for up-sets: the ordering construction of a (configuration,
// uniform edge) pair, Monte Carlo pivotal probabilities, the explicit
// ((k+1)/k) max-pmf bound, and detection of edges joining two large
// components.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "percolab/binomial.hpp"
#include "percolab/graph.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"
#include "percolab/rng.hpp"
#include "percolab/sweep.hpp"
#include "percolab/upset.hpp"

namespace percolab {

/// True iff config + e is in the up-set and config - e is not.
inline bool is_pivotal(const Graph& g, const EdgeMask& config, EdgeId e, const UpSetSpec& u) {
  require(e < g.edge_count(), ErrorKind::invalid_argument, "edge id out of range");
  EdgeMask with = config;
  with[e] = true;
  if (!u.contains(g, with)) return false;
  EdgeMask without = config;
  without[e] = false;
  return !u.contains(g, without);
}

struct PivotalPair {
  EdgeMask config;  // indexed by edge id 0..k-1
  EdgeId edge = 0;
};

/// The pair built from a fixed ordering: A = first x elements, and e is the
/// x-th element when `take_last` holds, otherwise the (x+1)-th.
inline PivotalPair pair_from_order(std::span<const EdgeId> order, std::size_t x, bool take_last) {
  PivotalPair out;
  out.config.assign(order.size(), false);
  for (std::size_t i = 0; i < x; ++i) out.config[order[i]] = true;
  out.edge = take_last ? order[x - 1] : order[x];
  return out;
}

/// Uniform ordering by Fisher-Yates, then X ~ Binomial(k, p) from the same
/// stream, then e = e_X with probability X/k, else e_{X+1}.
inline PivotalPair sample_pair(std::size_t k, double p, Rng& rng) {
  require(k >= 1, ErrorKind::precondition, "sample_pair needs at least one edge");
  require_probability(p);
  std::vector<EdgeId> order(k);
  std::iota(order.begin(), order.end(), EdgeId{0});
  rng.shuffle(std::span<EdgeId>(order));
  const auto x = static_cast<std::size_t>(rng.binomial(k, p));
  const bool take_last = rng.uniform() * static_cast<double>(k) < static_cast<double>(x);
  return pair_from_order(order, x, take_last);
}

inline PivotalPair sample_pair(std::size_t k, double p, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0);
  return sample_pair(k, p, rng);
}

/// Exact joint law of sample_pair's construction: entry [mask * k + e] is
/// P(A = mask, e), obtained by integrating over every ordering, every X, and
/// the final coin. Meant for k <= 8.
inline std::vector<double> pair_construction_law(std::size_t k, double p) {
  require(k >= 1 && k <= 8, ErrorKind::size_guard, "pair_construction_law enumerates k! orderings; need 1 <= k <= 8");
  std::vector<double> law((std::size_t{1} << k) * k, 0.0);
  std::vector<EdgeId> order(k);
  std::iota(order.begin(), order.end(), EdgeId{0});
  double orderings = 1.0;
  for (std::size_t i = 2; i <= k; ++i) orderings *= static_cast<double>(i);
  const auto pmf = binomial_weights(k, p);
  do {
    for (std::size_t x = 0; x <= k; ++x) {
      const double last = static_cast<double>(x) / static_cast<double>(k);
      for (bool take_last : {true, false}) {
        const double coin = take_last ? last : 1.0 - last;
        if (coin == 0.0) continue;
        const auto pair = pair_from_order(order, x, take_last);
        std::size_t mask = 0;
        for (std::size_t i = 0; i < k; ++i)
          if (pair.config[i]) mask |= std::size_t{1} << i;
        law[mask * k + pair.edge] += pmf[x] * coin / orderings;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return law;
}

/// Monte Carlo P(e is A-pivotal) with (A, e) from sample_pair; trial t uses stream (seed, t).
inline Estimate pivotal_prob_mc(const Graph& g, double p, const UpSetSpec& u, std::size_t trials, std::uint64_t seed,
                                unsigned threads = default_threads()) {
  require(trials >= 1, ErrorKind::precondition, "need at least one trial");
  require(u.declared_monotone(), ErrorKind::precondition, "pivotal probabilities need a monotone up-set");
  require(g.edge_count() >= 1, ErrorKind::precondition, "graph has no edges");
  std::vector<char> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t, unsigned) {
    Rng rng = Rng::stream(seed, t);
    const auto pair = sample_pair(g.edge_count(), p, rng);
    hit[t] = is_pivotal(g, pair.config, pair.edge, u) ? 1 : 0;
  });
  const double n = static_cast<double>(trials);
  const double mean = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / n;
  const double se = trials > 1 ? std::sqrt(mean * (1.0 - mean) / (n - 1.0)) : 0.0;
  return {mean, se};
}

/// ((k+1)/k) max over p in [x, 1-x] and m in [0, k] of Binom(k, p){m}.
/// For fixed m the pmf is unimodal in p with peak at m/k, so the inner
/// maximum sits at clamp(m/k, x, 1-x).
inline double pivotal_bound(std::size_t k, double x) {
  require(k >= 1, ErrorKind::precondition, "pivotal_bound needs k >= 1");
  require(x > 0.0 && x <= 0.5, ErrorKind::precondition, "pivotal_bound needs 0 < x <= 1/2");
  double best = 0.0;
  for (std::size_t m = 0; m <= k; ++m) {
    const double p = std::clamp(static_cast<double>(m) / static_cast<double>(k), x, 1.0 - x);
    best = std::max(best, binomial_pmf(m, k, p));
  }
  return (static_cast<double>(k + 1) / static_cast<double>(k)) * best;
}

/// Open edges whose removal splits a component into two parts of size at
/// least ceil(c n) each. Sorted by edge id.
inline std::vector<EdgeId> find_lbridges(const PercSample& s, double c) {
  const Graph& g = *s.graph;
  const std::size_t n = g.vertex_count();
  const std::size_t large = large_size_threshold(n, c);

  std::vector<std::size_t> comp_size;
  for (auto label : s.labels) {
    if (label >= comp_size.size()) comp_size.resize(label + 1, 0);
    ++comp_size[label];
  }

  // Iterative bridge finding on the open subgraph with subtree sizes.
  struct Frame {
    Vertex v;
    EdgeId via;
    std::size_t next;
  };
  constexpr auto none = std::numeric_limits<EdgeId>::max();
  std::vector<std::int64_t> disc(n, -1);
  std::vector<std::int64_t> low(n, 0);
  std::vector<std::size_t> sub(n, 0);
  std::vector<Frame> stack;
  std::vector<EdgeId> out;
  std::int64_t timer = 0;
  for (Vertex root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    sub[root] = 1;
    stack.push_back({root, none, 0});
    while (!stack.empty()) {
      auto& f = stack.back();
      const Vertex v = f.v;
      const auto nb = g.neighbors(v);
      const auto ids = g.incident_edges(v);
      if (f.next < nb.size()) {
        const std::size_t i = f.next++;
        if (!s.open[ids[i]] || ids[i] == f.via) continue;
        const Vertex w = nb[i];
        if (disc[w] < 0) {
          disc[w] = low[w] = timer++;
          sub[w] = 1;
          stack.push_back({w, ids[i], 0});
        } else {
          low[v] = std::min(low[v], disc[w]);
        }
        continue;
      }
      const EdgeId via = f.via;
      stack.pop_back();
      if (stack.empty()) continue;
      const Vertex parent = stack.back().v;
      low[parent] = std::min(low[parent], low[v]);
      sub[parent] += sub[v];
      if (low[v] > disc[parent]) {
        const std::size_t side = sub[v];
        const std::size_t other = comp_size[s.labels[v]] - side;
        if (side >= large && other >= large) out.push_back(via);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace percolab
