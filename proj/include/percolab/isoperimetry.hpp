#pragma once

// Edge and vertex isoperimetric constants.
//
// The exact routines enumerate connected vertex sets of size at most n/2.
// Restricting to connected sets loses nothing: a disconnected minimizer has
// a connected part whose ratio is no larger, for both boundary notions.
// Each set is produced once, from its lowest vertex, by the ESU extension
// scheme (extend only by exclusive neighbours above the root).

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <vector>

#include "percolab/error.hpp"
#include "percolab/graph.hpp"
#include "percolab/parallel.hpp"
#include "percolab/rng.hpp"

namespace percolab {

struct CutResult {
  std::vector<Vertex> witness;  // sorted
  std::size_t edge_boundary = 0;
  std::size_t vertex_boundary = 0;
  double edge_ratio = 0.0;
  double vertex_ratio = 0.0;
};

enum class Boundary { edge, vertex };

inline constexpr std::uint64_t default_work_limit = 100'000'000;
inline constexpr std::size_t exact_vertex_limit = 64;

inline CutResult make_cut(const Graph& g, std::vector<Vertex> set) {
  std::sort(set.begin(), set.end());
  std::vector<char> in(g.vertex_count(), 0);
  for (Vertex v : set) in[v] = 1;
  std::vector<char> outside(g.vertex_count(), 0);
  CutResult r;
  for (Vertex v : set)
    for (Vertex w : g.neighbors(v))
      if (!in[w]) {
        ++r.edge_boundary;
        if (!outside[w]) {
          outside[w] = 1;
          ++r.vertex_boundary;
        }
      }
  const double size = static_cast<double>(set.size());
  r.edge_ratio = set.empty() ? 0.0 : static_cast<double>(r.edge_boundary) / size;
  r.vertex_ratio = set.empty() ? 0.0 : static_cast<double>(r.vertex_boundary) / size;
  r.witness = std::move(set);
  return r;
}

namespace detail {

struct Candidate {
  std::uint64_t set = 0;
  std::size_t boundary = 0;
  std::size_t size = 0;  // 0 means none yet
};

/// Lexicographic order of the sorted member lists of two distinct bitsets.
inline bool lex_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  const int x = std::countr_zero(diff);
  // The set holding x continues with x; the other continues with something
  // larger, or stops (and is then a prefix, hence smaller).
  if ((a >> x) & 1U) return (b >> x) != 0;
  return (a >> x) == 0;
}

inline bool better(const Candidate& a, const Candidate& b) {
  if (b.size == 0) return a.size != 0;
  if (a.size == 0) return false;
  const auto lhs = static_cast<unsigned __int128>(a.boundary) * b.size;
  const auto rhs = static_cast<unsigned __int128>(b.boundary) * a.size;
  if (lhs != rhs) return lhs < rhs;
  return lex_less(a.set, b.set);
}

class SubsetSearch {
public:
  SubsetSearch(const Graph& g, Boundary kind, std::uint64_t work_limit, std::atomic<std::uint64_t>& work)
      : kind_(kind), limit_(work_limit), work_(work), max_size_(g.vertex_count() / 2) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      std::uint64_t m = 0;
      for (Vertex w : g.neighbors(v)) m |= std::uint64_t{1} << w;
      nb_.push_back(m);
      deg_.push_back(g.degree(v));
    }
  }

  Candidate run_root(Vertex root) {
    best_ = {};
    above_ = root >= 63 ? 0 : ~((std::uint64_t{2} << root) - 1);
    const std::uint64_t sub = std::uint64_t{1} << root;
    extend(sub, nb_[root] & above_, sub | nb_[root], deg_[root], 1);
    return best_;
  }

private:
  void extend(std::uint64_t sub, std::uint64_t ext, std::uint64_t covered, std::size_t edge_b, std::size_t size) {
    if (++local_work_ >= 4096) flush_work();
    const std::size_t boundary =
        kind_ == Boundary::edge ? edge_b : static_cast<std::size_t>(std::popcount(covered & ~sub));
    const Candidate here{sub, boundary, size};
    if (better(here, best_)) best_ = here;
    if (size == max_size_) return;
    while (ext != 0) {
      const int w = std::countr_zero(ext);
      ext &= ext - 1;
      const std::uint64_t wbit = std::uint64_t{1} << w;
      const std::uint64_t fresh = nb_[w] & ~covered & above_;
      const std::size_t inside = static_cast<std::size_t>(std::popcount(nb_[w] & sub));
      extend(sub | wbit, ext | fresh, covered | nb_[w] | wbit, edge_b + deg_[w] - 2 * inside, size + 1);
    }
  }

  void flush_work() {
    const auto total = work_.fetch_add(local_work_) + local_work_;
    local_work_ = 0;
    if (total > limit_)
      fail(ErrorKind::size_guard, "exact isoperimetry exceeded its work limit of " + std::to_string(limit_) +
                                      " extension steps; shrink the instance or raise the limit");
  }

  Boundary kind_;
  std::uint64_t limit_;
  std::atomic<std::uint64_t>& work_;
  std::size_t max_size_;
  std::vector<std::uint64_t> nb_;
  std::vector<std::size_t> deg_;
  std::uint64_t above_ = 0;
  std::uint64_t local_work_ = 0;
  Candidate best_;
};

inline std::vector<Vertex> members(std::uint64_t set) {
  std::vector<Vertex> out;
  while (set != 0) {
    out.push_back(static_cast<Vertex>(std::countr_zero(set)));
    set &= set - 1;
  }
  return out;
}

/// Whole component with the lowest first vertex among those of size <= n/2.
inline std::optional<std::vector<Vertex>> small_component(const Graph& g) {
  const auto labels = connected_components(g);
  std::vector<std::size_t> size(g.vertex_count(), 0);
  for (auto l : labels) ++size[l];
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (size[labels[v]] * 2 > g.vertex_count()) continue;
    std::vector<Vertex> comp;
    for (Vertex w = 0; w < g.vertex_count(); ++w)
      if (labels[w] == labels[v]) comp.push_back(w);
    return comp;
  }
  return std::nullopt;
}

inline CutResult exact_isoperimetry(const Graph& g, Boundary kind, std::uint64_t work_limit, unsigned threads) {
  const std::size_t n = g.vertex_count();
  require(n >= 2, ErrorKind::precondition, "isoperimetric constants need at least 2 vertices");
  require(n <= exact_vertex_limit, ErrorKind::size_guard,
          "exact isoperimetry handles at most " + std::to_string(exact_vertex_limit) + " vertices");
  if (auto comp = small_component(g)) return make_cut(g, std::move(*comp));

  std::atomic<std::uint64_t> work{0};
  std::vector<Candidate> per_root(n);
  std::vector<std::unique_ptr<SubsetSearch>> searchers(std::max(1u, threads));
  parallel_for(n, threads, [&](std::size_t root, unsigned w) {
    if (!searchers[w]) searchers[w] = std::make_unique<SubsetSearch>(g, kind, work_limit, work);
    per_root[root] = searchers[w]->run_root(static_cast<Vertex>(root));
  });
  Candidate best;
  for (const auto& c : per_root)
    if (better(c, best)) best = c;
  return make_cut(g, members(best.set));
}

}  // namespace detail

/// min |E(A, A^c)| / |A| over 0 < |A| <= n/2, with the lexicographically
/// smallest connected minimizer as witness. A disconnected graph yields 0
/// with a whole component.
inline CutResult edge_cheeger_exact(const Graph& g, std::uint64_t work_limit = default_work_limit,
                                    unsigned threads = default_threads()) {
  return detail::exact_isoperimetry(g, Boundary::edge, work_limit, threads);
}

/// min |boundary(A)| / |A| over 0 < |A| <= n/2 (external vertex boundary).
inline CutResult vertex_iso_exact(const Graph& g, std::uint64_t work_limit = default_work_limit,
                                  unsigned threads = default_threads()) {
  return detail::exact_isoperimetry(g, Boundary::vertex, work_limit, threads);
}

/// A valid cut found by seeded local search, hence an upper bound on the
/// edge Cheeger constant. Each restart grows a breadth-first ball from a
/// random root, keeps its best prefix, then applies improving add/remove
/// moves until none is left. `budget` caps the number of evaluated moves.
inline CutResult cheeger_upper_bound(const Graph& g, std::uint64_t budget, std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  require(n >= 2, ErrorKind::precondition, "isoperimetric constants need at least 2 vertices");
  if (auto comp = detail::small_component(g)) return make_cut(g, std::move(*comp));

  const std::size_t half = n / 2;
  Rng rng(seed);
  std::vector<Vertex> best_set;
  std::size_t best_b = 0;
  auto improves = [&](std::size_t b, std::size_t size) {
    return best_set.empty() || b * best_set.size() < best_b * size;
  };

  std::vector<char> in(n, 0);
  std::vector<std::size_t> inside_nb(n, 0);
  std::vector<std::int64_t> dist;
  std::uint64_t spent = 0;
  for (std::uint64_t restart = 0; spent < budget; ++restart) {
    const Vertex root = restart == 0 ? 0 : static_cast<Vertex>(rng.below(n));
    const Vertex src[] = {root};
    dist = bfs_distances(g, src);
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return dist[a] < dist[b]; });

    // Best breadth-first prefix.
    std::fill(in.begin(), in.end(), 0);
    std::fill(inside_nb.begin(), inside_nb.end(), 0);
    std::size_t b = 0;
    std::size_t best_prefix = 1;
    std::size_t best_prefix_b = g.degree(root);
    for (std::size_t i = 0; i < half; ++i, ++spent) {
      const Vertex v = order[i];
      b = b + g.degree(v) - 2 * inside_nb[v];
      in[v] = 1;
      for (Vertex w : g.neighbors(v)) ++inside_nb[w];
      if (b * best_prefix < best_prefix_b * (i + 1)) {
        best_prefix = i + 1;
        best_prefix_b = b;
      }
    }
    std::fill(in.begin(), in.end(), 0);
    std::fill(inside_nb.begin(), inside_nb.end(), 0);
    std::size_t size = 0;
    b = 0;
    auto toggle = [&](Vertex v) {
      if (in[v]) {
        b = b - (g.degree(v) - inside_nb[v]) + inside_nb[v];
        in[v] = 0;
        --size;
        for (Vertex w : g.neighbors(v)) --inside_nb[w];
      } else {
        b = b + g.degree(v) - 2 * inside_nb[v];
        in[v] = 1;
        ++size;
        for (Vertex w : g.neighbors(v)) ++inside_nb[w];
      }
    };
    for (std::size_t i = 0; i < best_prefix; ++i) toggle(order[i]);

    // Steepest improving single-vertex moves.
    while (spent < budget) {
      std::size_t move_b = b;
      std::size_t move_size = size;
      Vertex move = 0;
      bool found = false;
      for (Vertex v = 0; v < n && spent < budget; ++v) {
        std::size_t nb_b = 0;
        std::size_t nb_size = 0;
        if (in[v]) {
          if (size == 1) continue;
          nb_b = b - (g.degree(v) - inside_nb[v]) + inside_nb[v];
          nb_size = size - 1;
        } else {
          if (size == half || inside_nb[v] == 0) continue;
          nb_b = b + g.degree(v) - 2 * inside_nb[v];
          nb_size = size + 1;
        }
        ++spent;
        if (nb_b * move_size < move_b * nb_size) {
          move_b = nb_b;
          move_size = nb_size;
          move = v;
          found = true;
        }
      }
      if (!found) break;
      toggle(move);
    }
    if (improves(b, size)) {
      best_set.clear();
      for (Vertex v = 0; v < n; ++v)
        if (in[v]) best_set.push_back(v);
      best_b = b;
    }
  }
  if (best_set.empty()) best_set.push_back(0);
  return make_cut(g, std::move(best_set));
}

}  // namespace percolab
