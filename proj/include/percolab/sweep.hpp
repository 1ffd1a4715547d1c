#pragma once

// Newman-Ziff sweeps: one random edge order per trial yields the
// microcanonical statistics at every edge count m; mixing the rows with
// Binomial(|E|, p) weights gives the canonical expectation at any p.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "percolab/binomial.hpp"
#include "percolab/disjoint_sets.hpp"
#include "percolab/graph.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"
#include "percolab/rng.hpp"

namespace percolab {

struct SweepOptions {
  unsigned threads = default_threads();
  /// Record every stride-th edge count (the final count is always recorded).
  std::size_t stride = 1;
  /// When nonempty, per-trial canonical curves are accumulated at these p so
  /// that smoothed estimates carry standard errors.
  std::vector<double> p_grid;
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Canonical estimates at one p, averaged over per-trial smoothed curves.
struct CanonicalPoint {
  double p = 0.0;
  Estimate l1_frac;
  Estimate l2_frac;
  std::vector<Estimate> any_large;  // P(some component >= s), per threshold
  std::vector<Estimate> two_large;  // P(at least two components >= s), per threshold
};

/// Means of the per-row statistics (microcanonical or smoothed).
struct SweepStats {
  double l1 = 0.0;
  double l2 = 0.0;
  std::vector<double> count;      // mean number of components >= s
  std::vector<double> any_large;  // fraction with count >= 1
  std::vector<double> two_large;  // fraction with count >= 2
};

class SweepRecord {
public:
  SweepRecord() = default;
  SweepRecord(std::size_t n, std::size_t m_max, std::vector<std::size_t> thresholds, std::size_t stride)
      : n_(n), m_max_(m_max), stride_(std::max<std::size_t>(1, stride)), thresholds_(std::move(thresholds)) {
    for (std::size_t m = 0; m <= m_max_; m += stride_) rows_.push_back(m);
    if (rows_.back() != m_max_) rows_.push_back(m_max_);
    const std::size_t r = rows_.size();
    const std::size_t k = thresholds_.size();
    l1_.assign(r, 0);
    l2_.assign(r, 0);
    count_.assign(r * k, 0);
    any_.assign(r * k, 0);
    two_.assign(r * k, 0);
  }

  std::size_t vertices() const noexcept { return n_; }
  std::size_t m_max() const noexcept { return m_max_; }
  std::size_t trials() const noexcept { return trials_; }
  std::size_t stride() const noexcept { return stride_; }
  std::span<const std::size_t> thresholds() const noexcept { return thresholds_; }
  std::span<const std::size_t> row_edge_counts() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }
  const std::vector<CanonicalPoint>& canonical() const noexcept { return canonical_; }

  /// Row index recording edge count m (the recorded count at or below m).
  std::size_t row_of(std::size_t m) const noexcept { return m >= m_max_ ? rows_.size() - 1 : m / stride_; }

  SweepStats row(std::size_t r) const {
    const double t = trials_ == 0 ? 1.0 : static_cast<double>(trials_);
    SweepStats s;
    s.l1 = static_cast<double>(l1_[r]) / t;
    s.l2 = static_cast<double>(l2_[r]) / t;
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
      s.count.push_back(static_cast<double>(count_[r * thresholds_.size() + i]) / t);
      s.any_large.push_back(static_cast<double>(any_[r * thresholds_.size() + i]) / t);
      s.two_large.push_back(static_cast<double>(two_[r * thresholds_.size() + i]) / t);
    }
    return s;
  }

  /// Adds one configuration's statistics at row r.
  void add(std::size_t r, const ComponentTracker& tracker) {
    l1_[r] += tracker.largest();
    l2_[r] += tracker.second_largest();
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
      const std::size_t c = tracker.count_at_least(i);
      count_[r * thresholds_.size() + i] += c;
      any_[r * thresholds_.size() + i] += c >= 1 ? 1 : 0;
      two_[r * thresholds_.size() + i] += c >= 2 ? 1 : 0;
    }
  }

  /// Integer sums merge exactly, in any order.
  void merge(const SweepRecord& other) {
    auto plus = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    plus(l1_, other.l1_);
    plus(l2_, other.l2_);
    plus(count_, other.count_);
    plus(any_, other.any_);
    plus(two_, other.two_);
    trials_ += other.trials_;
  }

  void count_trial() noexcept { ++trials_; }
  void set_canonical(std::vector<CanonicalPoint> points) { canonical_ = std::move(points); }

private:
  std::size_t n_ = 0;
  std::size_t m_max_ = 0;
  std::size_t stride_ = 1;
  std::size_t trials_ = 0;
  std::vector<std::size_t> thresholds_;
  std::vector<std::size_t> rows_;
  std::vector<std::uint64_t> l1_, l2_, count_, any_, two_;
  std::vector<CanonicalPoint> canonical_;
};

/// Binomial(m_max, p) mass collected per recorded row.
inline std::vector<double> row_weights(const SweepRecord& rec, double p) {
  const auto w = binomial_weights(rec.m_max(), p);
  std::vector<double> out(rec.row_count(), 0.0);
  for (std::size_t m = 0; m <= rec.m_max(); ++m) out[rec.row_of(m)] += w[m];
  return out;
}

/// E_p[stat] = sum_m Binom(m_max, p){m} stat_m.
inline SweepStats binomial_smooth(const SweepRecord& rec, double p) {
  require_probability(p);
  const auto w = row_weights(rec, p);
  SweepStats out;
  const std::size_t k = rec.thresholds().size();
  out.count.assign(k, 0.0);
  out.any_large.assign(k, 0.0);
  out.two_large.assign(k, 0.0);
  for (std::size_t r = 0; r < rec.row_count(); ++r) {
    if (w[r] == 0.0) continue;
    const auto s = rec.row(r);
    out.l1 += w[r] * s.l1;
    out.l2 += w[r] * s.l2;
    for (std::size_t i = 0; i < k; ++i) {
      out.count[i] += w[r] * s.count[i];
      out.any_large[i] += w[r] * s.any_large[i];
      out.two_large[i] += w[r] * s.two_large[i];
    }
  }
  return out;
}

/// Runs one sweep with the given stream, calling visit(row, tracker) after
/// every recorded edge count, starting with the empty configuration.
template <class Visit>
void sweep_trial(const Graph& g, std::span<const std::size_t> thresholds, std::size_t stride, Rng& rng,
                 ComponentTracker& tracker, std::vector<EdgeId>& order, Visit&& visit) {
  const std::size_t m_max = g.edge_count();
  stride = std::max<std::size_t>(1, stride);
  order.resize(m_max);
  std::iota(order.begin(), order.end(), EdgeId{0});
  rng.shuffle(std::span<EdgeId>(order));
  tracker.reset(g.vertex_count(), thresholds);
  visit(std::size_t{0}, tracker);
  for (std::size_t i = 0; i < m_max; ++i) {
    const auto& e = g.edges()[order[i]];
    tracker.unite(e.u, e.v);
    const std::size_t m = i + 1;
    if (m % stride == 0)
      visit(m / stride, tracker);
    else if (m == m_max)
      visit(m / stride + 1, tracker);
  }
}

namespace detail {

// Per-trial canonical values: stats laid out as [l1, l2, any_0, two_0, any_1, two_1, ...].
struct GridWeight {
  std::size_t point = 0;
  double w = 0.0;
};

/// For each recorded row, the grid points whose Binomial weight on that row is
/// at least 1e-18 of their peak weight.
inline std::vector<std::vector<GridWeight>> trimmed_row_weights(const SweepRecord& rec, std::span<const double> grid) {
  std::vector<std::vector<GridWeight>> by_row(rec.row_count());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto w = row_weights(rec, grid[j]);
    const double peak = *std::max_element(w.begin(), w.end());
    for (std::size_t r = 0; r < w.size(); ++r)
      if (w[r] >= 1e-18 * peak) by_row[r].push_back({j, w[r]});
  }
  return by_row;
}

}  // namespace detail

/// Trial t uses stream (seed, t). Output depends only on (g, trials, thresholds, seed, stride, grid).
inline SweepRecord newman_ziff_sweep(const Graph& g, std::size_t trials, std::vector<std::size_t> thresholds,
                                     std::uint64_t seed, const SweepOptions& options = {}) {
  require(trials >= 1, ErrorKind::precondition, "a sweep needs at least one trial");
  for (double p : options.p_grid) require_probability(p, "grid p");
  SweepRecord total(g.vertex_count(), g.edge_count(), thresholds, options.stride);

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(trials)));
  std::vector<SweepRecord> partial(threads, total);
  std::vector<ComponentTracker> trackers(threads);
  std::vector<std::vector<EdgeId>> orders(threads);

  const auto row_grid = detail::trimmed_row_weights(total, options.p_grid);
  const std::size_t points = options.p_grid.size();
  const std::size_t k = thresholds.size();
  const std::size_t stat_count = 2 + 2 * k;
  const std::size_t per_trial = points * stat_count;
  std::vector<double> canon(trials * per_trial, 0.0);
  const double n = std::max<double>(1.0, static_cast<double>(g.vertex_count()));

  parallel_for(trials, threads, [&](std::size_t t, unsigned w) {
    Rng rng = Rng::stream(seed, t);
    auto& rec = partial[w];
    double* out = canon.data() + t * per_trial;
    sweep_trial(g, thresholds, options.stride, rng, trackers[w], orders[w],
                [&](std::size_t r, const ComponentTracker& tracker) {
                  rec.add(r, tracker);
                  if (row_grid.empty() || row_grid[r].empty()) return;
                  const double l1 = static_cast<double>(tracker.largest()) / n;
                  const double l2 = static_cast<double>(tracker.second_largest()) / n;
                  for (const auto& [j, wt] : row_grid[r]) {
                    double* slot = out + j * stat_count;
                    slot[0] += wt * l1;
                    slot[1] += wt * l2;
                    for (std::size_t i = 0; i < k; ++i) {
                      const std::size_t c = tracker.count_at_least(i);
                      slot[2 + 2 * i] += c >= 1 ? wt : 0.0;
                      slot[3 + 2 * i] += c >= 2 ? wt : 0.0;
                    }
                  }
                });
    rec.count_trial();
  });
  for (const auto& rec : partial) total.merge(rec);

  if (points > 0) {
    std::vector<CanonicalPoint> out;
    const double tn = static_cast<double>(trials);
    for (std::size_t j = 0; j < points; ++j) {
      std::vector<Estimate> est(stat_count);
      for (std::size_t s = 0; s < stat_count; ++s) {
        double sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) sum += canon[t * per_trial + j * stat_count + s];
        const double mean = sum / tn;
        double ss = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
          const double d = canon[t * per_trial + j * stat_count + s] - mean;
          ss += d * d;
        }
        const double se = trials > 1 ? std::sqrt(ss / (tn - 1.0) / tn) : 0.0;
        est[s] = {mean, se};
      }
      CanonicalPoint pt;
      pt.p = options.p_grid[j];
      pt.l1_frac = est[0];
      pt.l2_frac = est[1];
      for (std::size_t i = 0; i < k; ++i) {
        pt.any_large.push_back(est[2 + 2 * i]);
        pt.two_large.push_back(est[3 + 2 * i]);
      }
      out.push_back(std::move(pt));
    }
    total.set_canonical(std::move(out));
  }
  return total;
}

/// Evenly spaced grid of `points` values over [lo, hi].
inline std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  std::vector<double> grid;
  if (points == 1) return {lo};
  for (std::size_t i = 0; i < points; ++i)
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  return grid;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_comment_lines(std::ostream& out, const std::string& comment) {
  if (comment.empty()) return;
  std::size_t start = 0;
  while (start <= comment.size()) {
    const auto end = comment.find('\n', start);
    out << "# " << comment.substr(start, end == std::string::npos ? std::string::npos : end - start) << '\n';
    if (end == std::string::npos) break;
    start = end + 1;
  }
}

/// Columns m,L1_mean,L2_mean,count_ge_<s>_mean for each threshold s.
inline void write_sweep_csv(std::ostream& out, const SweepRecord& rec, const std::string& comment = {}) {
  write_comment_lines(out, comment);
  out << "m,L1_mean,L2_mean";
  for (std::size_t s : rec.thresholds()) out << ",count_ge_" << s << "_mean";
  out << '\n';
  const auto old = out.precision(17);
  for (std::size_t r = 0; r < rec.row_count(); ++r) {
    const auto s = rec.row(r);
    out << rec.row_edge_counts()[r] << ',' << s.l1 << ',' << s.l2;
    for (double c : s.count) out << ',' << c;
    out << '\n';
  }
  out.precision(old);
}

/// Columns p,L1_frac,L1_frac_se,L2_frac,P_two_large,P_two_large_se; "large"
/// is the threshold at `threshold_index`.
inline void write_canonical_csv(std::ostream& out, const SweepRecord& rec, std::size_t threshold_index = 0,
                                const std::string& comment = {}) {
  write_comment_lines(out, comment);
  out << "p,L1_frac,L1_frac_se,L2_frac,P_two_large,P_two_large_se\n";
  const auto old = out.precision(17);
  for (const auto& pt : rec.canonical()) {
    const bool has = threshold_index < pt.two_large.size();
    out << pt.p << ',' << pt.l1_frac.mean << ',' << pt.l1_frac.se << ',' << pt.l2_frac.mean << ','
        << (has ? pt.two_large[threshold_index].mean : 0.0) << ',' << (has ? pt.two_large[threshold_index].se : 0.0)
        << '\n';
  }
  out.precision(old);
}

}  // namespace percolab
