#pragma once

// Seeded experiment recipes. Each returns a report holding the config echo,
// per-point estimates with standard errors and summary scalars.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "percolab/bounds.hpp"
#include "percolab/exact.hpp"
#include "percolab/graph.hpp"
#include "percolab/isoperimetry.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"
#include "percolab/sweep.hpp"

namespace percolab::experiments {

using Json = nlohmann::ordered_json;

struct ExperimentReport {
  std::string id;
  Json config = Json::object();
  Json points = Json::array();  // flat objects of scalars, one per row
  Json summary = Json::object();
  std::uint64_t seed = 0;
  double runtime_s = 0.0;

  /// runtime_s is the only field that varies between identical runs; pass
  /// false to emit null there and get byte-identical output.
  Json to_json(bool include_runtime = true) const {
    Json out;
    out["id"] = id;
    out["config"] = config;
    out["points"] = points;
    out["summary"] = summary;
    out["seed"] = seed;
    out["runtime_s"] = include_runtime ? Json(runtime_s) : Json(nullptr);
    return out;
  }

  /// Flat CSV of the point table; columns in first-seen key order, config
  /// echo and seed as leading comment lines.
  void write_csv(std::ostream& out) const {
    std::vector<std::string> columns;
    for (const auto& pt : points)
      for (const auto& [key, _] : pt.items())
        if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    write_comment_lines(out, "experiment: " + id + "\nconfig: " + config.dump() + "\nseed: " + std::to_string(seed));
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& pt : points) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ',';
        if (pt.contains(columns[i])) {
          const auto& v = pt[columns[i]];
          out << (v.is_string() ? v.get<std::string>() : v.dump());
        }
      }
      out << '\n';
    }
  }
};

namespace detail {

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Independent seed for the i-th sub-run of an experiment.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) { return Rng::stream(seed, i)(); }

inline Estimate proportion(std::size_t hits, std::size_t trials) {
  const double n = static_cast<double>(trials);
  const double mean = static_cast<double>(hits) / n;
  return {mean, trials > 1 ? std::sqrt(mean * (1.0 - mean) / (n - 1.0)) : 0.0};
}

inline Estimate mean_se(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

/// JSON numbers cannot be NaN or infinite.
inline Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Threshold and uniqueness scans

/// How "large" is defined: ceil(c n) or ceil(n^omega).
struct LargeThreshold {
  enum class Mode { linear, omega } mode = Mode::linear;
  double value = 0.02;

  std::size_t size_for(std::size_t n) const {
    return mode == Mode::linear ? large_size_threshold(n, value) : omega_size_threshold(n, value);
  }
  std::string describe() const { return (mode == Mode::linear ? "c=" : "omega=") + std::to_string(value); }
};

struct ScanOptions {
  /// Grid in "units": p = unit * x, where unit is 1 or 1/n.
  std::vector<double> grid = linear_grid(0.0, 1.0, 101);
  bool per_vertex_units = false;
  double a = 0.05;  // giant fraction level for the crossing
  LargeThreshold large;
  /// Replace Monte Carlo by exhaustive enumeration when |E| allows it.
  bool exact_when_small = false;
  unsigned threads = default_threads();
};

/// One family size of a scan: the smoothed curves and their summaries.
struct SizeScan {
  std::string family;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t large = 0;
  bool exact = false;
  std::vector<double> x;  // grid in the report's units
  std::vector<CanonicalPoint> curve;
  std::optional<double> crossing;  // first x where L1/n reaches a, linearly interpolated
  std::optional<double> l2_peak;   // argmax of L2/n, parabolic refinement on the grid
  double sup_delta = 0.0;
  double sup_delta_se = 0.0;
  double sup_delta_at = 0.0;
};

namespace detail {

inline std::optional<double> crossing_of(std::span<const double> x, const std::vector<CanonicalPoint>& c, double a) {
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double y0 = c[i - 1].l1_frac.mean;
    const double y1 = c[i].l1_frac.mean;
    if (y0 < a && y1 >= a) return x[i - 1] + (a - y0) / (y1 - y0) * (x[i] - x[i - 1]);
  }
  if (!c.empty() && c.front().l1_frac.mean >= a) return x.front();
  return std::nullopt;
}

inline std::optional<double> l2_peak_of(std::span<const double> x, const std::vector<CanonicalPoint>& c) {
  if (c.empty()) return std::nullopt;
  std::size_t j = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].l2_frac.mean > c[j].l2_frac.mean) j = i;
  if (j == 0 || j + 1 == c.size()) return x[j];
  const double y0 = c[j - 1].l2_frac.mean;
  const double y1 = c[j].l2_frac.mean;
  const double y2 = c[j + 1].l2_frac.mean;
  const double curv = y0 - 2.0 * y1 + y2;
  if (curv >= 0.0) return x[j];
  // Vertex of the parabola through three equally spaced points.
  const double h = (x[j + 1] - x[j - 1]) / 2.0;
  return x[j] + h * 0.5 * (y0 - y2) / curv;
}

inline std::vector<CanonicalPoint> exact_curve(const Graph& g, std::span<const double> ps, std::size_t large) {
  std::vector<CanonicalPoint> out;
  const std::size_t th[] = {large};
  const double n = static_cast<double>(g.vertex_count());
  for (double p : ps) {
    const auto st = exact::exact_cluster_stats(g, p, th);
    CanonicalPoint pt;
    pt.p = p;
    pt.l1_frac = {st.mean_l1 / n, 0.0};
    pt.l2_frac = {st.mean_l2 / n, 0.0};
    pt.any_large = {{st.any_large[0], 0.0}};
    pt.two_large = {{st.two_large[0], 0.0}};
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace detail

/// Sweeps one family once and derives both the threshold summary and the
/// two-large-component summary from the same ensemble.
inline SizeScan scan_family(const FamilySpec& spec, std::size_t trials, std::uint64_t seed, const ScanOptions& opt) {
  const Graph g = generate(spec);
  SizeScan out;
  out.family = to_string(spec);
  out.n = g.vertex_count();
  out.m = g.edge_count();
  out.large = opt.large.size_for(out.n);
  out.x = opt.grid;
  const double unit = opt.per_vertex_units ? 1.0 / static_cast<double>(out.n) : 1.0;
  std::vector<double> ps;
  for (double x : opt.grid) ps.push_back(std::min(1.0, x * unit));

  if (opt.exact_when_small && out.m <= exact::stats_edge_limit) {
    out.exact = true;
    out.curve = detail::exact_curve(g, ps, out.large);
  } else {
    SweepOptions so;
    so.threads = opt.threads;
    so.p_grid = ps;
    out.curve = newman_ziff_sweep(g, trials, {out.large}, seed, so).canonical();
  }
  out.crossing = detail::crossing_of(out.x, out.curve, opt.a);
  out.l2_peak = detail::l2_peak_of(out.x, out.curve);
  for (std::size_t i = 0; i < out.curve.size(); ++i) {
    const auto& d = out.curve[i].two_large[0];
    if (d.mean > out.sup_delta) {
      out.sup_delta = d.mean;
      out.sup_delta_se = d.se;
      out.sup_delta_at = out.x[i];
    }
  }
  return out;
}

namespace detail {

inline Json scan_config(const std::vector<FamilySpec>& specs, std::size_t trials, const ScanOptions& opt) {
  Json cfg;
  Json fams = Json::array();
  for (const auto& s : specs) fams.push_back(to_string(s));
  cfg["families"] = fams;
  cfg["trials"] = trials;
  cfg["mode"] = "newman_ziff_sweep";
  cfg["grid_points"] = opt.grid.size();
  cfg["grid_lo"] = opt.grid.empty() ? 0.0 : opt.grid.front();
  cfg["grid_hi"] = opt.grid.empty() ? 0.0 : opt.grid.back();
  cfg["grid_units"] = opt.per_vertex_units ? "1/n" : "p";
  cfg["a"] = opt.a;
  cfg["large_mode"] = opt.large.mode == LargeThreshold::Mode::linear ? "c" : "omega";
  cfg["large_value"] = opt.large.value;
  cfg["exact_when_small"] = opt.exact_when_small;
  return cfg;
}

inline void scan_points(Json& points, const SizeScan& s) {
  for (std::size_t i = 0; i < s.curve.size(); ++i) {
    const auto& c = s.curve[i];
    Json pt;
    pt["family"] = s.family;
    pt["n"] = s.n;
    pt["x"] = s.x[i];
    pt["p"] = c.p;
    pt["L1_frac"] = c.l1_frac.mean;
    pt["L1_frac_se"] = c.l1_frac.se;
    pt["L2_frac"] = c.l2_frac.mean;
    pt["L2_frac_se"] = c.l2_frac.se;
    pt["P_two_large"] = c.two_large[0].mean;
    pt["P_two_large_se"] = c.two_large[0].se;
    points.push_back(std::move(pt));
  }
}

/// The crossing and the L2 peak are two pseudo-critical points that approach
/// the threshold from opposite sides at these sizes; the bracket spans both.
inline Json scan_summary(const SizeScan& s, double resolution) {
  Json out;
  out["family"] = s.family;
  out["n"] = s.n;
  out["edges"] = s.m;
  out["large_size"] = s.large;
  out["exact"] = s.exact;
  out["crossing"] = s.crossing ? Json(*s.crossing) : Json(nullptr);
  out["l2_peak"] = s.l2_peak ? Json(*s.l2_peak) : Json(nullptr);
  if (s.crossing && s.l2_peak) {
    out["bracket_lo"] = std::min(*s.crossing, *s.l2_peak);
    out["bracket_hi"] = std::max(*s.crossing, *s.l2_peak);
    out["bracket_width"] = std::fabs(*s.crossing - *s.l2_peak);
  } else {
    out["bracket_lo"] = out["bracket_hi"] = out["bracket_width"] = nullptr;
  }
  out["resolution"] = resolution;
  out["sup_delta"] = s.sup_delta;
  out["sup_delta_se"] = s.sup_delta_se;
  out["sup_delta_at"] = s.sup_delta_at;
  return out;
}

inline ExperimentReport scan_report(const std::string& id, const std::vector<FamilySpec>& specs, std::size_t trials,
                                    std::uint64_t seed, const ScanOptions& opt) {
  detail::Stopwatch clock;
  ExperimentReport rep;
  rep.id = id;
  rep.seed = seed;
  rep.config = scan_config(specs, trials, opt);
  const double resolution = opt.grid.size() > 1 ? opt.grid[1] - opt.grid[0] : 0.0;
  Json sizes = Json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto s = scan_family(specs[i], trials, derive_seed(seed, i), opt);
    scan_points(rep.points, s);
    sizes.push_back(scan_summary(s, resolution));
  }
  rep.summary["sizes"] = sizes;
  rep.runtime_s = clock.seconds();
  return rep;
}

}  // namespace detail

/// Smoothed E[L1]/n over the grid per family, with the a-crossing and the L2
/// peak bracketing the threshold.
inline ExperimentReport threshold_scan(const std::vector<FamilySpec>& specs, std::size_t trials, std::uint64_t seed,
                                       const ScanOptions& opt = {}) {
  return detail::scan_report("threshold_scan", specs, trials, seed, opt);
}

/// Smoothed P(at least two components >= large) over the grid per family,
/// summarized by its supremum; same ensemble as threshold_scan.
inline ExperimentReport uniqueness_scan(const std::vector<FamilySpec>& specs, std::size_t trials, std::uint64_t seed,
                                        const ScanOptions& opt = {}) {
  auto rep = detail::scan_report("uniqueness_scan", specs, trials, seed, opt);
  Json sup = Json::array();
  for (const auto& s : rep.summary["sizes"]) sup.push_back(s["sup_delta"]);
  bool nonincreasing = true;
  for (std::size_t i = 1; i < sup.size(); ++i) nonincreasing = nonincreasing && sup[i].get<double>() <= sup[i - 1].get<double>();
  rep.summary["sup_delta_by_size"] = sup;
  rep.summary["sup_delta_nonincreasing"] = nonincreasing;
  return rep;
}

// ---------------------------------------------------------------------------
// Cycle counterexamples

/// P(at least two components of size >= large) for bond percolation on C_n.
/// The arc through vertex 0 has size s < n in s rotations, each with weight
/// p^{s-1} (1-p)^2; the rest is an independent path of n - s vertices whose
/// run-length laws come from recursions on the first component. Every term is
/// nonnegative, so there is no cancellation.
inline double cycle_two_large_exact(std::size_t n, double p, std::size_t large) {
  require(n >= 3, ErrorKind::precondition, "cycle needs n >= 3");
  require_probability(p);
  require(large >= 1, ErrorKind::precondition, "large size must be positive");
  const double q = 1.0 - p;
  std::vector<double> pw(n + 1, 1.0);  // pw[t] = p^{t-1}
  for (std::size_t t = 2; t <= n; ++t) pw[t] = pw[t - 1] * p;
  // none[r], one[r]: a path of r vertices has no / exactly one component >= large.
  std::vector<double> none(n + 1, 0.0), one(n + 1, 0.0);
  none[0] = 1.0;
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t t = 1; t <= r; ++t) {
      const bool big = t >= large;
      if (t == r) {
        (big ? one[r] : none[r]) += pw[t];
      } else {
        if (!big) none[r] += pw[t] * q * none[r - t];
        one[r] += pw[t] * q * (big ? none[r - t] : one[r - t]);
      }
    }
  }
  double total = 0.0;
  for (std::size_t s = 1; s < n; ++s) {
    const std::size_t r = n - s;
    const double rest = s >= large ? 1.0 - none[r] : 1.0 - none[r] - one[r];
    total += static_cast<double>(s) * pw[s] * q * q * std::max(0.0, rest);
  }
  return std::clamp(total, 0.0, 1.0);
}

/// Simulation oracle that bypasses the percolation engine: draw the number
/// of closed edges, place them at distinct uniform positions, read off the arcs.
inline Estimate cycle_closed_edge_oracle(std::size_t n, double p, std::size_t large, std::size_t trials,
                                         std::uint64_t seed) {
  require(n >= 3, ErrorKind::precondition, "cycle needs n >= 3");
  require_probability(p);
  std::size_t hits = 0;
  std::vector<std::uint32_t> slots(n);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, t);
    const auto k = static_cast<std::size_t>(rng.binomial(n, 1.0 - p));
    if (k < 2) continue;
    // Partial Fisher-Yates: the first k slots are a uniform k-subset.
    std::iota(slots.begin(), slots.end(), 0U);
    for (std::size_t i = 0; i < k; ++i) std::swap(slots[i], slots[i + rng.below(n - i)]);
    std::vector<std::uint32_t> cut(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(cut.begin(), cut.end());
    std::size_t big = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t arc = i + 1 < k ? cut[i + 1] - cut[i] : cut[0] + n - cut[k - 1];
      big += arc >= large ? 1 : 0;
    }
    hits += big >= 2 ? 1 : 0;
  }
  return detail::proportion(hits, trials);
}

enum class CounterexampleKind { cycle, cycle_product };

struct CounterexampleOptions {
  double c = 0.25;             // large = ceil(c |V|)
  double expected_cuts = 3.0;  // p chosen so the expected number of full cuts is this
  std::size_t product_with = 3;  // H = K_h in C_n x H
  unsigned threads = default_threads();
  bool with_oracle = true;
};

/// Retention p = 1 - (expected_cuts / n)^{1/h}: a full cut of C_n x K_h at one
/// position needs all h parallel edges closed, so n (1-p)^h cuts are expected.
inline double counterexample_p(std::size_t n, std::size_t h, double expected_cuts) {
  return 1.0 - std::pow(expected_cuts / static_cast<double>(n), 1.0 / static_cast<double>(h));
}

inline ExperimentReport counterexample_demo(CounterexampleKind kind, std::size_t n, std::size_t trials,
                                            std::uint64_t seed, const CounterexampleOptions& opt = {}) {
  detail::Stopwatch clock;
  const FamilySpec spec = kind == CounterexampleKind::cycle ? cycle(n) : product(cycle(n), complete(opt.product_with));
  const Graph g = generate(spec);
  const std::size_t h = kind == CounterexampleKind::cycle ? 1 : opt.product_with;
  const double p = counterexample_p(n, h, opt.expected_cuts);
  const std::size_t large = large_size_threshold(g.vertex_count(), opt.c);
  require(large >= 2, ErrorKind::precondition, "n too small: c |V| must be at least 2");

  ExperimentReport rep;
  rep.id = "counterexample_demo";
  rep.seed = seed;
  rep.config["family"] = to_string(spec);
  rep.config["kind"] = kind == CounterexampleKind::cycle ? "cycle" : "cycle_product";
  rep.config["n"] = n;
  rep.config["p"] = p;
  rep.config["c"] = opt.c;
  rep.config["large_size"] = large;
  rep.config["trials"] = trials;

  const bool exact = g.edge_count() <= exact::stats_edge_limit;
  Estimate est;
  if (exact) {
    est.mean = exact::exact_size_event_prob(
        g, p, [&](std::span<const std::size_t> sizes) { return count_components_at_least(sizes, large) >= 2; });
  } else {
    std::vector<char> hit(trials, 0);
    parallel_for(trials, opt.threads, [&](std::size_t t, unsigned) {
      Rng rng = Rng::stream(seed, t);
      hit[t] = count_components_at_least(sample(g, p, rng).sizes, large) >= 2 ? 1 : 0;
    });
    est = detail::proportion(static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1)), trials);
  }
  Json pt;
  pt["family"] = to_string(spec);
  pt["n"] = g.vertex_count();
  pt["p"] = p;
  pt["estimate"] = est.mean;
  pt["se"] = est.se;
  pt["method"] = exact ? "exact" : "monte_carlo";
  rep.points.push_back(pt);

  rep.summary["estimate"] = est.mean;
  rep.summary["se"] = est.se;
  rep.summary["exact"] = exact;
  if (kind == CounterexampleKind::cycle) {
    rep.summary["closed_form"] = cycle_two_large_exact(n, p, large);
    if (opt.with_oracle && !exact) {
      const auto oracle = cycle_closed_edge_oracle(n, p, large, trials, detail::derive_seed(seed, 1));
      rep.summary["oracle"] = oracle.mean;
      rep.summary["oracle_se"] = oracle.se;
      const double se = std::hypot(est.se, oracle.se);
      rep.summary["z_vs_oracle"] = se > 0.0 ? (est.mean - oracle.mean) / se : 0.0;
    }
  }
  rep.runtime_s = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Two-phase sprinkling

struct SprinklingOptions {
  /// Size threshold for phase-1 components; when unset, m = (1 + eps/3)^{g/2}
  /// with g the girth of the generated graph.
  std::optional<double> m_threshold;
  /// Isoperimetric constant used to evaluate the hypothesis constant C, if known.
  std::optional<double> iso_c;
  double a = 0.1;
  unsigned threads = default_threads();
};

inline ExperimentReport sprinkling_giant_demo(const FamilySpec& spec, double eps, std::size_t trials, std::uint64_t seed,
                                              const SprinklingOptions& opt = {}) {
  detail::Stopwatch clock;
  require(eps >= 0.0, ErrorKind::precondition, "eps must be nonnegative");
  require(trials >= 1, ErrorKind::precondition, "need at least one trial");
  const Graph g = generate(spec);
  const auto metrics = graph_metrics(g);
  require(metrics.min_degree == metrics.max_degree && metrics.max_degree >= 3, ErrorKind::precondition,
          "sprinkling demo needs a d-regular graph with d >= 3");
  const std::size_t d = metrics.max_degree;
  const bool lattice = std::holds_alternative<family::Box>(spec.kind);
  // Lattice boxes use 1/(2 dim) = 1/degree as the reference threshold and are exploratory.
  const double denom = lattice ? static_cast<double>(d) : static_cast<double>(d - 1);
  const double p = (1.0 + eps) / denom;
  const double p1 = (1.0 + eps / 2.0) / denom;
  require(p <= 1.0, ErrorKind::precondition, "eps too large: p = (1+eps)/(d-1) exceeds 1");
  const double p2 = sprinkle_split(p, p1);
  const auto gir = girth(g);
  const double m = opt.m_threshold ? *opt.m_threshold
                                   : std::pow(1.0 + eps / 3.0, static_cast<double>(gir.value_or(g.vertex_count())) / 2.0);
  const auto m_size = static_cast<std::size_t>(std::max(1.0, std::ceil(m - 1e-9)));
  const double n = static_cast<double>(g.vertex_count());

  std::vector<double> phase1(trials), giant(trials), marginal(trials), giant_phase1(trials);
  parallel_for(trials, opt.threads, [&](std::size_t t, unsigned) {
    const auto r = sprinkle_union(g, SprinklePlan{{p1, p2}}, detail::derive_seed(seed, t));
    const auto first = components_of(g, r.phases[0]).sizes;
    std::size_t in_big = 0;
    for (std::size_t s : first) {
      if (s < m_size) break;
      in_big += s;
    }
    phase1[t] = static_cast<double>(in_big) / n;
    giant_phase1[t] = static_cast<double>(first.front()) / n;
    giant[t] = static_cast<double>(r.combined.sizes.front()) / n;
    marginal[t] = static_cast<double>(r.combined.open_count()) / static_cast<double>(g.edge_count());
  });

  ExperimentReport rep;
  rep.id = "sprinkling_giant_demo";
  rep.seed = seed;
  rep.config["family"] = to_string(spec);
  rep.config["eps"] = eps;
  rep.config["trials"] = trials;
  rep.config["degree"] = d;
  rep.config["p"] = p;
  rep.config["p1"] = p1;
  rep.config["p2"] = p2;
  rep.config["m"] = m;
  rep.config["m_mode"] = opt.m_threshold ? "fixed" : "girth";
  rep.config["girth"] = gir ? Json(*gir) : Json(nullptr);
  rep.config["exploratory"] = lattice;
  for (std::size_t t = 0; t < trials; ++t) {
    Json pt;
    pt["trial"] = t;
    pt["phase1_frac_in_ge_m"] = phase1[t];
    pt["phase1_L1_frac"] = giant_phase1[t];
    pt["union_L1_frac"] = giant[t];
    pt["union_edge_frac"] = marginal[t];
    rep.points.push_back(pt);
  }
  const auto e_phase1 = detail::mean_se(phase1);
  const auto e_giant = detail::mean_se(giant);
  const auto e_marg = detail::mean_se(marginal);
  // Pooled binomial standard error over all edge trials.
  const double edge_trials = static_cast<double>(g.edge_count()) * static_cast<double>(trials);
  const double marg_se = std::sqrt(p * (1.0 - p) / edge_trials);
  const double survival = bounds::gw_survival(d, p);
  rep.summary["phase1_frac_in_ge_m"] = e_phase1.mean;
  rep.summary["phase1_frac_in_ge_m_se"] = e_phase1.se;
  rep.summary["union_giant_frac"] = e_giant.mean;
  rep.summary["union_giant_frac_se"] = e_giant.se;
  rep.summary["gw_survival"] = survival;
  // A vertex of a d-regular graph has d, not d-1, subtrees below it.
  rep.summary["root_survival"] = 1.0 - std::pow(1.0 - p * survival, static_cast<double>(d));
  rep.summary["union_edge_frac"] = e_marg.mean;
  rep.summary["union_edge_frac_se"] = marg_se;
  rep.summary["union_edge_frac_z"] = marg_se > 0.0 ? (e_marg.mean - p) / marg_se : 0.0;
  if (opt.iso_c && gir) {
    const auto c31 = bounds::prop31_constant(static_cast<double>(d), *opt.iso_c, static_cast<double>(*gir), eps, opt.a);
    rep.summary["prop31_C"] = c31.C;
    rep.summary["prop31_hypothesis"] = c31.hypothesis_holds;
  }
  rep.summary["exploratory"] = lattice;
  rep.runtime_s = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Isoperimetry of percolated expanders

struct CheegerScanOptions {
  std::uint64_t work_limit = default_work_limit;
  unsigned threads = default_threads();
};

/// The open subgraph of a sample as a graph on the same vertex set.
inline Graph open_subgraph(const PercSample& s) {
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < s.graph->edge_count(); ++e)
    if (s.open[e]) edges.push_back(s.graph->edge(e));
  return build_graph(s.graph->vertex_count(), std::move(edges));
}

/// For each p: how often the exact Cheeger constant of G(p) is at least
/// 1 / log2 n. All p share the uniforms of a trial, so samples are nested.
inline ExperimentReport percolated_expander_cheeger(const FamilySpec& spec, std::vector<double> p_list,
                                                    std::size_t trials, std::uint64_t seed,
                                                    const CheegerScanOptions& opt = {}) {
  detail::Stopwatch clock;
  require(!p_list.empty(), ErrorKind::precondition, "need at least one p");
  require(trials >= 1, ErrorKind::precondition, "need at least one trial");
  std::sort(p_list.begin(), p_list.end());
  const Graph g = generate(spec);
  const std::size_t n = g.vertex_count();
  require(n >= 2 && n <= exact_vertex_limit, ErrorKind::size_guard,
          "percolated_expander_cheeger computes exact Cheeger constants and allows 2 <= n <= 64");
  const double target = 1.0 / std::log2(static_cast<double>(n));
  const std::size_t k = p_list.size();
  std::vector<double> value(trials * k);
  parallel_for(trials, opt.threads, [&](std::size_t t, unsigned) {
    for (std::size_t i = 0; i < k; ++i) {
      Rng rng = Rng::stream(seed, t);
      const auto s = sample(g, p_list[i], rng);
      value[t * k + i] = edge_cheeger_exact(open_subgraph(s), opt.work_limit, 1).edge_ratio;
    }
  });

  ExperimentReport rep;
  rep.id = "percolated_expander_cheeger";
  rep.seed = seed;
  rep.config["family"] = to_string(spec);
  rep.config["p_list"] = p_list;
  rep.config["trials"] = trials;
  rep.config["threshold"] = target;
  rep.config["base_cheeger"] = edge_cheeger_exact(g, opt.work_limit, opt.threads).edge_ratio;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t pass = 0;
    std::vector<double> vals;
    for (std::size_t t = 0; t < trials; ++t) {
      const double c = value[t * k + i];
      vals.push_back(c);
      pass += c >= target - 1e-12 ? 1 : 0;
    }
    const auto freq = detail::proportion(pass, trials);
    const auto mean_c = detail::mean_se(vals);
    Json pt;
    pt["p"] = p_list[i];
    pt["frequency"] = freq.mean;
    pt["frequency_se"] = freq.se;
    pt["mean_cheeger"] = mean_c.mean;
    pt["mean_cheeger_se"] = mean_c.se;
    std::size_t pair_violations = 0;
    if (i > 0)
      for (std::size_t t = 0; t < trials; ++t)
        if (value[t * k + i] < value[t * k + i - 1] - 1e-12) ++pair_violations;
    pt["coupled_decreases_from_previous"] = pair_violations;
    violations += pair_violations;
    rep.points.push_back(pt);
  }
  rep.summary["coupled_decreases"] = violations;
  rep.runtime_s = clock.seconds();
  return rep;
}

}  // namespace percolab::experiments
