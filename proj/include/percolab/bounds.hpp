#pragma once

// Closed-form tail bounds, radii and constants, evaluated in log space.

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "percolab/error.hpp"
#include "percolab/percolation.hpp"
#include "percolab/pivotal.hpp"

namespace percolab::bounds {

/// A bound in linear scale together with its natural log. Values below the
/// smallest normal double are reported as 0 with `underflow` set; compare
/// `log_value` when ordering such bounds.
struct BoundValue {
  double value = 0.0;
  double log_value = 0.0;
  bool underflow = false;
};

inline BoundValue from_log(double log_value) {
  BoundValue out;
  out.log_value = log_value;
  if (log_value < std::log(DBL_MIN)) {
    out.value = 0.0;
    out.underflow = true;
  } else {
    out.value = std::exp(log_value);
  }
  return out;
}

namespace detail {

/// log((Delta e) A^b), required negative.
inline double log_tail_ratio(double delta, double b, double A) {
  require(delta >= 1.0, ErrorKind::precondition, "Delta must be at least 1");
  require(b > 0.0, ErrorKind::precondition, "expansion constant b must be positive");
  require(A > 0.0 && A < 1.0, ErrorKind::precondition, "margin A must lie in (0, 1)");
  const double lq = std::log(delta) + 1.0 + b * std::log(A);
  require(lq < 0.0, ErrorKind::precondition, "bound is vacuous: (Delta e) A^b must be < 1");
  return lq;
}

/// log(1 - exp(lq)) for lq < 0.
inline double log_one_minus_exp(double lq) { return std::log(-std::expm1(lq)); }

inline double log_base(double x, double base) { return std::log(x) / std::log(base); }

}  // namespace detail

/// (1/c) ((Delta e) A^b)^{c n} / (1 - (Delta e) A^b).
inline BoundValue lemma22_tail(double n, double delta, double b, double A, double c) {
  require(n >= 1.0, ErrorKind::precondition, "n must be at least 1");
  require(c > 0.0, ErrorKind::precondition, "c must be positive");
  const double lq = detail::log_tail_ratio(delta, b, A);
  return from_log(-std::log(c) + c * n * lq - detail::log_one_minus_exp(lq));
}

/// (n / n^omega) ((Delta e) A^b)^{n^omega} / (1 - (Delta e) A^b).
inline BoundValue thm28_tail(double n, double delta, double b, double A, double omega) {
  require(n >= 1.0, ErrorKind::precondition, "n must be at least 1");
  require(omega > 0.0 && omega <= 1.0, ErrorKind::precondition, "omega must lie in (0, 1]");
  const double lq = detail::log_tail_ratio(delta, b, A);
  return from_log((1.0 - omega) * std::log(n) + std::pow(n, omega) * lq - detail::log_one_minus_exp(lq));
}

/// Ball-growth radius: ceil(-log_{1+b}(2(1-k))) + ceil(-log_{1+b}(2c)) + 1,
/// one more than the distance at which the two balls must meet.
inline std::size_t lemma26_radius(double b, double c, double k) {
  require(b > 0.0, ErrorKind::precondition, "b must be positive");
  require(c > 0.0 && c < 0.5 && k > 0.5 && k < 1.0, ErrorKind::precondition, "radius needs 0 < c < 1/2 < k < 1");
  const double grow_complement = -detail::log_base(2.0 * (1.0 - k), 1.0 + b);
  const double grow_set = -detail::log_base(2.0 * c, 1.0 + b);
  return robust_ceil(grow_complement) + robust_ceil(grow_set) + 1;
}

/// ceil((1 - omega) log_{1+b} n).
inline std::size_t rn_radius(double n, double b, double omega) {
  require(n >= 1.0, ErrorKind::precondition, "n must be at least 1");
  require(b > 0.0, ErrorKind::precondition, "b must be positive");
  require(omega > 0.0 && omega <= 1.0, ErrorKind::precondition, "omega must lie in (0, 1]");
  return robust_ceil((1.0 - omega) * detail::log_base(n, 1.0 + b));
}

struct MinOmega {
  double omega = 0.0;
  double log_term = 0.0;  // L = log_{1+b}(4 Delta^3 / x^2)
};

/// Left side of (1 - omega) L + (1/2 - omega) < 0.
inline double omega_condition(double b, double delta, double x, double omega) {
  const double L = detail::log_base(4.0 * delta * delta * delta / (x * x), 1.0 + b);
  return (1.0 - omega) * L + (0.5 - omega);
}

/// Smallest omega with (1 - omega) L + (1/2 - omega) < 0: omega* = (L + 1/2) / (L + 1).
inline MinOmega min_omega(double b, double delta, double x) {
  require(b > 0.0, ErrorKind::precondition, "b must be positive");
  require(delta >= 1.0, ErrorKind::precondition, "Delta must be at least 1");
  require(x > 0.0 && x <= 0.5, ErrorKind::precondition, "x must lie in (0, 1/2]");
  const double L = detail::log_base(4.0 * delta * delta * delta / (x * x), 1.0 + b);
  return {(L + 0.5) / (L + 1.0), L};
}

/// 10 gamma Delta^{3 r} x^{-2 r} 2^{2 r} n^{1/2 - omega}, r = rn_radius(n, b, omega).
inline BoundValue thm28_delta_bound(double n, double delta, double b, double x, double omega, double gamma) {
  require(gamma > 0.0, ErrorKind::precondition, "gamma must be positive");
  require(x > 0.0 && x <= 0.5, ErrorKind::precondition, "x must lie in (0, 1/2]");
  require(delta >= 1.0, ErrorKind::precondition, "Delta must be at least 1");
  const auto r = static_cast<double>(rn_radius(n, b, omega));
  const double per_step = 3.0 * std::log(delta) - 2.0 * std::log(x) + 2.0 * std::numbers::ln2;
  return from_log(std::log(10.0 * gamma) + r * per_step + (0.5 - omega) * std::log(n));
}

// ---------------------------------------------------------------------------
// Uniqueness chain with the existential alpha replaced by pivotal_bound:
// alpha / sqrt(m) := pivotal_bound(m, x).

/// (floor(1/c) - 1) pivotal_bound(m, x): P(a uniform edge is an L-bridge).
inline BoundValue lbridge_bound(std::size_t m, double c, double x) {
  require(c > 0.0 && c <= 1.0, ErrorKind::precondition, "c must lie in (0, 1]");
  const double levels = std::floor(1.0 / c + 1e-12) - 1.0;
  if (levels <= 0.0) return {0.0, -std::numeric_limits<double>::infinity(), false};
  return from_log(std::log(levels) + std::log(pivotal_bound(m, x)));
}

/// (Delta^r / n) m lbridge_bound: P(the ball B(w, r) around a uniform vertex holds an L-bridge).
inline BoundValue ball_lbridge_bound(std::size_t n, std::size_t m, double delta, std::size_t r, double c, double x) {
  require(n >= 1, ErrorKind::precondition, "n must be at least 1");
  require(delta >= 1.0, ErrorKind::precondition, "Delta must be at least 1");
  const auto inner = lbridge_bound(m, c, x);
  return from_log(static_cast<double>(r) * std::log(delta) - std::log(static_cast<double>(n)) +
                  std::log(static_cast<double>(m)) + inner.log_value);
}

/// 2 x^{-2r} Delta^{2 r^2} ball_lbridge_bound: the resulting bound on the
/// probability of two large components.
inline BoundValue two_large_bound(std::size_t n, std::size_t m, double delta, std::size_t r, double c, double x) {
  const auto ball = ball_lbridge_bound(n, m, delta, r, c, x);
  const double rr = static_cast<double>(r);
  return from_log(std::numbers::ln2 - 2.0 * rr * std::log(x) + 2.0 * rr * rr * std::log(delta) + ball.log_value);
}

/// gamma with Delta^{r+1}/2 n^{1-omega} alpha/sqrt(m) = gamma Delta^r n^{1/2-omega}, i.e.
/// (Delta/2) sqrt(n) pivotal_bound(m, x).
inline double gamma_surrogate(std::size_t n, std::size_t m, double delta, double x) {
  return delta / 2.0 * std::sqrt(static_cast<double>(n)) * pivotal_bound(m, x);
}

struct Prop31 {
  double C = 0.0;
  double first_term = 0.0;   // (c/2) (eps / 2d)^{d / (c a)}
  double second_term = 0.0;  // 3 ln 2 / (1 + eps/3)^{g/2}
  double m = 0.0;            // (1 + eps/3)^{g/2}
  double p = 0.0;            // (1 + eps) / (d - 1)
  double p1 = 0.0;           // (1 + eps/2) / (d - 1)
  bool hypothesis_holds = false;  // C > 0
};

inline Prop31 prop31_constant(double d, double c, double g, double eps, double a) {
  require(d >= 3.0, ErrorKind::precondition, "d must be at least 3");
  require(c > 0.0, ErrorKind::precondition, "isoperimetric number c must be positive");
  require(g >= 3.0, ErrorKind::precondition, "girth must be at least 3");
  require(eps >= 0.0, ErrorKind::precondition, "eps must be nonnegative");
  require(a > 0.0, ErrorKind::precondition, "a must be positive");
  Prop31 out;
  const double log_m = (g / 2.0) * std::log1p(eps / 3.0);
  out.m = std::exp(log_m);
  out.first_term = eps == 0.0 ? 0.0 : std::exp(std::log(c / 2.0) + (d / (c * a)) * std::log(eps / (2.0 * d)));
  out.second_term = std::exp(std::log(3.0 * std::numbers::ln2) - log_m);
  out.C = out.first_term - out.second_term;
  out.p = (1.0 + eps) / (d - 1.0);
  out.p1 = (1.0 + eps / 2.0) / (d - 1.0);
  out.hypothesis_holds = out.C > 0.0;
  return out;
}

/// Survival probability of a Galton-Watson process with Binomial(d - 1, p)
/// offspring: the largest root s of s = 1 - (1 - p s)^{d - 1}, i.e. 1 - q for
/// the smallest fixed point q of the generating function. Solved in s with
/// expm1/log1p so that near-critical survival (s ~ 1e-9) keeps full relative
/// precision. The right side minus s is concave and negative at s = 1, so Newton
/// steps from 1 decrease monotonically to the root.
inline double gw_survival(std::size_t d, double p) {
  require(d >= 2, ErrorKind::precondition, "d must be at least 2");
  require_probability(p);
  const double k = static_cast<double>(d - 1);
  if (p == 1.0) return 1.0;
  if (p * k <= 1.0) return 0.0;  // mean offspring <= 1: extinction is certain
  double s = 1.0;
  for (int it = 0; it < 1000; ++it) {
    const double lg = std::log1p(-p * s);
    const double h = -std::expm1(k * lg) - s;
    const double slope = k * p * std::exp((k - 1.0) * lg) - 1.0;
    if (slope >= 0.0) break;  // only reachable through rounding at the root
    const double next = s - h / slope;
    if (!(next < s)) break;
    const double step = s - next;
    s = next;
    if (step <= 1e-17 * s) break;
  }
  return s;
}

/// (n / log2 n) q^{ceil(log2 n)} / (1 - q) with q = (Delta e) 2^b A^{b/2} < 1/2:
/// the geometric tail sum_{r >= log2 n} q^r scaled by n / log2 n.
inline BoundValue prop51_tail(double n, double delta, double b, double A) {
  require(n >= 2.0, ErrorKind::precondition, "n must be at least 2");
  require(delta >= 1.0, ErrorKind::precondition, "Delta must be at least 1");
  require(b > 0.0, ErrorKind::precondition, "b must be positive");
  require(A > 0.0 && A < 1.0, ErrorKind::precondition, "A must lie in (0, 1)");
  const double lq = std::log(delta) + 1.0 + b * std::numbers::ln2 + (b / 2.0) * std::log(A);
  require(lq < -std::numbers::ln2, ErrorKind::precondition, "bound needs (Delta e) 2^b A^{b/2} < 1/2");
  const double log2n = std::log2(n);
  const double r0 = static_cast<double>(robust_ceil(log2n));
  return from_log(std::log(n) - std::log(log2n) + r0 * lq - detail::log_one_minus_exp(lq));
}

// ---------------------------------------------------------------------------
// Parameter table

struct BoundParams {
  double b = 1.0;
  double Delta = 3.0;
  double x = 0.25;
  double A = 0.1;
  double c = 0.25;
  double k = 0.75;
  double omega = 0.97;
  double eps = 0.5;
  double d = 4.0;
  double g = 30.0;
  double a = 0.1;
  double n = 1024.0;
  double gamma = 1.0;
};

struct TableRow {
  std::string name;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string note;  // why the value is undefined, or how it was obtained
};

inline std::vector<TableRow> bounds_table(const BoundParams& q) {
  std::vector<TableRow> rows;
  auto add = [&](const std::string& name, auto&& eval) {
    try {
      rows.push_back({name, eval(), {}});
    } catch (const Error& e) {
      rows.push_back({name, std::numeric_limits<double>::quiet_NaN(), e.what()});
    }
  };
  add("lemma22_tail", [&] { return lemma22_tail(q.n, q.Delta, q.b, q.A, q.c).value; });
  add("lemma22_tail_log", [&] { return lemma22_tail(q.n, q.Delta, q.b, q.A, q.c).log_value; });
  add("thm28_tail", [&] { return thm28_tail(q.n, q.Delta, q.b, q.A, q.omega).value; });
  add("thm28_tail_log", [&] { return thm28_tail(q.n, q.Delta, q.b, q.A, q.omega).log_value; });
  add("lemma26_radius", [&] { return static_cast<double>(lemma26_radius(q.b, q.c, q.k)); });
  add("rn_radius", [&] { return static_cast<double>(rn_radius(q.n, q.b, q.omega)); });
  add("min_omega", [&] { return min_omega(q.b, q.Delta, q.x).omega; });
  add("min_omega_L", [&] { return min_omega(q.b, q.Delta, q.x).log_term; });
  add("omega_condition", [&] { return omega_condition(q.b, q.Delta, q.x, q.omega); });
  add("thm28_delta_bound", [&] { return thm28_delta_bound(q.n, q.Delta, q.b, q.x, q.omega, q.gamma).value; });
  add("thm28_delta_bound_log",
      [&] { return thm28_delta_bound(q.n, q.Delta, q.b, q.x, q.omega, q.gamma).log_value; });
  add("prop31_C", [&] { return prop31_constant(q.d, q.c, q.g, q.eps, q.a).C; });
  add("prop31_m", [&] { return prop31_constant(q.d, q.c, q.g, q.eps, q.a).m; });
  add("prop31_p", [&] { return prop31_constant(q.d, q.c, q.g, q.eps, q.a).p; });
  add("prop31_p1", [&] { return prop31_constant(q.d, q.c, q.g, q.eps, q.a).p1; });
  add("prop31_hypothesis", [&] { return prop31_constant(q.d, q.c, q.g, q.eps, q.a).hypothesis_holds ? 1.0 : 0.0; });
  add("gw_survival", [&] {
    return gw_survival(static_cast<std::size_t>(q.d), prop31_constant(q.d, q.c, q.g, q.eps, q.a).p);
  });
  add("prop51_tail", [&] { return prop51_tail(q.n, q.Delta, q.b, q.A).value; });

  // The chain below assumes a Delta-regular graph, so m = n Delta / 2.
  const auto n = static_cast<std::size_t>(q.n);
  const auto m = static_cast<std::size_t>(q.n * q.Delta / 2.0);
  const std::size_t first = rows.size();
  add("lbridge_bound", [&] { return lbridge_bound(m, q.c, q.x).value; });
  add("ball_lbridge_bound",
      [&] { return ball_lbridge_bound(n, m, q.Delta, lemma26_radius(q.b, q.c, q.k), q.c, q.x).value; });
  add("two_large_bound_log",
      [&] { return two_large_bound(n, m, q.Delta, lemma26_radius(q.b, q.c, q.k), q.c, q.x).log_value; });
  add("gamma_surrogate", [&] { return gamma_surrogate(n, m, q.Delta, q.x); });
  for (std::size_t i = first; i < rows.size(); ++i)
    if (rows[i].note.empty()) rows[i].note = "surrogate: alpha/sqrt(m) replaced by pivotal_bound(m, x), m = n Delta/2";
  return rows;
}

}  // namespace percolab::bounds
