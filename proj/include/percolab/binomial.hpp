#pragma once

// Binomial probabilities accurate to a few ulps in relative terms.
//
// Single values use Loader's saddle-point decomposition (Stirling remainder
// plus deviance), which stays accurate where lgamma differences lose digits
// to cancellation. Whole pmf vectors start from that value at the mode and
// walk outward with the exact ratio recurrence.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace percolab {

namespace detail {

/// log(n!) - ((n + 1/2) log n - n + log(2 pi) / 2)
inline double stirling_remainder(double n) {
  static constexpr std::array<double, 16> table = {
      0.0,
      0.08106146679532725821967026,
      0.04134069595540929409382208,
      0.02767792568499833914878929,
      0.02079067210376509311152277,
      0.01664469118982119216319487,
      0.01387612882307074799874573,
      0.01189670994589177009505572,
      0.01041126526197209649747857,
      0.009255462182712732917728637,
      0.008330563433362871256469319,
      0.007573675487951840794972024,
      0.006942840107209529865664153,
      0.006408994188004207068439631,
      0.005951370112758847735624416,
      0.00555473355196280137103869,
  };
  constexpr double s0 = 1.0 / 12;
  constexpr double s1 = 1.0 / 360;
  constexpr double s2 = 1.0 / 1260;
  constexpr double s3 = 1.0 / 1680;
  constexpr double s4 = 1.0 / 1188;
  if (n <= 15) return table[static_cast<std::size_t>(n)];
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

/// Deviance term x log(x / np) + np - x, stable near x = np.
inline double deviance(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace detail

/// P(X = k) for X ~ Binomial(n, p).
inline double binomial_pmf(std::size_t k, std::size_t n, double p) {
  if (k > n) return 0.0;
  const double q = 1.0 - p;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q <= 0.0) return k == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  if (k == 0) return std::exp(nd * std::log1p(-p));
  if (k == n) return std::exp(nd * std::log(p));
  const double kd = static_cast<double>(k);
  const double rest = nd - kd;
  const double lc = detail::stirling_remainder(nd) - detail::stirling_remainder(kd) -
                    detail::stirling_remainder(rest) - detail::deviance(kd, nd * p) - detail::deviance(rest, nd * q);
  const double lf = std::log(2 * std::numbers::pi) + std::log(kd) + std::log1p(-kd / nd);
  return std::exp(lc - 0.5 * lf);
}

/// Full pmf vector of Binomial(n, p), index k = 0..n.
inline std::vector<double> binomial_weights(std::size_t n, double p) {
  std::vector<double> w(n + 1, 0.0);
  if (p <= 0.0) {
    w.front() = 1.0;
    return w;
  }
  if (p >= 1.0) {
    w.back() = 1.0;
    return w;
  }
  const double odds = p / (1.0 - p);
  const auto mode = std::min(n, static_cast<std::size_t>(std::floor((static_cast<double>(n) + 1) * p)));
  w[mode] = binomial_pmf(mode, n, p);
  for (std::size_t k = mode; k < n && w[k] > 0.0; ++k)
    w[k + 1] = w[k] * (static_cast<double>(n - k) / static_cast<double>(k + 1)) * odds;
  for (std::size_t k = mode; k > 0 && w[k] > 0.0; --k)
    w[k - 1] = w[k] * (static_cast<double>(k) / static_cast<double>(n - k + 1)) / odds;
  return w;
}

}  // namespace percolab
