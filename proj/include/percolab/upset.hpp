#pragma once

// Monotone events over edge configurations and the Z functional whose
// integer level sets catch every edge joining two large components.

#include <cmath>
#include <functional>
#include <string>
#include <variant>

#include "percolab/graph.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

/// Y = vertices in large components, C = number of large components,
/// Z = Y / (c n) - C.
struct ZBreakdown {
  std::size_t y = 0;
  std::size_t comp_count = 0;
  double z = 0.0;
};

inline ZBreakdown z_value(std::span<const std::size_t> sizes_desc, std::size_t n, double c) {
  const std::size_t large = large_size_threshold(n, c);
  ZBreakdown out;
  for (std::size_t s : sizes_desc) {
    if (s < large) break;
    out.y += s;
    ++out.comp_count;
  }
  out.z = static_cast<double>(out.y) / (c * static_cast<double>(n)) - static_cast<double>(out.comp_count);
  return out;
}

inline ZBreakdown z_value(const PercSample& s, double c) { return z_value(s.sizes, s.labels.size(), c); }

/// Slack for comparing Z with an integer level; Z takes values y/(cn) - C whose
/// exact rational value may round either way.
inline constexpr double z_tolerance = 1e-9;

struct UpSetSpec {
  struct LargeComponentExists {
    std::size_t s;
  };
  struct ZAtLeast {
    double c;
    int i;
  };
  struct EdgeCountAtLeast {
    std::size_t t;
  };
  /// Caller-supplied predicate. Monotonicity is the caller's obligation;
  /// exact::verify_monotone checks it on small graphs.
  struct Custom {
    std::function<bool(const Graph&, const EdgeMask&)> predicate;
    bool declared_monotone = false;
    std::string name = "custom";
  };

  std::variant<LargeComponentExists, ZAtLeast, EdgeCountAtLeast, Custom> kind;

  static UpSetSpec large_component_exists(std::size_t s) { return {LargeComponentExists{s}}; }
  static UpSetSpec z_at_least(double c, int i) { return {ZAtLeast{c, i}}; }
  static UpSetSpec edge_count_at_least(std::size_t t) { return {EdgeCountAtLeast{t}}; }
  static UpSetSpec custom(std::function<bool(const Graph&, const EdgeMask&)> predicate, bool declared_monotone,
                          std::string name = "custom") {
    return {Custom{std::move(predicate), declared_monotone, std::move(name)}};
  }

  bool declared_monotone() const {
    if (const auto* c = std::get_if<Custom>(&kind)) return c->declared_monotone;
    return true;
  }

  bool contains(const Graph& g, const EdgeMask& config) const {
    return std::visit(
        overloaded{
            [&](const LargeComponentExists& u) {
              if (u.s <= 1) return g.vertex_count() > 0;
              const auto comps = components_of(g, config);
              return !comps.sizes.empty() && comps.sizes.front() >= u.s;
            },
            [&](const ZAtLeast& u) {
              const auto comps = components_of(g, config);
              return z_value(comps.sizes, g.vertex_count(), u.c).z >= static_cast<double>(u.i) - z_tolerance;
            },
            [&](const EdgeCountAtLeast& u) {
              return static_cast<std::size_t>(std::count(config.begin(), config.end(), true)) >= u.t;
            },
            [&](const Custom& u) { return u.predicate(g, config); },
        },
        kind);
  }

  std::string name() const {
    return std::visit(overloaded{
                          [](const LargeComponentExists& u) { return "L1>=" + std::to_string(u.s); },
                          [](const ZAtLeast& u) {
                            std::ostringstream out;
                            out << "Z_c=" << u.c << ">=" << u.i;
                            return out.str();
                          },
                          [](const EdgeCountAtLeast& u) { return "edges>=" + std::to_string(u.t); },
                          [](const Custom& u) { return u.name; },
                      },
                      kind);
  }
};

/// Parses `large:<s>`, `z:<c>,<i>`, `edges:<t>`.
inline UpSetSpec parse_upset(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, ErrorKind::invalid_argument, "up-set '" + text + "' lacks ':' parameters");
  const auto name = text.substr(0, colon);
  const auto params = detail::split(text.substr(colon + 1), ',');
  if (name == "large" && params.size() == 1) return UpSetSpec::large_component_exists(detail::parse_count(params[0], text));
  if (name == "edges" && params.size() == 1) return UpSetSpec::edge_count_at_least(detail::parse_count(params[0], text));
  if (name == "z" && params.size() == 2) {
    double c = 0.0;
    try {
      c = std::stod(params[0]);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "bad fraction in up-set '" + text + "'");
    }
    return UpSetSpec::z_at_least(c, static_cast<int>(detail::parse_count(params[1], text)));
  }
  fail(ErrorKind::invalid_argument, "unknown up-set '" + text + "'");
}

}  // namespace percolab
