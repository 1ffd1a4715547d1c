#pragma once

// Command-line front end. `run` takes the argument vector and output streams
// so the tests can drive it in-process.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percolab/bounds.hpp"
#include "percolab/exact.hpp"
#include "percolab/experiments.hpp"
#include "percolab/graph.hpp"
#include "percolab/isoperimetry.hpp"
#include "percolab/percolation.hpp"
#include "percolab/pivotal.hpp"
#include "percolab/sweep.hpp"
#include "percolab/upset.hpp"

namespace percolab::cli {

using Json = nlohmann::ordered_json;

enum Exit : int {
  ok = 0,
  internal = 1,
  usage = 2,
  precondition = 3,
  size_guard = 4,
  bad_input = 5,
  retry_exhausted = 6,
  io = 7,
};

inline constexpr std::uint64_t default_seed = 1;

/// Shortest decimal that round-trips; "inf", "-inf", "nan" otherwise.
inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Options every subcommand shares.
struct Common {
  std::optional<std::uint64_t> seed;
  unsigned threads = default_threads();
  std::string out_path;
  std::string format;
  std::string graph_path;
  std::string family;
  bool with_runtime = false;
};

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PERCOLAB_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
      throw UsageError("PERCOLAB_SEED must be a nonnegative integer, got '" + s + "'");
    return v;
  }
  return default_seed;
}

inline void add_seed_threads(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed (default: $PERCOLAB_SEED, else 1)");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

inline void add_output(CLI::App* sub, Common& c, std::vector<std::string> formats) {
  sub->add_option("--out", c.out_path, "output file (default: stdout)");
  sub->add_option("--format", c.format, "output format (default: " + formats.front() + ")")
      ->check(CLI::IsMember(formats));
}

inline void add_graph_source(CLI::App* sub, Common& c) {
  auto* g = sub->add_option("--graph", c.graph_path, "graph file");
  auto* f = sub->add_option("--family", c.family, "family spec, e.g. rr:1000,3,seed=7");
  g->excludes(f);
}

inline Graph load_graph(const Common& c) {
  if (c.graph_path.empty() == c.family.empty()) throw UsageError("give exactly one of --graph and --family");
  if (!c.family.empty()) return generate(parse_family(c.family));
  std::ifstream in(c.graph_path);
  if (!in) throw IoError("cannot open graph file '" + c.graph_path + "'");
  return read_graph(in);
}

inline std::string source_of(const Common& c) { return c.family.empty() ? "file:" + c.graph_path : c.family; }

/// Writes the payload to --out or to `out`; the one-line summary goes to
/// `out` when a file was written and to `err` otherwise, so stdout stays parseable.
inline void emit(const Common& c, const std::string& payload, const std::string& summary, std::ostream& out,
                 std::ostream& err) {
  if (c.out_path.empty()) {
    out << payload;
    err << summary << '\n';
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + c.out_path + "'");
  file << payload;
  if (!file) throw IoError("write failed for '" + c.out_path + "'");
  out << summary << " -> " << c.out_path << '\n';
}

inline std::string comment_header(const std::string& command, const Json& config, std::uint64_t seed) {
  std::ostringstream s;
  write_comment_lines(s, "percolab " + command + "\nconfig: " + config.dump() + "\nseed: " + std::to_string(seed));
  return s.str();
}

/// name=value lines, or a JSON object with the same entries.
struct Table {
  std::vector<std::pair<std::string, Json>> rows;

  void add(const std::string& name, Json value) { rows.emplace_back(name, std::move(value)); }
  void add(const std::string& name, double value) { rows.emplace_back(name, experiments::detail::number_or_null(value)); }

  std::string text(const std::string& command, const Json& config, std::uint64_t seed) const {
    std::ostringstream s;
    s << comment_header(command, config, seed);
    for (const auto& [k, v] : rows) {
      s << k << '=';
      if (v.is_number_float()) {
        s << num(v.get<double>());
      } else if (v.is_null()) {
        s << "nan";
      } else {
        s << (v.is_string() ? v.get<std::string>() : v.dump());
      }
      s << '\n';
    }
    return s.str();
  }

  std::string json(const std::string& command, const Json& config, std::uint64_t seed) const {
    Json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    Json r = Json::object();
    for (const auto& [k, v] : rows) r[k] = v;
    j["result"] = r;
    return j.dump(2) + "\n";
  }

  std::string render(const Common& c, const std::string& command, const Json& config, std::uint64_t seed) const {
    return c.format == "json" ? json(command, config, seed) : text(command, config, seed);
  }
};

/// Large-component sizes from --s, --c and --omega, in that order.
inline std::vector<std::size_t> sizes_from(std::size_t n, const std::vector<std::size_t>& s,
                                           const std::vector<double>& c, const std::vector<double>& omega) {
  std::vector<std::size_t> out = s;
  for (double x : c) out.push_back(large_size_threshold(n, x));
  for (double x : omega) out.push_back(omega_size_threshold(n, x));
  return out;
}

inline void add_size_options(CLI::App* sub, std::vector<std::size_t>& s, std::vector<double>& c,
                             std::vector<double>& omega) {
  sub->add_option("--s", s, "large-component size threshold(s)");
  sub->add_option("--c", c, "large = ceil(c n)")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--omega", omega, "large = ceil(n^omega)")->check(CLI::Range(0.0, 1.0));
}

/// key=value,key=value into a map of doubles.
inline std::vector<std::pair<std::string, double>> parse_kv(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& item : percolab::detail::split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    double v = 0.0;
    const auto r = std::from_chars(val.data(), val.data() + val.size(), v);
    if (r.ec != std::errc{} || r.ptr != val.data() + val.size())
      throw UsageError("bad number for '" + key + "': '" + val + "'");
    out.emplace_back(key, v);
  }
  return out;
}

inline void apply_bound_params(bounds::BoundParams& q, const std::string& text) {
  for (const auto& [key, v] : parse_kv(text)) {
    if (key == "b") q.b = v;
    else if (key == "delta" || key == "Delta") q.Delta = v;
    else if (key == "x") q.x = v;
    else if (key == "A") q.A = v;
    else if (key == "c") q.c = v;
    else if (key == "k") q.k = v;
    else if (key == "omega") q.omega = v;
    else if (key == "eps") q.eps = v;
    else if (key == "d") q.d = v;
    else if (key == "g") q.g = v;
    else if (key == "a") q.a = v;
    else if (key == "n") q.n = v;
    else if (key == "gamma") q.gamma = v;
    else throw UsageError("unknown bound parameter '" + key + "'");
  }
}

inline Json bound_params_json(const bounds::BoundParams& q) {
  return Json{{"b", q.b},   {"Delta", q.Delta}, {"x", q.x}, {"A", q.A}, {"c", q.c}, {"k", q.k},         {"omega", q.omega},
              {"eps", q.eps}, {"d", q.d},       {"g", q.g}, {"a", q.a}, {"n", q.n}, {"gamma", q.gamma}};
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"percolab: bond percolation on finite graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "percolab 1.0");
  Common c;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a graph from a family spec");
  gen->add_option("--family", c.family, "family spec")->required();
  gen->add_option("--out", c.out_path, "output file (default: stdout)");
  add_seed_threads(gen, c);

  // metrics
  auto* metrics = app.add_subcommand("metrics", "degree, connectivity, diameter and girth");
  add_graph_source(metrics, c);
  add_output(metrics, c, {"text", "json"});
  add_seed_threads(metrics, c);

  // cheeger
  std::string boundary = "edge";
  std::string method = "exact";
  std::uint64_t work_limit = default_work_limit;
  std::uint64_t budget = 100000;
  auto* cheeger = app.add_subcommand("cheeger", "isoperimetric constants");
  add_graph_source(cheeger, c);
  add_output(cheeger, c, {"text", "json"});
  add_seed_threads(cheeger, c);
  cheeger->add_option("--boundary", boundary, "edge or vertex")->check(CLI::IsMember({"edge", "vertex"}));
  cheeger->add_option("--method", method, "exact or upper (local search, edge boundary only)")
      ->check(CLI::IsMember({"exact", "upper"}));
  cheeger->add_option("--work-limit", work_limit, "cap on enumerated sets for the exact method");
  cheeger->add_option("--budget", budget, "move budget for the upper bound");

  // percolate
  double p = 0.5;
  std::size_t trials = 1;
  std::vector<std::size_t> s_sizes;
  std::vector<double> c_fracs, omegas;
  auto* percolate = app.add_subcommand("percolate", "independent bond percolation samples");
  add_graph_source(percolate, c);
  add_output(percolate, c, {"csv", "json"});
  add_seed_threads(percolate, c);
  percolate->add_option("--p", p, "retention probability")->required()->check(CLI::Range(0.0, 1.0));
  percolate->add_option("--trials", trials, "number of samples")->check(CLI::PositiveNumber);
  add_size_options(percolate, s_sizes, c_fracs, omegas);

  // sweep
  std::size_t stride = 1;
  bool canonical = false;
  std::size_t grid_points = 101;
  std::vector<double> p_list;
  std::size_t threshold_index = 0;
  auto* sweep = app.add_subcommand("sweep", "Newman-Ziff sweep over edge counts");
  add_graph_source(sweep, c);
  add_output(sweep, c, {"csv", "json"});
  add_seed_threads(sweep, c);
  sweep->add_option("--trials", trials, "number of sweeps")->check(CLI::PositiveNumber);
  sweep->add_option("--stride", stride, "record every stride-th edge count")->check(CLI::PositiveNumber);
  sweep->add_flag("--canonical", canonical, "emit binomially smoothed curves instead of edge-count rows");
  sweep->add_option("--grid-points", grid_points, "points of the uniform p grid on [0, 1]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  sweep->add_option("--p", p_list, "explicit p grid (overrides --grid-points)")->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--threshold-index", threshold_index, "which size threshold the canonical CSV reports");
  add_size_options(sweep, s_sizes, c_fracs, omegas);

  // oracle
  std::vector<std::string> upsets;
  auto* oracle = app.add_subcommand("oracle", "exact probabilities by enumeration (|E| <= 24)");
  add_graph_source(oracle, c);
  add_output(oracle, c, {"text", "json"});
  add_seed_threads(oracle, c);
  oracle->add_option("--p", p, "retention probability")->required()->check(CLI::Range(0.0, 1.0));
  oracle->add_option("--upset", upsets, "up-set: large:<s>, z:<c>,<i>, edges:<t>");
  add_size_options(oracle, s_sizes, c_fracs, omegas);

  // pivotal
  double x = 0.25;
  auto* pivotal = app.add_subcommand("pivotal", "Monte Carlo pivotal probabilities against the bound");
  add_graph_source(pivotal, c);
  add_output(pivotal, c, {"csv", "json"});
  add_seed_threads(pivotal, c);
  pivotal->add_option("--p", p_list, "retention probabilities")->required()->check(CLI::Range(0.0, 1.0));
  pivotal->add_option("--upset", upsets, "up-set: large:<s>, z:<c>,<i>, edges:<t>")->required();
  pivotal->add_option("--trials", trials, "pairs per (p, up-set)")->check(CLI::PositiveNumber);
  pivotal->add_option("--x", x, "margin for the bound, 0 < x <= 1/2");

  // bounds
  std::string params;
  std::string min_omega_params;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the explicit bounds as a name=value table");
  add_output(bounds_cmd, c, {"text", "json"});
  bounds_cmd->add_option("--params", params, "key=value list: b,delta,x,A,c,k,omega,eps,d,g,a,n,gamma");
  bounds_cmd->add_option("--min-omega", min_omega_params, "only the smallest admissible omega for b,delta,x");
  add_seed_threads(bounds_cmd, c);

  // experiment
  std::string recipe;
  std::vector<std::string> families;
  std::string units = "p";
  double grid_lo = 0.0, grid_hi = 1.0;
  double level_a = 0.05;
  std::optional<double> large_c;
  std::optional<double> large_omega;
  bool exact_small = false;
  std::string kind = "cycle";
  std::size_t cyc_n = 1000;
  double cuts = 3.0;
  std::size_t product_with = 3;
  double eps = 0.5;
  std::optional<double> m_threshold, iso_c;
  auto* experiment = app.add_subcommand("experiment", "run an experiment recipe and emit a report");
  experiment->add_option("recipe", recipe, "threshold | uniqueness | counterexample | sprinkling | cheeger")
      ->required()
      ->check(CLI::IsMember({"threshold", "uniqueness", "counterexample", "sprinkling", "cheeger"}));
  add_output(experiment, c, {"json", "csv"});
  add_seed_threads(experiment, c);
  experiment->add_flag("--with-runtime", c.with_runtime, "record wall-clock runtime (output is then not reproducible)");
  experiment->add_option("--family", families, "family spec (repeat for a size sequence)");
  experiment->add_option("--trials", trials, "trials or sweeps")->check(CLI::PositiveNumber);
  experiment->add_option("--units", units, "grid units: p, or n for p = x / n")->check(CLI::IsMember({"p", "n"}));
  experiment->add_option("--grid-lo", grid_lo, "grid start");
  experiment->add_option("--grid-hi", grid_hi, "grid end");
  experiment->add_option("--grid-points", grid_points, "grid points")->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  experiment->add_option("--a", level_a, "giant-fraction level for the crossing");
  experiment->add_option("--c", large_c, "large = ceil(c n) (default 0.02 in scans, 0.25 for counterexamples)");
  experiment->add_option("--omega", large_omega, "large = ceil(n^omega) (overrides --c in scans)");
  experiment->add_flag("--exact-small", exact_small, "enumerate instead of sampling when |E| <= 24");
  experiment->add_option("--kind", kind, "counterexample kind")->check(CLI::IsMember({"cycle", "product"}));
  experiment->add_option("--n", cyc_n, "cycle length for counterexamples");
  experiment->add_option("--cuts", cuts, "expected number of full cuts");
  experiment->add_option("--product-with", product_with, "h in C_n x K_h");
  experiment->add_option("--eps", eps, "supercriticality for sprinkling");
  experiment->add_option("--m-threshold", m_threshold, "fixed phase-1 size threshold");
  experiment->add_option("--iso-c", iso_c, "isoperimetric constant for the hypothesis check");
  experiment->add_option("--p", p_list, "p list for the cheeger recipe")->check(CLI::Range(0.0, 1.0));
  experiment->add_option("--work-limit", work_limit, "cap on enumerated sets per Cheeger evaluation");

  std::vector<const char*> argv;
  argv.push_back("percolab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << "percolab 1.0\n";
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  }

  try {
    const std::uint64_t seed = resolve_seed(c.seed);
    if (c.format.empty()) {
      const auto* sub = app.get_subcommands().front();
      const auto name = sub->get_name();
      c.format = name == "percolate" || name == "sweep" || name == "pivotal" ? "csv"
                 : name == "experiment"                                   ? "json"
                                                                          : "text";
    }

    if (gen->parsed()) {
      const auto spec = parse_family(c.family);
      const Graph g = generate(spec);
      const Json config{{"family", to_string(spec)}};
      std::ostringstream s;
      write_graph(s, g);
      s << comment_header("gen", config, seed);
      emit(c, s.str(), "gen " + to_string(spec) + ": n=" + std::to_string(g.vertex_count()) + " m=" +
                           std::to_string(g.edge_count()),
           out, err);
      return ok;
    }

    if (metrics->parsed()) {
      const Graph g = load_graph(c);
      const auto m = graph_metrics(g);
      const auto gir = girth(g);
      Table t;
      t.add("vertices", m.vertices);
      t.add("edges", m.edges);
      t.add("min_degree", m.min_degree);
      t.add("max_degree", m.max_degree);
      t.add("components", m.components);
      t.add("connected", m.connected);
      t.add("diameter", m.diameter ? Json(*m.diameter) : Json("inf"));
      t.add("girth", gir ? Json(*gir) : Json("acyclic"));
      const Json config{{"graph", source_of(c)}};
      emit(c, t.render(c, "metrics", config, seed), "metrics n=" + std::to_string(m.vertices), out, err);
      return ok;
    }

    if (cheeger->parsed()) {
      const Graph g = load_graph(c);
      CutResult r;
      if (method == "upper") {
        if (boundary != "edge") throw UsageError("--method upper supports only --boundary edge");
        r = cheeger_upper_bound(g, budget, seed);
      } else {
        r = boundary == "edge" ? edge_cheeger_exact(g, work_limit, c.threads) : vertex_iso_exact(g, work_limit, c.threads);
      }
      Table t;
      t.add("ratio", boundary == "edge" ? r.edge_ratio : r.vertex_ratio);
      t.add("edge_ratio", r.edge_ratio);
      t.add("vertex_ratio", r.vertex_ratio);
      t.add("edge_boundary", r.edge_boundary);
      t.add("vertex_boundary", r.vertex_boundary);
      t.add("witness_size", r.witness.size());
      std::string w;
      for (auto v : r.witness) w += (w.empty() ? "" : " ") + std::to_string(v);
      t.add("witness", w);
      const Json config{{"graph", source_of(c)}, {"boundary", boundary}, {"method", method},
                        {"work_limit", work_limit}, {"budget", budget}};
      emit(c, t.render(c, "cheeger", config, seed),
           "cheeger " + boundary + " " + method + " = " + num(boundary == "edge" ? r.edge_ratio : r.vertex_ratio), out,
           err);
      return ok;
    }

    if (percolate->parsed()) {
      const Graph g = load_graph(c);
      const auto th = sizes_from(g.vertex_count(), s_sizes, c_fracs, omegas);
      struct Row {
        std::size_t open = 0, components = 0;
        ClusterStats st;
      };
      std::vector<Row> rows(trials);
      parallel_for(trials, c.threads, [&](std::size_t t, unsigned) {
        Rng rng = Rng::stream(seed, t);
        const auto smp = sample(g, p, rng);
        rows[t] = {smp.open_count(), smp.sizes.size(), component_stats(smp, th)};
      });
      const Json config{{"graph", source_of(c)}, {"p", p}, {"trials", trials}, {"thresholds", th}};
      std::ostringstream s;
      double mean_l1 = 0.0;
      for (const auto& r : rows) mean_l1 += static_cast<double>(r.st.largest) / static_cast<double>(trials);
      if (c.format == "json") {
        Json j;
        j["command"] = "percolate";
        j["config"] = config;
        j["seed"] = seed;
        Json arr = Json::array();
        for (std::size_t t = 0; t < trials; ++t) {
          Json r{{"trial", t}, {"open_edges", rows[t].open}, {"components", rows[t].components},
                 {"L1", rows[t].st.largest}, {"L2", rows[t].st.second}};
          for (std::size_t i = 0; i < th.size(); ++i) r["count_ge_" + std::to_string(th[i])] = rows[t].st.count_at_least[i];
          arr.push_back(r);
        }
        j["samples"] = arr;
        s << j.dump(2) << '\n';
      } else {
        s << comment_header("percolate", config, seed);
        s << "trial,open_edges,components,L1,L2";
        for (auto v : th) s << ",count_ge_" << v;
        s << '\n';
        for (std::size_t t = 0; t < trials; ++t) {
          s << t << ',' << rows[t].open << ',' << rows[t].components << ',' << rows[t].st.largest << ',' << rows[t].st.second;
          for (auto v : rows[t].st.count_at_least) s << ',' << v;
          s << '\n';
        }
      }
      emit(c, s.str(), "percolate " + std::to_string(trials) + " samples, mean L1 = " + num(mean_l1), out, err);
      return ok;
    }

    if (sweep->parsed()) {
      const Graph g = load_graph(c);
      const auto th = sizes_from(g.vertex_count(), s_sizes, c_fracs, omegas);
      SweepOptions so;
      so.threads = c.threads;
      so.stride = stride;
      if (canonical || c.format == "json") so.p_grid = p_list.empty() ? linear_grid(0.0, 1.0, grid_points) : p_list;
      if (canonical && !th.empty() && threshold_index >= th.size())
        throw UsageError("--threshold-index out of range");
      const auto rec = newman_ziff_sweep(g, trials, th, seed, so);
      const Json config{{"graph", source_of(c)}, {"trials", trials},   {"thresholds", th},
                        {"stride", stride},      {"canonical", canonical}, {"p_grid", so.p_grid},
                        {"threshold_index", threshold_index}};
      std::ostringstream s;
      const std::string comment = "percolab sweep\nconfig: " + config.dump() + "\nseed: " + std::to_string(seed);
      if (c.format == "json") {
        Json j;
        j["command"] = "sweep";
        j["config"] = config;
        j["seed"] = seed;
        Json rows = Json::array();
        for (std::size_t r = 0; r < rec.row_count(); ++r) {
          const auto st = rec.row(r);
          Json row{{"m", rec.row_edge_counts()[r]}, {"L1_mean", st.l1}, {"L2_mean", st.l2}};
          for (std::size_t i = 0; i < th.size(); ++i) row["count_ge_" + std::to_string(th[i]) + "_mean"] = st.count[i];
          rows.push_back(row);
        }
        j["rows"] = rows;
        Json canon = Json::array();
        for (const auto& pt : rec.canonical()) {
          Json row{{"p", pt.p}, {"L1_frac", pt.l1_frac.mean}, {"L1_frac_se", pt.l1_frac.se}, {"L2_frac", pt.l2_frac.mean}};
          for (std::size_t i = 0; i < th.size(); ++i) {
            row["P_two_large_" + std::to_string(th[i])] = pt.two_large[i].mean;
            row["P_two_large_" + std::to_string(th[i]) + "_se"] = pt.two_large[i].se;
          }
          canon.push_back(row);
        }
        j["canonical"] = canon;
        s << j.dump(2) << '\n';
      } else if (canonical) {
        write_canonical_csv(s, rec, threshold_index, comment);
      } else {
        write_sweep_csv(s, rec, comment);
      }
      emit(c, s.str(), "sweep " + std::to_string(trials) + " trials, " + std::to_string(rec.row_count()) + " rows", out,
           err);
      return ok;
    }

    if (oracle->parsed()) {
      const Graph g = load_graph(c);
      auto th = sizes_from(g.vertex_count(), s_sizes, c_fracs, omegas);
      const auto st = exact::exact_cluster_stats(g, p, th);
      Table t;
      t.add("P(connected)", st.connected);
      t.add("E[L1]", st.mean_l1);
      t.add("E[L2]", st.mean_l2);
      for (std::size_t i = 0; i < th.size(); ++i) {
        t.add("P(L1>=" + std::to_string(th[i]) + ")", st.any_large[i]);
        t.add("P(two>=" + std::to_string(th[i]) + ")", st.two_large[i]);
      }
      for (const auto& text : upsets) {
        const auto u = parse_upset(text);
        t.add("P(" + u.name() + ")", exact::exact_event_prob(g, p, u));
        if (g.edge_count() >= 1 && g.edge_count() <= exact::pivotal_edge_limit)
          t.add("pivotal(" + u.name() + ")", exact::exact_pivotal_prob(g, p, u));
      }
      const Json config{{"graph", source_of(c)}, {"p", p}, {"thresholds", th}, {"upsets", upsets}};
      emit(c, t.render(c, "oracle", config, seed), "oracle P(connected)=" + num(st.connected), out, err);
      return ok;
    }

    if (pivotal->parsed()) {
      const Graph g = load_graph(c);
      const std::size_t k = g.edge_count();
      const double bound = pivotal_bound(k, x);
      std::vector<UpSetSpec> us;
      for (const auto& text : upsets) us.push_back(parse_upset(text));
      const Json config{{"graph", source_of(c)}, {"p", p_list}, {"upsets", upsets}, {"trials", trials}, {"x", x}};
      std::ostringstream s;
      Json rows = Json::array();
      std::size_t index = 0;
      std::size_t above = 0;
      for (double pv : p_list) {
        for (const auto& u : us) {
          // Each (p, up-set) cell gets its own stream family.
          const auto est = pivotal_prob_mc(g, pv, u, trials, experiments::detail::derive_seed(seed, index++), c.threads);
          above += est.mean > bound ? 1 : 0;
          rows.push_back(Json{{"k", k}, {"p", pv}, {"upset", u.name()}, {"estimate", est.mean}, {"se", est.se},
                              {"bound", bound}});
        }
      }
      if (c.format == "json") {
        Json j;
        j["command"] = "pivotal";
        j["config"] = config;
        j["seed"] = seed;
        j["rows"] = rows;
        s << j.dump(2) << '\n';
      } else {
        s << comment_header("pivotal", config, seed);
        s << "k,p,upset,estimate,se,bound\n";
        for (const auto& r : rows)
          s << r["k"].get<std::size_t>() << ',' << num(r["p"].get<double>()) << ',' << r["upset"].get<std::string>()
            << ',' << num(r["estimate"].get<double>()) << ',' << num(r["se"].get<double>()) << ','
            << num(r["bound"].get<double>()) << '\n';
      }
      emit(c, s.str(),
           "pivotal " + std::to_string(rows.size()) + " cells, " + std::to_string(above) + " above the bound " + num(bound),
           out, err);
      return ok;
    }

    if (bounds_cmd->parsed()) {
      Table t;
      Json config;
      if (!min_omega_params.empty()) {
        bounds::BoundParams q;
        apply_bound_params(q, min_omega_params);
        const auto mo = bounds::min_omega(q.b, q.Delta, q.x);
        t.add("omega_star", mo.omega);
        t.add("L", mo.log_term);
        config = Json{{"min_omega", {{"b", q.b}, {"Delta", q.Delta}, {"x", q.x}}}};
        emit(c, t.render(c, "bounds", config, seed), "bounds omega*=" + num(mo.omega), out, err);
        return ok;
      }
      bounds::BoundParams q;
      if (!params.empty()) apply_bound_params(q, params);
      std::size_t undefined = 0;
      Json notes = Json::object();
      for (const auto& row : bounds::bounds_table(q)) {
        t.add(row.name, row.value);
        if (!row.note.empty()) notes[row.name] = row.note;
        undefined += std::isnan(row.value) ? 1 : 0;
      }
      config = Json{{"params", bound_params_json(q)}};
      std::string payload;
      if (c.format == "json") {
        Json j = Json::parse(t.json("bounds", config, seed));
        j["notes"] = notes;
        payload = j.dump(2) + "\n";
      } else {
        payload = t.text("bounds", config, seed);
        for (const auto& [name, note] : notes.items()) payload += "# " + name + ": " + note.get<std::string>() + "\n";
      }
      emit(c, payload, "bounds " + std::to_string(t.rows.size()) + " rows, " + std::to_string(undefined) + " undefined",
           out, err);
      return ok;
    }

    if (experiment->parsed()) {
      using namespace experiments;
      ExperimentReport rep;
      auto specs = [&] {
        if (families.empty()) throw UsageError("experiment " + recipe + " needs --family");
        std::vector<FamilySpec> out_specs;
        for (const auto& f : families) out_specs.push_back(parse_family(f));
        return out_specs;
      };
      if (recipe == "threshold" || recipe == "uniqueness") {
        ScanOptions opt;
        opt.grid = linear_grid(grid_lo, grid_hi, grid_points);
        opt.per_vertex_units = units == "n";
        opt.a = level_a;
        opt.large = large_omega ? LargeThreshold{LargeThreshold::Mode::omega, *large_omega}
                                : LargeThreshold{LargeThreshold::Mode::linear, large_c.value_or(0.02)};
        opt.exact_when_small = exact_small;
        opt.threads = c.threads;
        rep = recipe == "threshold" ? threshold_scan(specs(), trials, seed, opt) : uniqueness_scan(specs(), trials, seed, opt);
      } else if (recipe == "counterexample") {
        CounterexampleOptions opt;
        opt.c = large_c.value_or(0.25);
        opt.expected_cuts = cuts;
        opt.product_with = product_with;
        opt.threads = c.threads;
        rep = counterexample_demo(kind == "cycle" ? CounterexampleKind::cycle : CounterexampleKind::cycle_product, cyc_n,
                                  trials, seed, opt);
      } else if (recipe == "sprinkling") {
        const auto fs = specs();
        if (fs.size() != 1) throw UsageError("experiment sprinkling takes exactly one --family");
        SprinklingOptions opt;
        opt.m_threshold = m_threshold;
        opt.iso_c = iso_c;
        opt.threads = c.threads;
        rep = sprinkling_giant_demo(fs[0], eps, trials, seed, opt);
      } else {
        const auto fs = specs();
        if (fs.size() != 1) throw UsageError("experiment cheeger takes exactly one --family");
        if (p_list.empty()) throw UsageError("experiment cheeger needs --p");
        CheegerScanOptions opt;
        opt.work_limit = work_limit;
        opt.threads = c.threads;
        rep = percolated_expander_cheeger(fs[0], p_list, trials, seed, opt);
      }
      std::ostringstream s;
      if (c.format == "csv") {
        rep.write_csv(s);
      } else {
        s << rep.to_json(c.with_runtime).dump(2) << '\n';
      }
      emit(c, s.str(), "experiment " + rep.id + ": " + std::to_string(rep.points.size()) + " points", out, err);
      return ok;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return io;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::precondition:
        err << "precondition failed: " << e.what() << '\n';
        return precondition;
      case ErrorKind::size_guard:
        err << "size guard: " << e.what() << '\n';
        return size_guard;
      case ErrorKind::retry_exhausted:
        err << "retry budget exhausted: " << e.what() << '\n';
        return retry_exhausted;
      case ErrorKind::invalid_argument:
        err << "invalid input: " << e.what() << '\n';
        return bad_input;
    }
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
  err << "no subcommand ran\n";
  return internal;
}

}  // namespace percolab::cli
