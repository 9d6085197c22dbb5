#pragma once

// Subcommands of the cavity_ising tool. `run` is the whole program minus
// process setup, so tests and the acceptance suite can drive it in-process.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <chrono>
#include <ctime>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavity_ising/app/cache.hpp"
#include "cavity_ising/app/output.hpp"
#include "cavity_ising/app/parallel.hpp"
#include "cavity_ising/app/svg.hpp"
#include "cavity_ising/critical_points.hpp"
#include "cavity_ising/entanglement.hpp"
#include "cavity_ising/errors.hpp"
#include "cavity_ising/finite_temperature.hpp"
#include "cavity_ising/landau_ucep.hpp"
#include "cavity_ising/landscape.hpp"
#include "cavity_ising/meanfield.hpp"
#include "cavity_ising/version.hpp"

namespace cavity_ising::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct GlobalOptions {
  double tol = 1e-12;
  int jobs = 1;
  std::string out_dir = "out";
  std::string format = "csv";
  bool svg = false;
  bool reproducible = false;
  std::string cache_dir;
};

/// State shared by one invocation: options, collected outputs and streams.
class RunContext {
 public:
  RunContext(GlobalOptions g, std::vector<std::string> argv, std::ostream& out)
      : opts(std::move(g)), argv_(std::move(argv)), out_(out), start_(std::chrono::steady_clock::now()) {}

  GlobalOptions opts;

  [[nodiscard]] Format format() const { return opts.format == "json" ? Format::Json : Format::Csv; }
  [[nodiscard]] fs::path dir() const { return opts.out_dir; }
  std::ostream& out() { return out_; }

  landscape::LandscapeOptions landscape_options() const {
    landscape::LandscapeOptions o;
    o.root_tol = {opts.tol, opts.tol, 200};
    return o;
  }

  void table(const std::string& stem, const Table& t) { record(write_table(dir(), stem, t, format())); }

  void json_file(const std::string& name, const json& j) {
    const fs::path p = dir() / name;
    write_atomic(p, dump(j));
    record(p);
  }

  void svg_file(const std::string& name, const SvgPlot& plot) {
    if (!opts.svg) return;
    const fs::path p = dir() / name;
    write_atomic(p, render_svg(plot, opts.reproducible ? std::string{} : timestamp()));
    record(p);
  }

  /// Writes manifest.json describing the run.
  void finish(const std::string& command, const json& parameters) {
    json m;
    m["command"] = command;
    m["argv"] = argv_;
    m["parameters"] = parameters;
    m["tolerances"] = {{"root_abs", opts.tol},
                       {"root_rel", opts.tol},
                       {"quadrature_abs", model::thermal_tolerance().abs_tol},
                       {"quadrature_rel", model::thermal_tolerance().rel_tol},
                       {"degeneracy", landscape::LandscapeOptions{}.degeneracy_tol},
                       {"jump_threshold", thermal::kJumpThreshold}};
    m["tool_version"] = kVersion;
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
    m["duration_ms"] = opts.reproducible ? 0 : static_cast<long long>(ms);
    if (!opts.reproducible) m["timestamp"] = timestamp();
    m["outputs"] = outputs_;
    write_atomic(dir() / "manifest.json", dump(m));
  }

 private:
  void record(const fs::path& p) { outputs_.push_back(p.filename().string()); }

  static std::string timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
  }

  std::vector<std::string> argv_;
  std::vector<std::string> outputs_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
};

namespace detail {

/// Option values of a subcommand keyed by long name, defaults included.
inline json collect_parameters(const CLI::App* sub) {
  json p = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->get_items_expected_max() == 0) {
      p[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < r.size(); ++i) joined += (i ? " " : "") + r[i];
      p[name] = joined;
    } else {
      p[name] = opt->get_default_str();
    }
  }
  return p;
}

/// argv without options that do not affect output bytes.
inline std::vector<std::string> replayable_argv(const std::vector<std::string>& args) {
  static const std::vector<std::string> drop = {"--out-dir", "--cache-dir", "--jobs", "-j"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    bool skip = false;
    for (const auto& d : drop) {
      if (args[i] == d) {
        skip = true;
        ++i;
        break;
      }
      if (args[i].rfind(d + "=", 0) == 0) {
        skip = true;
        break;
      }
    }
    if (!skip) out.push_back(args[i]);
  }
  return out;
}

inline std::string phase_name(landscape::PhaseLabel l) { return std::string(landscape::to_string(l)); }

inline json point_json(const critical::CriticalPoint& p) {
  json j;
  j["kind"] = std::string(critical::to_string(p.kind));
  j["By_t"] = json_number(p.By_t);
  j["g_t"] = json_number(p.g_t);
  j["h0"] = json_number(p.h0);
  json r = json::array();
  for (double x : p.residuals) r.push_back(json_number(x));
  j["residuals"] = r;
  return j;
}

inline json critical_points_json(const critical::CriticalPointSet& s) {
  json j;
  j["A"] = point_json(s.A);
  j["B"] = point_json(s.B);
  j["C"] = point_json(s.C);
  j["D"] = point_json(s.D);
  // Which solved quantity at A the reference value 1.45249 agrees with.
  const double reference = 1.45249;
  j["A_reference_1.45249"] = {{"abs_diff_g_A", json_number(std::fabs(s.A.g_t - reference))},
                                {"abs_diff_h0", json_number(std::fabs(s.A.h0 - reference))},
                                {"matches", std::fabs(s.A.h0 - reference) < std::fabs(s.A.g_t - reference) ? "h0" : "g_A"}};
  j["spinodal_g_at_By0"] = json_number(critical::normal_instability_coupling(0.0));
  return j;
}

inline Table boundaries_table(const std::vector<critical::PhaseBoundary>& bs) {
  Table t{{"segment", "order", "By_t", "g_t"}, {}};
  for (const auto& b : bs) {
    for (const auto& p : b.points) {
      t.add({std::string(critical::to_string(b.segment)), std::string(critical::to_string(b.order)), p.By_t, p.g_t});
    }
  }
  return t;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  return out;
}

/// Rebuilds a boundary table from its CSV text.
inline Table table_from_csv(const std::string& csv) {
  Table t;
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  t.columns = split(line, ',');
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    t.add({f.at(0), f.at(1), std::stod(f.at(2)), std::stod(f.at(3))});
  }
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct PhaseDiagramArgs {
  int resolution = 64;
  std::string grid;
  double by_max = 3.0;
  double g_max = 2.0;
  bool critical_only = false;
};

inline void cmd_phase_diagram(RunContext& ctx, const PhaseDiagramArgs& a) {
  const auto pts = critical::locate_all();
  ctx.json_file("critical_points.json", detail::critical_points_json(pts));
  if (a.critical_only) return;

  BoundaryCache cache(ctx.opts.cache_dir);
  const std::string key =
      BoundaryCache::key("phase-diagram", a.resolution, format_double(ctx.opts.tol) + "|" + format_double(a.by_max));
  Table boundaries;
  if (auto hit = cache.load(key)) {
    boundaries = detail::table_from_csv(*hit);
  } else {
    boundaries = detail::boundaries_table(critical::assemble_phase_diagram(a.resolution, a.by_max));
    cache.store(key, to_csv(boundaries));
  }
  ctx.table("boundaries", boundaries);

  if (!a.grid.empty()) {
    const auto dims = detail::split(a.grid, 'x');
    if (dims.size() != 2) throw std::invalid_argument("--grid must look like 100x100");
    const int nx = std::stoi(dims[0]), ny = std::stoi(dims[1]);
    if (nx < 2 || ny < 2) throw std::invalid_argument("--grid needs at least 2x2");
    const auto opt = ctx.landscape_options();
    const auto cells = parallel_map<landscape::Phase>(
        static_cast<std::size_t>(nx * ny), ctx.opts.jobs, [&](std::size_t k) {
          const int i = static_cast<int>(k) / ny, j = static_cast<int>(k) % ny;
          const double By = a.by_max * i / (nx - 1);
          const double g = a.g_max * j / (ny - 1);
          return landscape::classify_phase({g, By}, opt);
        });
    Table t{{"By_t", "g_t", "phase", "alpha_t", "m_s"}, {}};
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const auto& c = cells[static_cast<std::size_t>(i * ny + j)];
        t.add({a.by_max * i / (nx - 1), a.g_max * j / (ny - 1), detail::phase_name(c.label), c.alpha_t, c.m_s});
      }
    }
    ctx.table("grid", t);
  }

  SvgPlot plot{"Phase diagram", "By_t", "g_t", {}, {}};
  std::map<std::string, SvgSeries> series;
  for (const auto& row : boundaries.rows) {
    const auto seg = std::get<std::string>(row[0]);
    auto& s = series[seg];
    s.label = seg;
    s.dashed = std::get<std::string>(row[1]) == "first";
    s.points.emplace_back(std::get<double>(row[2]), std::get<double>(row[3]));
  }
  for (auto& [_, s] : series) plot.series.push_back(s);
  plot.markers = {{"A", {pts.A.By_t, pts.A.g_t}},
                  {"B", {pts.B.By_t, pts.B.g_t}},
                  {"C", {pts.C.By_t, pts.C.g_t}},
                  {"D", {pts.D.By_t, pts.D.g_t}}};
  ctx.svg_file("phase_diagram.svg", plot);
}

inline void cmd_critical_points(RunContext& ctx) {
  const auto pts = critical::locate_all();
  const auto j = detail::critical_points_json(pts);
  ctx.json_file("critical_points.json", j);
  ctx.out() << j.dump(2) << "\n";
}

struct LandscapeArgs {
  double g = 1.452;
  double by = 0.0;
  std::string beta = "inf";
  std::string alpha = "0:2.5:251";
};

inline void cmd_landscape(RunContext& ctx, const LandscapeArgs& a) {
  const double beta = parse_beta(a.beta);
  const model::ReducedParams p{a.g, a.by, beta};
  p.validate();
  model::require_coupling(a.g);
  const auto r = landscape::minimize_landscape(p, ctx.landscape_options());
  Table curve{{"alpha_t", "h_t", "energy"}, {}};
  SvgSeries s{"energy", {}, false};
  for (double al : parse_grid(a.alpha)) {
    const double e = model::reduced_free_energy(al, p);
    curve.add({al, std::hypot(a.by, al), e});
    s.points.emplace_back(al, e);
  }
  ctx.table("landscape", curve);
  Table cand{{"branch", "alpha_t", "h_t", "energy", "global"}, {}};
  for (const auto& c : r.candidates) {
    const bool global = c.alpha_t == r.alpha_star && c.branch == r.branch;
    cand.add({std::string(landscape::to_string(c.branch)), c.alpha_t, c.h_t, c.energy, std::string(global ? "yes" : "no")});
  }
  ctx.table("candidates", cand);
  json summary{{"alpha_star", json_number(r.alpha_star)},
               {"energy", json_number(r.energy)},
               {"h_star", json_number(r.h_star)},
               {"branch", std::string(landscape::to_string(r.branch))},
               {"degenerate", r.degenerate},
               {"phase", detail::phase_name(landscape::phase_from(p, r).label)}};
  ctx.json_file("landscape_summary.json", summary);
  SvgPlot plot{"Landscape", "alpha_t", "energy", {s}, {}};
  plot.markers.push_back({"min", {r.alpha_star, r.energy}});
  ctx.svg_file("landscape.svg", plot);
}

struct ObservablesArgs {
  double g = 1.38288;
  std::string by = "0.8:1.3:200";
  std::string beta = "inf";
  bool chi = false;
  bool entropy = false;
};

inline void cmd_observables(RunContext& ctx, const ObservablesArgs& a) {
  const double beta = parse_beta(a.beta);
  const auto grid = parse_grid(a.by);
  const auto opt = ctx.landscape_options();
  struct Row {
    landscape::SweepPoint p;
    double chi;
    double entropy;
  };
  const auto rows = parallel_map<Row>(grid.size(), ctx.opts.jobs, [&](std::size_t i) {
    Row r{landscape::sweep_point(a.g, grid[i], beta, opt), std::nan(""), std::nan("")};
    if (a.chi) {
      try {
        r.chi = landscape::transverse_susceptibility(a.g, grid[i], beta, opt);
      } catch (const SingularPoint&) {
        r.chi = HUGE_VAL;
      }
    }
    if (a.entropy && std::isinf(beta)) r.entropy = entanglement::half_chain_entropy(r.p.h_t);
    return r;
  });
  Table t{{"By_t", "alpha_t", "m_s", "h_t", "phase"}, {}};
  if (a.chi) t.columns.push_back("chi_perp");
  if (a.entropy) t.columns.push_back("entropy");
  SvgSeries sa{"alpha_t", {}, false}, sm{"m_s", {}, true};
  for (const auto& r : rows) {
    std::vector<Cell> row{r.p.By_t, r.p.alpha_t, r.p.m_s, r.p.h_t, detail::phase_name(r.p.label)};
    if (a.chi) row.emplace_back(r.chi);
    if (a.entropy) row.emplace_back(r.entropy);
    t.add(std::move(row));
    sa.points.emplace_back(r.p.By_t, r.p.alpha_t);
    sm.points.emplace_back(r.p.By_t, r.p.m_s);
  }
  ctx.table("observables", t);
  ctx.svg_file("observables.svg", {"Order parameters", "By_t", "alpha_t, m_s", {sa, sm}, {}});
}

struct LandauArgs {
  double c1 = 1.0 / std::numbers::e;
  double c2 = 0.0;
  std::string alpha = "0:1:201";
  bool diagram = false;
  std::string c1_range = "0.2:0.6";
  std::string c2_range = "-0.3:0.5";
  int resolution = 32;
};

inline json landau_points_json() {
  const auto cp = landau::landau_critical_points();
  const auto pts = critical::locate_all();
  auto entry = [](const landau::LandauParams& p, const critical::CriticalPoint& exact) {
    const auto m = landau::map_to_model(p);
    return json{{"c1", json_number(p.c1)},
                {"c2", json_number(p.c2)},
                {"mapped_By_t", json_number(m.By_t)},
                {"mapped_g_t", json_number(m.g_t)},
                {"exact_By_t", json_number(exact.By_t)},
                {"exact_g_t", json_number(exact.g_t)},
                {"deviation_By_t", json_number(m.By_t - exact.By_t)},
                {"deviation_g_t", json_number(m.g_t - exact.g_t)}};
  };
  return json{{"UCEP", entry(cp.ucep, pts.B)}, {"TCP", entry(cp.tcp, pts.C)}};
}

inline void cmd_landau(RunContext& ctx, const LandauArgs& a) {
  const landau::LandauParams p{a.c1, a.c2};
  const auto r = landau::minimize_landau(p);
  Table curve{{"alpha_t", "f"}, {}};
  SvgSeries s{"f", {}, false};
  for (double al : parse_grid(a.alpha)) {
    const double f = landau::f_landau(al, p);
    curve.add({al, f});
    s.points.emplace_back(al, f);
  }
  ctx.table("landau_landscape", curve);
  json summary = landau_points_json();
  summary["minimum"] = {{"alpha_star", json_number(r.alpha_star)},
                        {"f", json_number(r.energy)},
                        {"degenerate", r.degenerate},
                        {"phase", std::string(landau::to_string(landau::landau_phase(p, r)))}};
  ctx.json_file("landau_points.json", summary);
  SvgPlot plot{"Minimal model", "alpha_t", "f", {s}, {}};
  if (a.diagram) {
    const auto c1r = parse_grid(a.c1_range + ":2");
    const auto c2r = parse_grid(a.c2_range + ":2");
    const auto d = landau::landau_phase_diagram({c1r[0], c1r[1]}, {c2r[0], c2r[1]}, a.resolution);
    Table t{{"c1", "c2", "order", "from", "to", "jump"}, {}};
    SvgSeries first{"first", {}, true}, cont{"continuous", {}, false};
    for (const auto& tr : d.transitions) {
      t.add({tr.c1, tr.c2, std::string(landau::to_string(tr.order)), std::string(landau::to_string(tr.from)),
             std::string(landau::to_string(tr.to)), tr.jump});
      (tr.order == landau::TransitionOrder::First ? first : cont).points.emplace_back(tr.c2, tr.c1);
    }
    ctx.table("landau_diagram", t);
    SvgPlot dp{"Minimal model phase diagram (points)", "c2", "c1", {first, cont}, {}};
    dp.markers = {{"B", {d.critical.ucep.c2, d.critical.ucep.c1}}, {"C", {d.critical.tcp.c2, d.critical.tcp.c1}}};
    ctx.svg_file("landau_diagram.svg", dp);
  }
  ctx.svg_file("landau_landscape.svg", plot);
}

struct MeanFieldArgs {
  double gamma = 0.0;
  double g = 0.0;
  double by = 1.0;
  bool diagram = false;
  int resolution = 64;
};

inline void cmd_meanfield(RunContext& ctx, const MeanFieldArgs& a) {
  double gamma = a.gamma;
  if (gamma <= 0.0 && a.g > 0.0) gamma = meanfield::gamma_from_coupling(a.g);
  if (gamma <= 0.0 && !a.diagram) throw std::invalid_argument("meanfield needs --gamma, --g or --diagram");
  if (gamma > 0.0) {
    const auto r = meanfield::minimize_mf(gamma, a.by);
    ctx.json_file("meanfield_point.json", {{"gamma_t", json_number(gamma)},
                                           {"g_t", json_number(meanfield::coupling_from_gamma(gamma))},
                                           {"By_t", json_number(a.by)},
                                           {"alpha_t", json_number(r.point.alpha_t)},
                                           {"m_s", json_number(r.point.m_s)},
                                           {"energy", json_number(r.energy)},
                                           {"phase", detail::phase_name(r.label)}});
  }
  if (!a.diagram) return;
  const auto d = meanfield::mf_phase_diagram(a.resolution);
  Table t{{"By_t", "gamma_t", "g_t", "from", "to", "order", "jump_alpha", "jump_m"}, {}};
  for (const auto& b : d.boundary) {
    t.add({b.By_t, b.gamma_t, b.g_t, detail::phase_name(b.from), detail::phase_name(b.to),
           std::string(b.first_order ? "first" : "second"), b.jump_alpha, b.jump_m});
  }
  ctx.table("meanfield_boundaries", t);
  json junctions = json::array();
  for (const auto& j : d.junctions) junctions.push_back({{"By_t", json_number(j.By_t)}, {"gamma_t", json_number(j.gamma_t)}});
  const auto ex = meanfield::mf_junction_exact();
  ctx.json_file("meanfield_junction.json",
                {{"grid_junction_cells", junctions}, {"exact", {{"By_t", ex.By_t}, {"gamma_t", ex.gamma_t}}}});
}

struct FiniteTempArgs {
  std::string beta = "5";
  double by = 0.0;
  bool order_boundary = false;
  int resolution = 32;
  double beta_max = 50.0;
  bool curvature = false;
  std::string betas = "5,10,100";
  std::string by_grid = "0.5:1.5:101";
};

inline void cmd_finite_temp(RunContext& ctx, const FiniteTempArgs& a) {
  const double beta = parse_beta(a.beta);
  const auto rec = thermal::transition_at(beta, a.by);
  const double bc = thermal::critical_beta();
  ctx.json_file("transition.json", {{"beta_t", json_number(rec.beta_t)},
                                    {"By_t", json_number(rec.By_t)},
                                    {"g_star", json_number(rec.g_star)},
                                    {"order", std::string(thermal::to_string(rec.order))},
                                    {"jump", json_number(rec.jump)},
                                    {"critical_beta", json_number(bc)},
                                    {"critical_temperature_over_J", json_number(1.0 / bc)}});
  if (a.order_boundary) {
    const auto ob = thermal::order_boundary(a.resolution, a.beta_max);
    Table t{{"By_t", "beta_t"}, {}};
    SvgSeries s{"order switch", {}, false};
    for (const auto& p : ob) {
      t.add({p.By_t, p.beta_t});
      s.points.emplace_back(p.By_t, p.beta_t);
    }
    ctx.table("order_boundary", t);
    ctx.svg_file("order_boundary.svg", {"First/second order switch", "By_t", "beta_t", {s}, {{"beta_c", {0.0, bc}}}});
  }
  if (a.curvature) {
    const auto betas = parse_list(a.betas);
    const auto grid = parse_grid(a.by_grid);
    Table t{{"beta_t", "By_t", "f", "f_dd"}, {}};
    std::vector<SvgSeries> series;
    for (double b : betas) {
      SvgSeries s{"beta=" + format_double(b), {}, false};
      const auto vals = parallel_map<thermal::Curvature>(
          grid.size(), ctx.opts.jobs, [&](std::size_t i) { return thermal::normal_branch_curvature(grid[i], b); });
      for (std::size_t i = 0; i < grid.size(); ++i) {
        t.add({b, grid[i], vals[i].f, vals[i].f_dd});
        s.points.emplace_back(grid[i], vals[i].f_dd);
      }
      series.push_back(std::move(s));
    }
    ctx.table("curvature", t);
    ctx.svg_file("curvature.svg", {"Normal-branch curvature", "By_t", "f''", series, {}});
  }
}

struct EntanglementArgs {
  double h = 1.0;
  int block = 256;
  bool fit = false;
  double g = 0.0;
  std::string deltas = "0.01,0.005,0.0025";
  bool scaling = false;
  std::string blocks = "64,128,256,512";
};

inline void cmd_entanglement(RunContext& ctx, const EntanglementArgs& a) {
  ctx.json_file("entropy.json", {{"h_t", json_number(a.h)},
                                 {"block_size", a.block},
                                 {"block_entropy", json_number(entanglement::block_entropy(a.h, a.block))}});
  if (a.scaling) {
    Table t{{"block_size", "block_entropy", "half_chain_entropy"}, {}};
    for (double b : parse_list(a.blocks)) {
      const double s = entanglement::block_entropy(a.h, static_cast<int>(b));
      t.add({static_cast<long long>(b), s, 0.5 * s});
    }
    ctx.table("entropy_scaling", t);
  }
  if (a.fit) {
    const double g = a.g > 0.0 ? a.g : critical::locate_ucep().g_t;
    const auto deltas = parse_list(a.deltas);
    const auto f = entanglement::entropy_divergence_fit(g, deltas);
    Table t{{"side", "delta", "h_t", "entropy"}, {}};
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      t.add({std::string("minus"), deltas[i], f.field_minus[i], f.entropy_minus[i]});
      t.add({std::string("plus"), deltas[i], f.field_plus[i], f.entropy_plus[i]});
    }
    ctx.table("entropy_fit_points", t);
    ctx.json_file("entropy_fit.json", {{"g_t", json_number(g)},
                                       {"slope_minus", json_number(f.slope_minus)},
                                       {"slope_plus", json_number(f.slope_plus)}});
  }
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Hook for the `verify` subcommand; installed by the acceptance suite.
using VerifyHook = std::function<int(const std::string& criteria, std::ostream& out)>;

inline VerifyHook& verify_hook() {
  static VerifyHook hook;
  return hook;
}

/// Runs the tool on args (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Phase diagram of the cavity-coupled transverse-field Ising chain", "cavity_ising"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--tol", g.tol, "root-finding tolerance (abs and rel)")->capture_default_str();
  app.add_option("-j,--jobs", g.jobs, "worker threads for grids and sweeps")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", g.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag("--svg", g.svg, "also write SVG plots");
  app.add_flag("--reproducible", g.reproducible, "omit timestamps and durations");
  app.add_option("--cache-dir", g.cache_dir, "boundary cache directory (CAVITY_ISING_CACHE overrides)");

  PhaseDiagramArgs pd;
  auto* s_pd = app.add_subcommand("phase-diagram", "boundaries, special points and optional classification grid");
  s_pd->add_option("--resolution", pd.resolution, "points per boundary segment")->capture_default_str();
  s_pd->add_option("--grid", pd.grid, "classification grid, e.g. 100x100");
  s_pd->add_option("--by-max", pd.by_max, "largest B_y")->capture_default_str();
  s_pd->add_option("--g-max", pd.g_max, "largest g for the grid")->capture_default_str();
  s_pd->add_flag("--critical-points-only", pd.critical_only, "only write critical_points.json");

  auto* s_cp = app.add_subcommand("critical-points", "points A, B, C, D");

  LandscapeArgs ls;
  auto* s_ls = app.add_subcommand("landscape", "energy landscape over alpha and its minimum");
  s_ls->add_option("--g", ls.g, "reduced coupling")->capture_default_str();
  s_ls->add_option("--by", ls.by, "reduced transverse field")->capture_default_str();
  s_ls->add_option("--beta", ls.beta, "reduced inverse temperature or inf")->capture_default_str();
  s_ls->add_option("--alpha", ls.alpha, "alpha grid lo:hi:n")->capture_default_str();

  ObservablesArgs ob;
  auto* s_ob = app.add_subcommand("observables", "order parameters along a B_y sweep");
  s_ob->add_option("--g", ob.g, "reduced coupling")->capture_default_str();
  s_ob->add_option("--by", ob.by, "B_y grid lo:hi:n")->capture_default_str();
  s_ob->add_option("--beta", ob.beta, "reduced inverse temperature or inf")->capture_default_str();
  s_ob->add_flag("--chi", ob.chi, "add the transverse susceptibility");
  s_ob->add_flag("--entropy", ob.entropy, "add the half-chain entanglement entropy (T = 0)");

  LandauArgs la;
  auto* s_la = app.add_subcommand("landau", "minimal free energy with a unilateral critical endpoint");
  s_la->add_option("--c1", la.c1, "linear coefficient")->capture_default_str();
  s_la->add_option("--c2", la.c2, "shift of v = alpha^2 + c2")->capture_default_str();
  s_la->add_option("--alpha", la.alpha, "alpha grid lo:hi:n")->capture_default_str();
  s_la->add_flag("--diagram", la.diagram, "trace transitions in the (c2, c1) plane");
  s_la->add_option("--c1-range", la.c1_range, "lo:hi")->capture_default_str();
  s_la->add_option("--c2-range", la.c2_range, "lo:hi")->capture_default_str();
  s_la->add_option("--resolution", la.resolution, "c1 rows")->capture_default_str();

  MeanFieldArgs mf;
  auto* s_mf = app.add_subcommand("meanfield", "mean-field comparison");
  s_mf->add_option("--gamma", mf.gamma, "cavity coefficient");
  s_mf->add_option("--g", mf.g, "reduced coupling, mapped to gamma = 2/(pi g^2)");
  s_mf->add_option("--by", mf.by, "reduced transverse field")->capture_default_str();
  s_mf->add_flag("--diagram", mf.diagram, "trace the mean-field phase boundaries");
  s_mf->add_option("--resolution", mf.resolution, "grid points per axis")->capture_default_str();

  FiniteTempArgs ft;
  auto* s_ft = app.add_subcommand("finite-temp", "finite-temperature transitions");
  s_ft->add_option("--beta", ft.beta, "reduced inverse temperature")->capture_default_str();
  s_ft->add_option("--by", ft.by, "reduced transverse field")->capture_default_str();
  s_ft->add_flag("--order-boundary", ft.order_boundary, "trace the first/second order switch");
  s_ft->add_option("--resolution", ft.resolution, "points on the order boundary")->capture_default_str();
  s_ft->add_option("--beta-max", ft.beta_max, "largest beta traced")->capture_default_str();
  s_ft->add_flag("--curvature", ft.curvature, "normal-branch free energy and its curvature");
  s_ft->add_option("--betas", ft.betas, "comma-separated betas for --curvature")->capture_default_str();
  s_ft->add_option("--by-grid", ft.by_grid, "B_y grid for --curvature")->capture_default_str();

  EntanglementArgs en;
  auto* s_en = app.add_subcommand("entanglement", "block entanglement entropy");
  s_en->add_option("--field", en.h, "effective field h")->capture_default_str();
  s_en->add_option("--block", en.block, "block size")->capture_default_str();
  s_en->add_flag("--scaling", en.scaling, "entropy against block size");
  s_en->add_option("--blocks", en.blocks, "comma-separated block sizes")->capture_default_str();
  s_en->add_flag("--fit", en.fit, "one-sided divergence fit at B_y = 1");
  s_en->add_option("--g", en.g, "coupling for --fit (default: UCEP coupling)");
  s_en->add_option("--deltas", en.deltas, "comma-separated |B_y - 1| values")->capture_default_str();

  std::string criteria = "all";
  auto* s_vf = app.add_subcommand("verify", "run the acceptance criteria");
  s_vf->add_option("--criteria", criteria, "comma-separated criterion numbers or 'all'")->capture_default_str();

  std::string manifest_path;
  auto* s_rp = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  s_rp->add_option("manifest", manifest_path, "manifest.json")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }
  if (g.jobs < 1) {
    err << "error: --jobs must be >= 1\n";
    return kExitUsage;
  }

  if (s_rp->parsed()) {
    try {
      const json m = json::parse(read_file(manifest_path));
      auto argv = m.at("argv").get<std::vector<std::string>>();
      for (const CLI::Option* o : app.get_options()) {
        if (o->count() == 0) continue;
        const auto& name = o->get_lnames().front();
        if (name == "out-dir" || name == "cache-dir" || name == "jobs") {
          argv.insert(argv.begin(), o->results().front());
          argv.insert(argv.begin(), "--" + name);
        }
      }
      return run(argv, out, err);
    } catch (const std::exception& e) {
      err << "error: cannot replay " << manifest_path << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }

  if (s_vf->parsed()) {
    if (!verify_hook()) {
      err << "error: acceptance suite not linked into this binary\n";
      return kExitUsage;
    }
    return verify_hook()(criteria, out);
  }

  RunContext ctx(g, detail::replayable_argv(args), out);
  CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub == s_pd) cmd_phase_diagram(ctx, pd);
    else if (sub == s_cp) cmd_critical_points(ctx);
    else if (sub == s_ls) cmd_landscape(ctx, ls);
    else if (sub == s_ob) cmd_observables(ctx, ob);
    else if (sub == s_la) cmd_landau(ctx, la);
    else if (sub == s_mf) cmd_meanfield(ctx, mf);
    else if (sub == s_ft) cmd_finite_temp(ctx, ft);
    else if (sub == s_en) cmd_entanglement(ctx, en);
    ctx.finish(sub->get_name(), detail::collect_parameters(sub));
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace cavity_ising::app
