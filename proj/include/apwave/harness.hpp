#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "apwave/config.hpp"
#include "apwave/diagnostics.hpp"
#include "apwave/error.hpp"
#include "apwave/io.hpp"
#include "apwave/problems.hpp"
#include "apwave/stepper.hpp"
#include "apwave/tableau.hpp"

namespace apwave
{

/// log(e_coarse / e_fine) / log(dx_coarse / dx_fine); empty if either error is zero.
inline std::optional<double> eoc(double err_coarse, double err_fine, double dx_coarse,
                                 double dx_fine)
{
  if (!(err_coarse > 0.0) || !(err_fine > 0.0) || !std::isfinite(err_coarse) ||
      !std::isfinite(err_fine))
    return std::nullopt;
  return std::log(err_coarse / err_fine) / std::log(dx_coarse / dx_fine);
}

struct EocRow
{
  MeshSize n_cells{0, 0};
  double dx = 0.0;
  std::vector<double> err_l1, err_l2;
  std::vector<std::optional<double>> eoc_l1, eoc_l2;
  double rho_deviation = 0.0; ///< max |varrho - varrho_ref| in scaled units
  int steps = 0;
};

struct EocTable
{
  std::string title;
  std::vector<std::string> variables;
  std::vector<EocRow> rows;
  bool report_rho_deviation = false;
};

/// Fill the EOC columns from the error columns, leaving the first row blank.
inline void fill_eoc(EocTable& t)
{
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    EocRow& row = t.rows[r];
    const std::size_t nv = t.variables.size();
    row.eoc_l1.assign(nv, std::nullopt);
    row.eoc_l2.assign(nv, std::nullopt);
    if (r == 0)
      continue;
    const EocRow& prev = t.rows[r - 1];
    for (std::size_t v = 0; v < nv; ++v) {
      row.eoc_l1[v] = eoc(prev.err_l1[v], row.err_l1[v], prev.dx, row.dx);
      row.eoc_l2[v] = eoc(prev.err_l2[v], row.err_l2[v], prev.dx, row.dx);
    }
  }
}

// ---------------------------------------------------------------------------
// Problem set-up
// ---------------------------------------------------------------------------

inline ProblemSpec resolve_problem(const RunConfig& cfg, std::string_view fallback)
{
  cfg.validate();
  const std::string name = cfg.problem.empty() ? std::string(fallback) : cfg.problem;
  ProblemSpec p = make_problem(name, cfg.epsilon, parse_final_time_rule(cfg.t_final_rule));
  if (cfg.cfl)
    p.cfl = *cfg.cfl;
  if (cfg.t_final)
    p.t_final = *cfg.t_final;
  if (cfg.advection_on)
    p.params.advection_on = *cfg.advection_on;
  p.params.validate();
  return p;
}

inline MeshSize resolve_mesh(const ProblemSpec& p, MeshSize m)
{
  if (p.dim == 1)
    return {m[0], 1};
  return {m[0], m[1] > 0 ? m[1] : m[0]};
}

/// Mesh sequences used when the configuration names none.
inline std::vector<MeshSize> default_meshes(const ProblemSpec& p)
{
  if (p.name == "cosine_wave") {
    const double e = p.params.epsilon;
    const int base = e >= 1.0 ? 25 : e >= 0.1 ? 50 : e >= 0.01 ? 800 : 3200;
    return {{base, 1}, {2 * base, 1}, {4 * base, 1}, {8 * base, 1}};
  }
  if (p.name == "schneider_vortex")
    return {{20, 20}, {40, 40}, {80, 80}, {160, 160}};
  return {p.default_cells};
}

inline RunOptions run_options(const ProblemSpec& p, const RunConfig& cfg)
{
  RunOptions o;
  o.cfl = p.cfl;
  o.t_final = p.t_final;
  o.solver_tol = cfg.solver_tol;
  o.observe_every = cfg.observe_every;
  return o;
}

/// Order-stable parallel map: results[k] = fn(k), computed on up to `jobs` threads.
template <typename Fn>
auto ordered_parallel(std::size_t n, int jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))>
{
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out;
  out.reserve(n);
  if (jobs <= 1) {
    for (std::size_t k = 0; k < n; ++k)
      out.push_back(fn(k));
    return out;
  }
  std::vector<std::future<R>> pending;
  for (std::size_t k = 0; k < n; ++k)
    pending.push_back(std::async(std::launch::async, fn, k));
  for (auto& f : pending)
    out.push_back(f.get());
  return out;
}

struct ErrorSample
{
  std::vector<std::string> variables;
  std::vector<double> l1, l2;
  double rho_deviation = 0.0;
};

/**
 * Errors against the exact solution sampled at cell centres. The density error is
 * reported in physical units, rho_bar (eps/a_bar) (varrho - varrho_exact).
 */
inline ErrorSample measure_errors(const ProblemSpec& p, const State& s, double t,
                                  bool include_density = true)
{
  const State ex = p.exact_state(t, s.grid);
  ErrorSample e;
  if (include_density) {
    Field d = s.rho - ex.rho;
    e.rho_deviation = norm(d, s.grid, Norm::Linf);
    d *= density_scale(p.params);
    e.variables.push_back("rho");
    e.l1.push_back(norm(d, s.grid, Norm::L1));
    e.l2.push_back(norm(d, s.grid, Norm::L2));
  } else {
    e.rho_deviation = norm(s.rho - ex.rho, s.grid, Norm::Linf);
  }
  for (int m = 0; m < s.grid.dim(); ++m) {
    const Field d = s.vel[m] - ex.vel[m];
    e.variables.push_back(s.grid.dim() == 1 ? "u" : "u" + std::to_string(m + 1));
    e.l1.push_back(norm(d, s.grid, Norm::L1));
    e.l2.push_back(norm(d, s.grid, Norm::L2));
  }
  return e;
}

inline EocTable convergence_study(const ProblemSpec& p, const RunConfig& cfg, bool density)
{
  if (!p.has_exact())
    throw ConfigError("problem " + p.name + " has no exact solution for a convergence study");
  const ImexTableau tab = builtin_tableau(cfg.tableau);
  std::vector<MeshSize> meshes = cfg.meshes.empty() ? default_meshes(p) : cfg.meshes;
  for (auto& m : meshes)
    m = resolve_mesh(p, m);

  auto one = [&](std::size_t k) {
    const PeriodicGrid g = p.make_grid(meshes[k]);
    RunResult r = run(p.initial_state(g), p.params, tab, run_options(p, cfg));
    ErrorSample e = measure_errors(p, r.state, r.t, density);
    return std::make_pair(std::move(e), r.steps);
  };
  auto results = ordered_parallel(meshes.size(), cfg.jobs, one);

  EocTable t;
  t.variables = results.front().first.variables;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    EocRow row;
    row.n_cells = meshes[k];
    row.dx = p.make_grid(meshes[k]).dx(0);
    row.err_l1 = results[k].first.l1;
    row.err_l2 = results[k].first.l2;
    row.rho_deviation = results[k].first.rho_deviation;
    row.steps = results[k].second;
    t.rows.push_back(std::move(row));
  }
  fill_eoc(t);
  return t;
}

/// Grid convergence against an exact solution (default problem: cosine wave).
inline EocTable run_eoc(const RunConfig& cfg)
{
  const ProblemSpec p = resolve_problem(cfg, "cosine_wave");
  EocTable t = convergence_study(p, cfg, true);
  char buf[96];
  std::snprintf(buf, sizeof buf, "EOC for %s, epsilon = %g", p.name.c_str(), p.params.epsilon);
  t.title = buf;
  return t;
}

/// Convergence towards the incompressible limit solution; velocity errors only.
inline EocTable run_aoc(const RunConfig& cfg)
{
  const ProblemSpec p = resolve_problem(cfg, "schneider_vortex");
  if (p.name != "schneider_vortex")
    throw ConfigError("aoc study requires problem schneider_vortex");
  EocTable t = convergence_study(p, cfg, false);
  t.report_rho_deviation = true;
  char buf[96];
  std::snprintf(buf, sizeof buf, "AOC for %s, epsilon = %g", p.name.c_str(), p.params.epsilon);
  t.title = buf;
  return t;
}

// ---------------------------------------------------------------------------
// Time series studies
// ---------------------------------------------------------------------------

struct SeriesRow
{
  int step = 0;
  double t = 0.0;
  DefectReport d;
};

struct SeriesReport
{
  std::string problem;
  double epsilon = 0.0;
  std::vector<SeriesRow> rows; ///< first row is t = 0
  State initial;
  State final_state;
  std::optional<ErrorSample> errors;
};

/// One simulation with the defect diagnostics recorded every observe_every steps.
inline SeriesReport run_series(const ProblemSpec& p, const RunConfig& cfg)
{
  const ImexTableau tab = builtin_tableau(cfg.tableau);
  MeshSize mesh = p.default_cells;
  if (!cfg.meshes.empty())
    mesh = cfg.meshes.back();
  const PeriodicGrid g = p.make_grid(resolve_mesh(p, mesh));
  State u0 = p.initial_state(g);

  SeriesReport rep{p.name, p.params.epsilon, {}, u0, u0, std::nullopt};
  rep.rows.push_back({0, 0.0, defect_report(u0)});
  const Observer obs = [&rep](const StepInfo& info, const State& s) {
    rep.rows.push_back({info.step, info.t, defect_report(s)});
  };
  RunResult r = run(std::move(u0), p.params, tab, run_options(p, cfg), std::span(&obs, 1));
  if (p.has_exact())
    rep.errors = measure_errors(p, r.state, r.t);
  rep.final_state = std::move(r.state);
  return rep;
}

inline SeriesReport run_single(const RunConfig& cfg)
{
  return run_series(resolve_problem(cfg, "well_prepared_2d"), cfg);
}

/// Well-prepared data in the low Mach regime (default eps = 1e-4, 40 x 40, T = 3).
inline SeriesReport run_ap(const RunConfig& cfg)
{
  return run_series(resolve_problem(cfg, "well_prepared_2d"), cfg);
}

struct VortexSeries
{
  double epsilon = 0.0;
  std::vector<double> t;
  std::vector<double> ke_ratio; ///< KE(t) / KE(0)
};

struct VortexReport
{
  std::vector<VortexSeries> series;
  double max_deviation = 0.0; ///< max_eps max_t |KE_eps - KE_first| / KE(0)
};

inline VortexReport run_vortex(const RunConfig& cfg)
{
  RunConfig base = cfg;
  if (base.problem.empty())
    base.problem = "travelling_vortex";
  const std::vector<double> eps =
      cfg.epsilons.empty() ? std::vector<double>{1.0, 1e-1, 1e-2, 1e-3} : cfg.epsilons;
  const ImexTableau tab = builtin_tableau(cfg.tableau);

  auto one = [&](std::size_t k) {
    RunConfig c = base;
    c.epsilon = eps[k];
    const ProblemSpec p = resolve_problem(c, "travelling_vortex");
    MeshSize mesh = c.meshes.empty() ? p.default_cells : c.meshes.back();
    const PeriodicGrid g = p.make_grid(resolve_mesh(p, mesh));
    State u0 = p.initial_state(g);
    const double ke0 = kinetic_energy(u0);
    if (!(ke0 > 0.0))
      throw InputError("vortex study needs non-zero initial kinetic energy");
    VortexSeries s{eps[k], {0.0}, {1.0}};
    const Observer obs = [&s, ke0](const StepInfo& info, const State& st) {
      s.t.push_back(info.t);
      s.ke_ratio.push_back(kinetic_energy(st) / ke0);
    };
    run(std::move(u0), p.params, tab, run_options(p, c), std::span(&obs, 1));
    return s;
  };

  VortexReport rep;
  rep.series = ordered_parallel(eps.size(), cfg.jobs, one);
  const VortexSeries& ref = rep.series.front();
  for (const auto& s : rep.series) {
    const std::size_t n = std::min(s.t.size(), ref.t.size());
    if (s.t.size() != ref.t.size())
      rep.max_deviation = INFINITY;
    for (std::size_t i = 0; i < n; ++i)
      rep.max_deviation = std::max(rep.max_deviation, std::abs(s.ke_ratio[i] - ref.ke_ratio[i]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace detail
{

inline std::string opt_cell(const std::optional<double>& v)
{
  return v ? format_double(*v) : std::string();
}

inline std::string fixed(const char* fmt, double v)
{
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline std::string pad(std::string s, std::size_t w)
{
  if (s.size() < w)
    s.insert(0, w - s.size(), ' ');
  return s;
}

} // namespace detail

inline void write_eoc_csv(std::ostream& os, const EocTable& t)
{
  const bool two_d = !t.rows.empty() && t.rows.front().n_cells[1] > 1;
  os << "n1";
  if (two_d)
    os << ",n2";
  os << ",dx";
  for (const auto& v : t.variables)
    os << ",L1_" << v;
  for (const auto& v : t.variables)
    os << ",EOC_L1_" << v;
  for (const auto& v : t.variables)
    os << ",L2_" << v;
  for (const auto& v : t.variables)
    os << ",EOC_L2_" << v;
  if (t.report_rho_deviation)
    os << ",rho_deviation";
  os << '\n';
  for (const auto& r : t.rows) {
    os << r.n_cells[0];
    if (two_d)
      os << ',' << r.n_cells[1];
    os << ',' << format_double(r.dx);
    for (double e : r.err_l1)
      os << ',' << format_double(e);
    for (const auto& e : r.eoc_l1)
      os << ',' << detail::opt_cell(e);
    for (double e : r.err_l2)
      os << ',' << format_double(e);
    for (const auto& e : r.eoc_l2)
      os << ',' << detail::opt_cell(e);
    if (t.report_rho_deviation)
      os << ',' << format_double(r.rho_deviation);
    os << '\n';
  }
}

/// Human-readable table: N, dx, L1 errors, EOC, L2 errors, EOC.
inline void write_eoc_table(std::ostream& os, const EocTable& t)
{
  if (!t.title.empty())
    os << t.title << '\n';
  const std::size_t w = 12;
  os << detail::pad("N", 10) << detail::pad("dx", w);
  for (const auto& v : t.variables)
    os << detail::pad("L1 " + v, w);
  for (const auto& v : t.variables)
    os << detail::pad("EOC " + v, w);
  for (const auto& v : t.variables)
    os << detail::pad("L2 " + v, w);
  for (const auto& v : t.variables)
    os << detail::pad("EOC " + v, w);
  os << '\n';
  for (const auto& r : t.rows) {
    std::string n = std::to_string(r.n_cells[0]);
    if (r.n_cells[1] > 1)
      n += "x" + std::to_string(r.n_cells[1]);
    os << detail::pad(n, 10) << detail::pad(detail::fixed("%.3e", r.dx), w);
    auto eoc_cell = [](const std::optional<double>& e) {
      return e ? detail::fixed("%.4f", *e) : std::string("-");
    };
    for (double e : r.err_l1)
      os << detail::pad(detail::fixed("%.3e", e), w);
    for (const auto& e : r.eoc_l1)
      os << detail::pad(eoc_cell(e), w);
    for (double e : r.err_l2)
      os << detail::pad(detail::fixed("%.3e", e), w);
    for (const auto& e : r.eoc_l2)
      os << detail::pad(eoc_cell(e), w);
    os << '\n';
  }
}

inline void write_series_csv(std::ostream& os, const SeriesReport& r)
{
  os << "t,energy,kinetic,grad_rho_L2,div_u_L2,dist_E\n";
  for (const auto& row : r.rows)
    os << format_double(row.t) << ',' << format_double(row.d.energy) << ','
       << format_double(row.d.kinetic) << ',' << format_double(row.d.grad_rho_norm) << ','
       << format_double(row.d.div_u_norm) << ',' << format_double(row.d.dist_E) << '\n';
}

inline void write_vortex_csv(std::ostream& os, const VortexSeries& s)
{
  os << "t,ke_ratio\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    os << format_double(s.t[i]) << ',' << format_double(s.ke_ratio[i]) << '\n';
}

inline void write_vortex_summary(std::ostream& os, const VortexReport& r)
{
  os << "epsilon,steps,ke_final_ratio,max_deviation_from_first\n";
  const VortexSeries& ref = r.series.front();
  for (const auto& s : r.series) {
    double dev = 0.0;
    for (std::size_t i = 0; i < std::min(s.t.size(), ref.t.size()); ++i)
      dev = std::max(dev, std::abs(s.ke_ratio[i] - ref.ke_ratio[i]));
    os << format_double(s.epsilon) << ',' << s.t.size() - 1 << ','
       << format_double(s.ke_ratio.back()) << ',' << format_double(dev) << '\n';
  }
}

namespace detail
{

inline std::ofstream open_out(const std::filesystem::path& p)
{
  std::ofstream f(p, std::ios::binary);
  if (!f)
    throw ConfigError("cannot write " + p.string());
  return f;
}

inline std::string eps_tag(double e)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", e);
  return buf;
}

} // namespace detail

/// Writes <stem>.csv and <stem>.txt into dir.
inline void emit(const EocTable& t, const std::filesystem::path& dir, const std::string& stem)
{
  std::filesystem::create_directories(dir);
  auto csv = detail::open_out(dir / (stem + ".csv"));
  write_eoc_csv(csv, t);
  auto txt = detail::open_out(dir / (stem + ".txt"));
  write_eoc_table(txt, t);
}

inline void emit(const SeriesReport& r, const std::filesystem::path& dir, const std::string& stem)
{
  std::filesystem::create_directories(dir);
  auto csv = detail::open_out(dir / (stem + "_series.csv"));
  write_series_csv(csv, r);
  for (const auto& [tag, s] : {std::pair<const char*, const State*>{"initial", &r.initial},
                               std::pair<const char*, const State*>{"final", &r.final_state}}) {
    const std::string pre = stem + "_" + tag + "_";
    dump_field(dir / (pre + "rho"), s->rho, s->grid);
    for (int m = 0; m < s->grid.dim(); ++m)
      dump_field(dir / (pre + "u" + std::to_string(m + 1)), s->vel[m], s->grid);
    dump_field(dir / (pre + "div_u"), divergence(*s), s->grid);
  }
}

inline void emit(const VortexReport& r, const std::filesystem::path& dir, const std::string& stem)
{
  std::filesystem::create_directories(dir);
  for (const auto& s : r.series) {
    auto f = detail::open_out(dir / (stem + "_eps_" + detail::eps_tag(s.epsilon) + ".csv"));
    write_vortex_csv(f, s);
  }
  auto f = detail::open_out(dir / (stem + "_summary.csv"));
  write_vortex_summary(f, r);
}

} // namespace apwave
