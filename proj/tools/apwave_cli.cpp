// Command-line driver for the convergence, vortex and low Mach studies.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apwave/config.hpp"
#include "apwave/error.hpp"
#include "apwave/harness.hpp"

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_solver = 3;

struct Flags
{
  std::string config;
  std::string problem;
  std::vector<double> epsilon;
  std::vector<std::string> mesh;
  double cfl = 0.0;
  std::string tableau;
  double t_final = 0.0;
  std::string out;
  std::string t_final_rule;
  int observe_every = 0;
  double solver_tol = 0.0;
  int jobs = 0;
};

void add_common(CLI::App* cmd, Flags& f, bool multi_eps)
{
  cmd->add_option("--config", f.config, "flat key = value configuration file");
  cmd->add_option("--problem", f.problem, "cosine_wave | travelling_vortex | well_prepared_2d | "
                                          "schneider_vortex");
  if (multi_eps)
    cmd->add_option("--epsilon", f.epsilon, "Mach numbers (repeatable or comma separated)")
        ->delimiter(',');
  else
    cmd->add_option("--epsilon", f.epsilon, "Mach number")->expected(1);
  cmd->add_option("--mesh", f.mesh, "cells per axis: N or N1xN2, repeatable or comma separated")
      ->delimiter(',');
  cmd->add_option("--cfl", f.cfl, "advective CFL number in (0, 1)");
  cmd->add_option("--tableau", f.tableau, "ARS222 | EULER111");
  cmd->add_option("--t-final", f.t_final, "final time override");
  cmd->add_option("--t-final-rule", f.t_final_rule, "cosine wave final time: literal | "
                                                    "domain-cycles");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--observe-every", f.observe_every, "record diagnostics every n steps");
  cmd->add_option("--solver-tol", f.solver_tol, "stage solve backward error tolerance");
  cmd->add_option("--jobs", f.jobs, "independent runs executed concurrently");
}

apwave::RunConfig build_config(const Flags& f)
{
  apwave::RunConfig c;
  if (!f.config.empty())
    apwave::load_config_file(f.config, c);
  if (!f.problem.empty())
    c.problem = f.problem;
  if (f.epsilon.size() == 1)
    c.epsilon = f.epsilon.front();
  if (!f.epsilon.empty())
    c.epsilons = f.epsilon;
  if (!f.mesh.empty()) {
    c.meshes.clear();
    for (const auto& m : f.mesh)
      c.meshes.push_back(apwave::parse_mesh(m));
  }
  if (f.cfl != 0.0)
    c.cfl = f.cfl;
  if (!f.tableau.empty())
    c.tableau = f.tableau;
  if (f.t_final != 0.0)
    c.t_final = f.t_final;
  if (!f.t_final_rule.empty())
    c.t_final_rule = f.t_final_rule;
  if (!f.out.empty())
    c.out = f.out;
  if (f.observe_every != 0)
    c.observe_every = f.observe_every;
  if (f.solver_tol != 0.0)
    c.solver_tol = f.solver_tol;
  if (f.jobs != 0)
    c.jobs = f.jobs;
  c.validate();
  return c;
}

void print_series_summary(const apwave::SeriesReport& r)
{
  const auto& first = r.rows.front().d;
  const auto& last = r.rows.back().d;
  std::printf("%s eps=%g steps=%d t=%.6g\n", r.problem.c_str(), r.epsilon, r.rows.back().step,
              r.rows.back().t);
  std::printf("  grad_rho_L2 %.6e -> %.6e\n", first.grad_rho_norm, last.grad_rho_norm);
  std::printf("  div_u_L2    %.6e -> %.6e\n", first.div_u_norm, last.div_u_norm);
  std::printf("  dist_E      %.6e -> %.6e\n", first.dist_E, last.dist_E);
  std::printf("  energy      %.6e -> %.6e\n", first.energy, last.energy);
  if (r.errors)
    for (std::size_t v = 0; v < r.errors->variables.size(); ++v)
      std::printf("  error %-4s L1 %.6e  L2 %.6e\n", r.errors->variables[v].c_str(),
                  r.errors->l1[v], r.errors->l2[v]);
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"IMEX finite volume solver for the linear wave system with advection"};
  app.require_subcommand(1);

  Flags f;
  auto* run_cmd = app.add_subcommand("run", "single simulation with defect time series");
  auto* eoc_cmd = app.add_subcommand("eoc", "grid convergence against the exact solution");
  auto* aoc_cmd = app.add_subcommand("aoc", "convergence to the incompressible limit");
  auto* vortex_cmd = app.add_subcommand("vortex", "relative kinetic energy for several eps");
  auto* ap_cmd = app.add_subcommand("ap", "well-prepared data in the low Mach regime");
  for (auto* c : {run_cmd, eoc_cmd, aoc_cmd, ap_cmd})
    add_common(c, f, false);
  add_common(vortex_cmd, f, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid;
  }

  try {
    const apwave::RunConfig cfg = build_config(f);
    const std::filesystem::path out = cfg.out;

    if (eoc_cmd->parsed() || aoc_cmd->parsed()) {
      const bool aoc = aoc_cmd->parsed();
      const auto table = aoc ? apwave::run_aoc(cfg) : apwave::run_eoc(cfg);
      apwave::write_eoc_table(std::cout, table);
      if (aoc)
        for (const auto& r : table.rows)
          std::printf("  %d: max |rho - 1| = %.3e\n", r.n_cells[0], r.rho_deviation);
      if (!cfg.out.empty())
        apwave::emit(table, out, aoc ? "aoc" : "eoc");
    } else if (vortex_cmd->parsed()) {
      const auto rep = apwave::run_vortex(cfg);
      apwave::write_vortex_summary(std::cout, rep);
      std::printf("max deviation between eps curves: %.6e\n", rep.max_deviation);
      if (!cfg.out.empty())
        apwave::emit(rep, out, "vortex");
    } else {
      const bool ap = ap_cmd->parsed();
      const auto rep = ap ? apwave::run_ap(cfg) : apwave::run_single(cfg);
      print_series_summary(rep);
      if (!cfg.out.empty())
        apwave::emit(rep, out, ap ? "ap" : "run");
    }
  } catch (const apwave::SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return exit_solver;
  } catch (const apwave::NumericalBlowup& e) {
    std::fprintf(stderr, "blow-up: %s\n", e.what());
    return exit_solver;
  } catch (const std::invalid_argument& e) {
    // ConfigError, UnsupportedOrder and InputError
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_invalid;
  }
  return exit_ok;
}
