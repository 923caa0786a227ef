// Drive the stepper directly: travelling vortex at eps = 1e-3 on a coarse mesh,
// printing the kinetic energy ratio every 20 steps.

#include <cstdio>

#include "apwave/diagnostics.hpp"
#include "apwave/problems.hpp"
#include "apwave/stepper.hpp"
#include "apwave/tableau.hpp"

int main()
{
  const apwave::ProblemSpec p = apwave::travelling_vortex(1e-3);
  const apwave::PeriodicGrid g = p.make_grid({128, 32});
  const apwave::ImexTableau ars = apwave::builtin_tableau("ARS222");

  apwave::State u0 = p.initial_state(g);
  const double ke0 = apwave::kinetic_energy(u0);

  apwave::RunOptions opt;
  opt.cfl = p.cfl;
  opt.t_final = p.t_final;
  opt.observe_every = 20;
  const apwave::Observer print = [ke0](const apwave::StepInfo& info, const apwave::State& s) {
    std::printf("step %4d  t = %.4f  KE/KE0 = %.6f\n", info.step, info.t,
                apwave::kinetic_energy(s) / ke0);
  };
  const auto r = apwave::run(std::move(u0), p.params, ars, opt, std::span(&print, 1));
  std::printf("%d steps, max |div u| proxy = %.3e\n", r.steps,
              apwave::wellprepared_defect(r.state).div_u_norm);
  return 0;
}
