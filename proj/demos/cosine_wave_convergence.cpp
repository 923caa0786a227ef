// Grid refinement study for the 1D cosine wave at a chosen Mach number.
//   cosine_wave_convergence [eps]

#include <cstdlib>
#include <iostream>

#include "apwave/harness.hpp"

int main(int argc, char** argv)
{
  apwave::RunConfig cfg;
  cfg.problem = "cosine_wave";
  cfg.epsilon = argc > 1 ? std::atof(argv[1]) : 1.0;
  try {
    const auto table = apwave::run_eoc(cfg);
    apwave::write_eoc_table(std::cout, table);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
