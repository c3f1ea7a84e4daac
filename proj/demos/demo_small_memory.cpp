// Runs a handful of lifetime instances on a 3x3 torus and prints the raw
// records, as a minimal end-to-end usage example of the library API.

#include <iostream>

#include "anyonca/anyonca.hpp"

int main() {
  anyonca::ExperimentConfig cfg;
  cfg.n = 1;
  cfg.p_list = {3e-3};
  cfg.instances = 10;
  cfg.t_max = 200000;
  cfg.seed = 42;

  auto records = anyonca::run_sweep(cfg);
  anyonca::write_csv(records, std::cout);
  return 0;
}
