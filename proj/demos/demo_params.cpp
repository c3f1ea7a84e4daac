// Builds the Ising model, derives its fusion-graph constants, and prints the
// proof-mode decoder parameters alongside the empirical defaults.

#include <iostream>

#include "anyonca/anyonca.hpp"

int main() {
  auto model = anyonca::ising_model();
  auto graph = anyonca::build_fusion_graph(model);
  int D = anyonca::graph_diameter(graph);
  std::cout << "Ising anyons: non-cyclic="
            << (anyonca::is_non_cyclic(graph) ? "yes" : "no") << ", D=" << D
            << "\n\n";

  auto p = anyonca::proof_parameters(78, D, 3);
  std::cout << "proof-mode constants (Q=78, b=9(3D+1)Q=" << p.b << "):\n"
            << "  f_c b = " << p.fc_b << ", f_n b = " << p.fn_b << '\n'
            << "  b0    = " << p.b0 << '\n'
            << "  p_c   = " << p.p_c << "\n\n";

  std::cout << "empirical defaults (Q=3, U=49): Lemma-2 bound p+q < 1/"
            << anyonca::convergence_denominator(3, 49) << '\n';
  return 0;
}
