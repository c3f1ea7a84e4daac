#pragma once

// Fault-tolerant quantum memory on a torus of non-cyclic anyons: algebraic
// model data, Majorana-backed Ising dynamics, the hierarchical cellular-
// automaton decoder, the matching-based recoverability oracle, the
// space-time error classifier, and the Monte Carlo harness.

#include "anyonca/anyon_model.hpp"
#include "anyonca/backend.hpp"
#include "anyonca/classifier.hpp"
#include "anyonca/decoder.hpp"
#include "anyonca/experiments.hpp"
#include "anyonca/fusion_graph.hpp"
#include "anyonca/lattice.hpp"
#include "anyonca/majorana.hpp"
#include "anyonca/noise.hpp"
#include "anyonca/proof_params.hpp"
#include "anyonca/rng.hpp"
#include "anyonca/verifier.hpp"
