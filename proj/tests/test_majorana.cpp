#include <catch2/catch_amalgamated.hpp>

#include "anyonca/majorana.hpp"
#include "anyonca/rng.hpp"

using namespace anyonca;

TEST_CASE("fresh pair sits in the vacuum channel") {
  MajoranaState m;
  auto [p, q] = m.add_vacuum_pair();
  REQUIRE(m.mode_count() == 2);
  REQUIRE(m.at(p, q) == 1.0);
  REQUIRE(m.at(q, p) == -1.0);
  REQUIRE(m.is_deterministic(p, q));
}

TEST_CASE("independent pairs are uncorrelated") {
  MajoranaState m;
  auto [a1, a2] = m.add_vacuum_pair();
  auto [b1, b2] = m.add_vacuum_pair();
  (void)a1;
  (void)b2;
  REQUIRE(m.at(a2, b1) == 0.0);
  REQUIRE(m.prob_plus(a2, b1) == 0.5);
}

TEST_CASE("projection decouples the measured pair and stays pure") {
  MajoranaState m;
  auto [a1, a2] = m.add_vacuum_pair();
  auto [b1, b2] = m.add_vacuum_pair();
  m.project_pair(a2, b1, +1);
  REQUIRE(m.at(a2, b1) == 1.0);
  REQUIRE(m.at(a2, a1) == 0.0);
  // Entanglement transfer: the leftover modes are forced into a sharp
  // channel by total-parity conservation.
  REQUIRE(std::abs(m.at(a1, b2)) == 1.0);
  REQUIRE(m.purity_defect() < 1e-12);
}

TEST_CASE("exchange preserves the exchanged pair's own parity") {
  MajoranaState m;
  auto [a1, a2] = m.add_vacuum_pair();
  m.exchange(a1, a2);
  REQUIRE(m.at(a1, a2) == 1.0);
  REQUIRE(m.purity_defect() < 1e-12);
}

TEST_CASE("exchange rotates cross correlations") {
  MajoranaState m;
  auto [a1, a2] = m.add_vacuum_pair();
  auto [b1, b2] = m.add_vacuum_pair();
  (void)b2;
  // g_a2 -> g_b1, g_b1 -> -g_a2: the mover inherits the crossed mode's
  // correlations.
  m.exchange(a2, b1);
  REQUIRE(m.at(a2, b2) == 1.0);   // was <i g_b1 g_b2> = +1
  REQUIRE(m.at(b1, a1) == 1.0);   // was -<i g_a2 g_a1> = +1
  REQUIRE(m.at(a1, a2) == 0.0);
  REQUIRE(m.purity_defect() < 1e-12);
}

TEST_CASE("double exchange is the monodromy") {
  MajoranaState m;
  auto [a1, a2] = m.add_vacuum_pair();
  auto [b1, b2] = m.add_vacuum_pair();
  m.exchange(a2, b1);
  m.exchange(a2, b1);
  // Winding a sigma fully around another flips both pair channels' signs
  // through the cross terms: both pairs now fuse to eps deterministically.
  REQUIRE(m.at(a1, a2) == -1.0);
  REQUIRE(m.at(b1, b2) == -1.0);
  REQUIRE(m.purity_defect() < 1e-12);
}

TEST_CASE("removal compacts the matrix") {
  MajoranaState m;
  auto [a1, a2] = m.add_vacuum_pair();
  auto [b1, b2] = m.add_vacuum_pair();
  (void)a1;
  m.project_pair(a2, b1, -1);
  m.remove_pair(a2, b1);
  REQUIRE(m.mode_count() == 2);
  // Remaining modes (old a1, b2) keep their forced channel.
  REQUIRE(std::abs(m.at(0, 1)) == 1.0);
}

TEST_CASE("entries stay bounded through long random walks") {
  MajoranaState m;
  for (int i = 0; i < 4; ++i) {
    m.add_vacuum_pair();
  }
  Rng rng(7);
  for (int step = 0; step < 2000; ++step) {
    int a = static_cast<int>(rng.below(m.mode_count()));
    int b = static_cast<int>(rng.below(m.mode_count()));
    if (a == b) {
      continue;
    }
    m.exchange(a, b);
    REQUIRE(m.max_abs_entry() <= 1.0 + 1e-9);
  }
  REQUIRE(m.purity_defect() < 1e-6);
}
