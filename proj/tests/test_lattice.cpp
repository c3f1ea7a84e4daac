#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "anyonca/lattice.hpp"

using namespace anyonca;

TEST_CASE("geometry basics") {
  LatticeGeom g(3, 2);
  REQUIRE(g.L == 9);
  REQUIRE_THROWS_AS(LatticeGeom(4, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(LatticeGeom(3, 0), std::invalid_argument);
}

TEST_CASE("colony addressing and centres") {
  LatticeGeom g(3, 2);
  REQUIRE(colony_of(g, {4, 4}, 1) == ColonyAddress{1, 1, 1});
  REQUIRE(centre_site(g, {1, 1, 1}) == Site{4, 4});
  REQUIRE(colony_of(g, {0, 8}, 1) == ColonyAddress{1, 0, 2});
  // Level-2 centre of the whole 9x9 lattice: (Q^2 - 1)/2 = 4.
  REQUIRE(centre_site(g, {2, 0, 0}) == Site{4, 4});
  // Iterated construction: the centre of the centre colony.
  Site inner = centre_site(g, {1, 1, 1});
  REQUIRE(centre_site(g, {2, 0, 0}) == inner);
}

TEST_CASE("colony round trip at every level") {
  LatticeGeom g(3, 3);
  for (int k = 0; k <= 3; ++k) {
    int w = g.L / pow_int(g.Q, k);
    for (int ry = 0; ry < w; ++ry) {
      for (int rx = 0; rx < w; ++rx) {
        ColonyAddress c{k, rx, ry};
        REQUIRE(colony_of(g, centre_site(g, c), k) == c);
      }
    }
  }
}

TEST_CASE("torus displacement and distance") {
  LatticeGeom g(3, 2);  // L = 9
  auto d = torus_displacement(g, {0, 0}, {8, 0});
  REQUIRE(d == std::pair<int, int>{-1, 0});
  REQUIRE(torus_distance(g, {0, 0}, {8, 0}) == 1);
  REQUIRE(torus_distance(g, {2, 3}, {2, 3}) == 0);
  d = torus_displacement(g, {0, 0}, {4, 5});
  REQUIRE(d == std::pair<int, int>{4, -4});
  REQUIRE(torus_distance(g, {0, 0}, {4, 5}) == 8);
}

TEST_CASE("torus displacement agrees with exhaustive wrap search") {
  LatticeGeom g(3, 2);
  for (int x = 0; x < g.L; ++x) {
    for (int y = 0; y < g.L; ++y) {
      auto [dx, dy] = torus_displacement(g, {1, 7}, {x, y});
      int best = g.L * 2;
      for (int wx = -1; wx <= 1; ++wx) {
        for (int wy = -1; wy <= 1; ++wy) {
          best = std::min(best, std::abs(x + wx * g.L - 1) +
                                    std::abs(y + wy * g.L - 7));
        }
      }
      REQUIRE(std::abs(dx) + std::abs(dy) == best);
    }
  }
}

TEST_CASE("region examples") {
  REQUIRE(region_of(1, 1, 3).final_class() == RegionClass::Centre);
  auto chain = region_of(0, 2, 3);
  REQUIRE(chain.count == 2);
  REQUIRE(chain.classes[0] == RegionClass::WestBorder);
  REQUIRE(chain.classes[1] == RegionClass::NWQuadrant);
  REQUIRE(region_of(1, 2, 5).final_class() == RegionClass::WestCorridor);
  auto corner = region_of(0, 0, 5);
  REQUIRE(corner.count == 3);
  REQUIRE(corner.classes[0] == RegionClass::WestBorder);
  REQUIRE(corner.classes[1] == RegionClass::SouthBorder);
  REQUIRE(corner.classes[2] == RegionClass::SWQuadrant);
}

TEST_CASE("the classes partition every colony exhaustively") {
  for (int Q : {3, 5, 7}) {
    std::map<RegionClass, int> final_counts;
    for (int y = 0; y < Q; ++y) {
      for (int x = 0; x < Q; ++x) {
        auto chain = region_of(x, y, Q);
        REQUIRE(chain.count >= 1);
        REQUIRE(chain.count <= 3);
        // Border flags appear exactly on the border rows/columns.
        REQUIRE(chain.contains(RegionClass::WestBorder) == (x == 0));
        REQUIRE(chain.contains(RegionClass::SouthBorder) == (y == 0));
        final_counts[chain.final_class()]++;
      }
    }
    int mid = Q / 2;
    REQUIRE(final_counts[RegionClass::Centre] == 1);
    REQUIRE(final_counts[RegionClass::WestCorridor] == mid);
    REQUIRE(final_counts[RegionClass::NorthCorridor] == mid);
    REQUIRE(final_counts[RegionClass::EastCorridor] == mid);
    REQUIRE(final_counts[RegionClass::SouthCorridor] == mid);
    REQUIRE(final_counts[RegionClass::SWQuadrant] == mid * mid);
    REQUIRE(final_counts[RegionClass::NWQuadrant] == mid * mid);
    REQUIRE(final_counts[RegionClass::NEQuadrant] == mid * mid);
    REQUIRE(final_counts[RegionClass::SEQuadrant] == mid * mid);
  }
}

TEST_CASE("rotating a non-border cell by 90 degrees rotates its class") {
  // (x, y) -> (-y, x) about the colony centre maps quadrants and corridors
  // cyclically: SW -> SE -> NE -> NW and W -> S -> E -> N.
  auto rotate = [](int x, int y, int Q) {
    int mid = Q / 2;
    return std::pair<int, int>{mid - (y - mid), mid + (x - mid)};
  };
  std::map<RegionClass, RegionClass> expected{
      {RegionClass::SWQuadrant, RegionClass::SEQuadrant},
      {RegionClass::SEQuadrant, RegionClass::NEQuadrant},
      {RegionClass::NEQuadrant, RegionClass::NWQuadrant},
      {RegionClass::NWQuadrant, RegionClass::SWQuadrant},
      {RegionClass::WestCorridor, RegionClass::SouthCorridor},
      {RegionClass::SouthCorridor, RegionClass::EastCorridor},
      {RegionClass::EastCorridor, RegionClass::NorthCorridor},
      {RegionClass::NorthCorridor, RegionClass::WestCorridor},
      {RegionClass::Centre, RegionClass::Centre},
  };
  for (int Q : {5, 7}) {
    for (int y = 1; y < Q; ++y) {
      for (int x = 1; x < Q; ++x) {
        auto [rx, ry] = rotate(x, y, Q);
        if (rx == 0 || ry == 0) {
          continue;
        }
        REQUIRE(region_of(rx, ry, Q).final_class() ==
                expected.at(region_of(x, y, Q).final_class()));
      }
    }
  }
}
