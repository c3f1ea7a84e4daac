#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace anyonca {

/// Torus geometry: an L x L square lattice with L = Q^n and periodic
/// boundaries. Q is odd so every colony has an exact centre site.
struct LatticeGeom {
  int Q = 3;
  int n_levels = 1;
  int L = 3;

  LatticeGeom() = default;
  LatticeGeom(int q, int n) : Q(q), n_levels(n) {
    if (q < 3 || q % 2 == 0) {
      throw std::invalid_argument("colony size Q must be odd and >= 3");
    }
    if (n < 1) {
      throw std::invalid_argument("need at least one level");
    }
    int64_t size = 1;
    for (int i = 0; i < n; ++i) {
      size *= q;
      if (size > 100000) {
        throw std::invalid_argument("lattice too large");
      }
    }
    L = static_cast<int>(size);
  }

  int sites() const { return L * L; }
  int wrap(int v) const { return ((v % L) + L) % L; }
};

struct Site {
  int x = 0;
  int y = 0;
  bool operator==(const Site&) const = default;
};

inline int site_index(const LatticeGeom& g, Site s) { return s.y * g.L + s.x; }
inline Site site_at(const LatticeGeom& g, int index) {
  return {index % g.L, index / g.L};
}

/// Level-k colony coordinates: position in the level-k renormalized lattice.
/// A level-0 colony is a single site.
struct ColonyAddress {
  int level = 0;
  int rx = 0;
  int ry = 0;
  bool operator==(const ColonyAddress&) const = default;
};

inline int pow_int(int base, int exp) {
  int v = 1;
  while (exp-- > 0) {
    v *= base;
  }
  return v;
}

inline ColonyAddress colony_of(const LatticeGeom& g, Site s, int k) {
  if (k < 0 || k > g.n_levels) {
    throw std::invalid_argument("level out of range");
  }
  int cell = pow_int(g.Q, k);
  return {k, s.x / cell, s.y / cell};
}

/// Physical site at the exact centre of a level-k colony. Exists because Q is
/// odd: the offset within the colony is (Q^k - 1) / 2 in both directions.
inline Site centre_site(const LatticeGeom& g, const ColonyAddress& c) {
  int cell = pow_int(g.Q, c.level);
  int off = (cell - 1) / 2;
  return {c.rx * cell + off, c.ry * cell + off};
}

/// Minimal signed displacement from a to b, each component in (-L/2, L/2].
inline std::pair<int, int> torus_displacement(const LatticeGeom& g, Site a,
                                              Site b) {
  auto comp = [&](int from, int to) {
    int d = g.wrap(to - from);
    if (2 * d > g.L) {
      d -= g.L;
    }
    return d;
  };
  return {comp(a.x, b.x), comp(a.y, b.y)};
}

inline int torus_distance(const LatticeGeom& g, Site a, Site b) {
  auto [dx, dy] = torus_displacement(g, a, b);
  return std::abs(dx) + std::abs(dy);
}

/// Position classes of a cell within its Q x Q parent colony. Border classes
/// stack in front of the quadrant/corridor/centre class reached on
/// fall-through, so a rule engine can evaluate them in order.
enum class RegionClass : uint8_t {
  WestBorder,
  SouthBorder,
  SWQuadrant,
  WestCorridor,
  NWQuadrant,
  NorthCorridor,
  NEQuadrant,
  EastCorridor,
  SEQuadrant,
  SouthCorridor,
  Centre,
};

inline const char* region_name(RegionClass r) {
  switch (r) {
    case RegionClass::WestBorder: return "WestBorder";
    case RegionClass::SouthBorder: return "SouthBorder";
    case RegionClass::SWQuadrant: return "SWQuadrant";
    case RegionClass::WestCorridor: return "WestCorridor";
    case RegionClass::NWQuadrant: return "NWQuadrant";
    case RegionClass::NorthCorridor: return "NorthCorridor";
    case RegionClass::NEQuadrant: return "NEQuadrant";
    case RegionClass::EastCorridor: return "EastCorridor";
    case RegionClass::SEQuadrant: return "SEQuadrant";
    case RegionClass::SouthCorridor: return "SouthCorridor";
    case RegionClass::Centre: return "Centre";
  }
  return "?";
}

/// Up to three classes apply to one cell: West border, South border, and the
/// class used when the border rules fall through.
struct RegionChain {
  std::array<RegionClass, 3> classes{};
  int count = 0;
  void push(RegionClass r) { classes[count++] = r; }
  RegionClass final_class() const { return classes[count - 1]; }
  bool contains(RegionClass r) const {
    for (int i = 0; i < count; ++i) {
      if (classes[i] == r) {
        return true;
      }
    }
    return false;
  }
};

inline RegionChain region_of(int rx, int ry, int Q) {
  if (Q < 3 || Q % 2 == 0) {
    throw std::invalid_argument("region_of needs odd Q >= 3");
  }
  int x = ((rx % Q) + Q) % Q;
  int y = ((ry % Q) + Q) % Q;
  int mid = Q / 2;
  RegionChain chain;
  if (x == 0) {
    chain.push(RegionClass::WestBorder);
  }
  if (y == 0) {
    chain.push(RegionClass::SouthBorder);
  }
  if (x < mid && y < mid) {
    chain.push(RegionClass::SWQuadrant);
  } else if (x < mid && y == mid) {
    chain.push(RegionClass::WestCorridor);
  } else if (x < mid) {
    chain.push(RegionClass::NWQuadrant);
  } else if (x == mid && y > mid) {
    chain.push(RegionClass::NorthCorridor);
  } else if (x > mid && y > mid) {
    chain.push(RegionClass::NEQuadrant);
  } else if (x > mid && y == mid) {
    chain.push(RegionClass::EastCorridor);
  } else if (x > mid) {
    chain.push(RegionClass::SEQuadrant);
  } else if (x == mid && y < mid) {
    chain.push(RegionClass::SouthCorridor);
  } else {
    chain.push(RegionClass::Centre);
  }
  return chain;
}

}  // namespace anyonca
