#pragma once

// Random backend-operation sequences usable by both the production state and
// the Fock oracle: pair creations first, then moves of the created anyons,
// then site fusions. Because fusions come last, op validity and the number
// of sigma-sigma measurements are independent of the sampled outcomes, so
// one op list drives every fusion branch.

#include <set>
#include <vector>

#include "anyonca/backend.hpp"
#include "fock_oracle.hpp"

namespace fock {

struct GeneratedSequence {
  std::vector<Op> ops;
  int measurements = 0;  // sigma-sigma parity measurements in the fuse phase
};

inline GeneratedSequence random_sequence(anyonca::Rng& rng,
                                         const LatticeGeom& geom,
                                         int max_sigma_pairs = 5,
                                         int max_eps_pairs = 2,
                                         int max_moves = 24,
                                         int max_measurements = 4) {
  GeneratedSequence seq;
  struct Tracked {
    int id;
    Charge kind;
    Site pos;
  };
  std::vector<Tracked> anyons;
  int next_id = 0;
  auto rand_site = [&]() {
    return Site{static_cast<int>(rng.below(geom.L)),
                static_cast<int>(rng.below(geom.L))};
  };

  int sigma_pairs = 2 + static_cast<int>(rng.below(max_sigma_pairs - 1));
  int eps_pairs = static_cast<int>(rng.below(max_eps_pairs + 1));
  for (int k = 0; k < sigma_pairs + eps_pairs; ++k) {
    Charge kind = (k < sigma_pairs) ? kSigma : kEps;
    Site a = rand_site();
    bool horizontal = rng.below(2) == 0;
    Site b = horizontal ? Site{geom.wrap(a.x + 1), a.y}
                        : Site{a.x, geom.wrap(a.y + 1)};
    Op op;
    op.type = Op::Type::CreatePair;
    op.kind = kind;
    op.a = a;
    op.b = b;
    seq.ops.push_back(op);
    anyons.push_back({next_id++, kind, a});
    anyons.push_back({next_id++, kind, b});
  }

  int moves = static_cast<int>(rng.below(max_moves + 1));
  for (int m = 0; m < moves; ++m) {
    Tracked& t = anyons[rng.below(anyons.size())];
    int dir = static_cast<int>(rng.below(4));
    Site target = t.pos;
    if (dir == 0) {
      target.x = geom.wrap(target.x + 1);
    } else if (dir == 1) {
      target.x = geom.wrap(target.x - 1);
    } else if (dir == 2) {
      target.y = geom.wrap(target.y + 1);
    } else {
      target.y = geom.wrap(target.y - 1);
    }
    Op op;
    op.type = Op::Type::Move;
    op.anyon = t.id;
    op.a = target;
    seq.ops.push_back(op);
    t.pos = target;
  }

  // Fuse occupied sites until the measurement budget is spent. The number of
  // sigma-sigma measurements at a site is floor(#sigma / 2) whatever the
  // outcomes, so the count is known here.
  std::set<std::pair<int, int>> sites;
  for (const auto& t : anyons) {
    sites.insert({t.pos.x, t.pos.y});
  }
  for (const auto& [x, y] : sites) {
    int sigmas = 0;
    for (const auto& t : anyons) {
      if (t.pos.x == x && t.pos.y == y && t.kind == kSigma) {
        ++sigmas;
      }
    }
    int cost = sigmas / 2;
    if (cost == 0 || seq.measurements + cost > max_measurements) {
      continue;
    }
    Op op;
    op.type = Op::Type::FuseSite;
    op.a = {x, y};
    seq.ops.push_back(op);
    seq.measurements += cost;
  }
  return seq;
}

/// Replays an op list on the production backend and returns the outcome
/// signature recorded by the state.
inline std::string run_on_backend(anyonca::SystemState& state,
                                  const std::vector<Op>& ops) {
  std::vector<int> real_ids;
  for (const auto& op : ops) {
    switch (op.type) {
      case Op::Type::CreatePair: {
        auto [ia, ib] = state.create_pair(op.kind, op.a, op.b);
        real_ids.push_back(ia);
        real_ids.push_back(ib);
        break;
      }
      case Op::Type::Move:
        state.move_anyon(real_ids[op.anyon], op.a);
        break;
      case Op::Type::FuseSite:
        state.fuse_site(op.a);
        break;
    }
  }
  return FockSim::signature(state.outcome_log());
}

}  // namespace fock
