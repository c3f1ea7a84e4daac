#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "anyonca/backend.hpp"

namespace anyonca {

/// Phenomenological noise: per-edge pair creation at rate p and per-site
/// faulty charge measurement at rate q. pair_weight_sigma splits p between
/// the sigma-sigma and eps-eps processes (the split is a modelling choice;
/// it is recorded in run metadata). Wrong reports draw from wrong_weights
/// restricted to charges different from the true one (uniform by default).
struct NoiseConfig {
  double p = 0.0;
  double q = 0.0;
  double pair_weight_sigma = 0.5;
  std::vector<double> wrong_weights;  // per charge; empty = uniform

  void check(size_t charge_count) const {
    if (p < 0 || p >= 1 || q < 0 || q >= 1) {
      throw std::invalid_argument("rates must lie in [0, 1)");
    }
    if (pair_weight_sigma < 0 || pair_weight_sigma > 1) {
      throw std::invalid_argument("pair_weight_sigma must lie in [0, 1]");
    }
    if (!wrong_weights.empty() && wrong_weights.size() != charge_count) {
      throw std::invalid_argument("wrong_weights must cover every charge");
    }
  }
};

/// Reported charges for one measurement round, L x L.
struct SyndromeGrid {
  int L = 0;
  std::vector<Charge> cells;

  SyndromeGrid() = default;
  explicit SyndromeGrid(int size) : L(size), cells(size * size, kVacuum) {}
  Charge at(int x, int y) const { return cells[y * L + x]; }
  Charge& at(int x, int y) { return cells[y * L + x]; }
};

/// A noise event pinned to a space-time point. Charge errors live on edge
/// midpoints at integer times; measurement errors on sites at t + 1/2.
/// Coordinates are stored doubled so half-integers stay exact.
struct ErrorEvent {
  enum class Kind : uint8_t { ChargeError, MeasurementError };
  Kind kind = Kind::ChargeError;
  int64_t x2 = 0;
  int64_t y2 = 0;
  int64_t t2 = 0;

  double x() const { return 0.5 * static_cast<double>(x2); }
  double y() const { return 0.5 * static_cast<double>(y2); }
  double t() const { return 0.5 * static_cast<double>(t2); }
};

/// One round of charge noise: a fresh random permutation of the 2 L^2 edges
/// is drawn, and each edge independently hosts at most one pair-creation
/// process with probability p. Returns the applied events (edge midpoints,
/// integer time t). Draw order: permutation, then per edge one uniform
/// variate, plus one more when an event fires. p = 0 draws nothing.
inline std::vector<ErrorEvent> apply_charge_noise(SystemState& state,
                                                  const NoiseConfig& cfg,
                                                  long t) {
  std::vector<ErrorEvent> events;
  if (cfg.p <= 0) {
    return events;
  }
  const LatticeGeom& g = state.geom();
  std::vector<int> edges(2 * g.sites());
  for (size_t i = 0; i < edges.size(); ++i) {
    edges[i] = static_cast<int>(i);
  }
  state.rng().shuffle(edges);
  for (int e : edges) {
    if (state.rng().unit() >= cfg.p) {
      continue;
    }
    int site = e / 2;
    bool horizontal = (e % 2) == 0;
    Site a = site_at(g, site);
    Site b = horizontal ? Site{g.wrap(a.x + 1), a.y} : Site{a.x, g.wrap(a.y + 1)};
    Charge kind =
        (state.rng().unit() < cfg.pair_weight_sigma) ? kSigma : kEps;
    state.create_pair(kind, a, b);
    ErrorEvent ev;
    ev.kind = ErrorEvent::Kind::ChargeError;
    ev.x2 = 2 * a.x + (horizontal ? 1 : 0);
    ev.y2 = 2 * a.y + (horizontal ? 0 : 1);
    ev.t2 = 2 * t;
    events.push_back(ev);
  }
  return events;
}

/// Noisy charge measurement of every site at time t + 1/2 (after the site
/// collapse). True charges are reported with probability 1 - q; otherwise a
/// wrong charge is drawn from wrong_weights restricted to the other labels.
/// q = 0 draws nothing.
inline std::pair<SyndromeGrid, std::vector<ErrorEvent>> measure_all_sites(
    SystemState& state, const NoiseConfig& cfg, long t,
    size_t charge_count = 3) {
  Rng& rng = state.rng();
  const LatticeGeom& g = state.geom();
  SyndromeGrid grid(g.L);
  std::vector<ErrorEvent> events;
  for (int y = 0; y < g.L; ++y) {
    for (int x = 0; x < g.L; ++x) {
      Charge truth = state.charge_at({x, y});
      Charge reported = truth;
      if (cfg.q > 0 && rng.unit() < cfg.q) {
        double total = 0;
        for (size_t c = 0; c < charge_count; ++c) {
          if (c != truth) {
            total += cfg.wrong_weights.empty() ? 1.0 : cfg.wrong_weights[c];
          }
        }
        double draw = rng.unit() * total;
        for (size_t c = 0; c < charge_count; ++c) {
          if (c == truth) {
            continue;
          }
          draw -= cfg.wrong_weights.empty() ? 1.0 : cfg.wrong_weights[c];
          reported = static_cast<Charge>(c);
          if (draw < 0) {
            break;
          }
        }
        ErrorEvent ev;
        ev.kind = ErrorEvent::Kind::MeasurementError;
        ev.x2 = 2 * x;
        ev.y2 = 2 * y;
        ev.t2 = 2 * t + 1;
        events.push_back(ev);
      }
      grid.at(x, y) = reported;
    }
  }
  return {std::move(grid), std::move(events)};
}

}  // namespace anyonca
