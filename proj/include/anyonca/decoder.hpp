#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "anyonca/backend.hpp"
#include "anyonca/lattice.hpp"
#include "anyonca/noise.hpp"

namespace anyonca {

/// Decoder parameters. Occupancy thresholds are held as exact integer
/// minimum counts ("at least f b" with count >= ceil(f b)), derived from the
/// rational fractions once, so no floating-point comparison sits in the hot
/// loop. U = b^2 is the working-period length.
struct DecoderConfig {
  int Q = 3;
  int b = 7;
  int U = 49;
  int min_count_c = 6;  // ceil(f_c b), used within bins and across bins
  int min_count_n = 2;  // ceil(f_n b)
  double f_c = 0.8;
  double f_n = 0.2;

  static DecoderConfig from_fractions(int Q, int b, long fc_num, long fc_den,
                                      long fn_num, long fn_den) {
    if (b < 2 || Q < 3 || Q % 2 == 0) {
      throw std::invalid_argument("need odd Q >= 3 and b >= 2");
    }
    auto ceil_mul = [b](long num, long den) {
      if (num < 0 || den <= 0 || num > den) {
        throw std::invalid_argument("fractions must lie in [0, 1]");
      }
      return static_cast<int>((num * b + den - 1) / den);
    };
    DecoderConfig cfg;
    cfg.Q = Q;
    cfg.b = b;
    cfg.U = b * b;
    cfg.min_count_c = ceil_mul(fc_num, fc_den);
    cfg.min_count_n = ceil_mul(fn_num, fn_den);
    cfg.f_c = static_cast<double>(fc_num) / static_cast<double>(fc_den);
    cfg.f_n = static_cast<double>(fn_num) / static_cast<double>(fn_den);
    if (cfg.min_count_c <= cfg.min_count_n) {
      throw std::invalid_argument("thresholds require f_c > f_n");
    }
    return cfg;
  }
};

/// What a transition rule decided for one cell.
struct RuleAction {
  bool move = false;
  int dx = 0;
  int dy = 0;
  Charge charge = kVacuum;
};

/// The level-k transition-rule table. `chain` is the cell's region chain
/// within its parent colony, `centre` the cell's own syndrome, `nb` the
/// eight neighbour syndromes indexed nb[dx+1][dy+1]. Border rules run first
/// and fall through to the quadrant/corridor class when none of their
/// neighbour guards fire; a vacuum centre never moves.
inline RuleAction select_rule(const RegionChain& chain, Charge centre,
                              const std::array<std::array<Charge, 3>, 3>& nb) {
  auto s = [&](int dx, int dy) { return nb[dx + 1][dy + 1]; };
  RuleAction nothing;
  if (centre == kVacuum) {
    return nothing;
  }
  auto move = [&](int dx, int dy) {
    RuleAction a;
    a.move = true;
    a.dx = dx;
    a.dy = dy;
    a.charge = centre;
    return a;
  };
  for (int i = 0; i < chain.count; ++i) {
    switch (chain.classes[i]) {
      case RegionClass::WestBorder:
        if (s(-1, 1) || s(-1, 0) || s(-1, -1)) {
          return move(-1, 0);
        }
        break;  // continue below
      case RegionClass::SouthBorder:
        if (s(-1, -1) || s(0, -1) || s(1, -1)) {
          return move(0, -1);
        }
        break;  // continue below
      case RegionClass::SWQuadrant:
        if (s(0, -1) || s(-1, 0) || s(-1, -1)) {
          return nothing;
        }
        if (s(0, 1) || s(-1, 1)) {
          return move(0, 1);
        }
        if (s(1, 0) || s(1, -1)) {
          return move(1, 0);
        }
        return move(0, 1);
      case RegionClass::WestCorridor:
        if (s(0, -1) || s(-1, 0) || s(0, 1) || s(-1, -1) || s(-1, 1)) {
          return nothing;
        }
        return move(1, 0);
      case RegionClass::NWQuadrant:
        if (s(-1, 0) || s(0, 1) || s(-1, 1)) {
          return nothing;
        }
        if (s(1, 0) || s(1, 1)) {
          return move(1, 0);
        }
        if (s(0, -1) || s(-1, -1)) {
          return move(0, -1);
        }
        return move(1, 0);
      case RegionClass::NorthCorridor:
        if (s(-1, 0) || s(0, 1) || s(1, 0) || s(-1, 1) || s(1, 1)) {
          return nothing;
        }
        return move(0, -1);
      case RegionClass::NEQuadrant:
        if (s(0, 1) || s(1, 0) || s(1, 1)) {
          return nothing;
        }
        if (s(0, -1) || s(1, -1)) {
          return move(0, -1);
        }
        if (s(-1, 0) || s(-1, 1)) {
          return move(-1, 0);
        }
        return move(0, -1);
      case RegionClass::EastCorridor:
        if (s(0, 1) || s(1, 0) || s(0, -1) || s(1, 1) || s(1, -1)) {
          return nothing;
        }
        return move(-1, 0);
      case RegionClass::SEQuadrant:
        if (s(1, 0) || s(0, -1) || s(1, -1)) {
          return nothing;
        }
        if (s(-1, 0) || s(-1, -1)) {
          return move(-1, 0);
        }
        if (s(0, 1) || s(1, 1)) {
          return move(0, 1);
        }
        return move(-1, 0);
      case RegionClass::SouthCorridor:
        if (s(1, 0) || s(0, -1) || s(-1, 0) || s(1, -1) || s(-1, -1)) {
          return nothing;
        }
        return move(0, 1);
      case RegionClass::Centre:
        // The centre cell only feeds the renormalized syndromes.
        return nothing;
    }
  }
  return nothing;
}

/// Per-level, per-colony renormalized syndromes.
///
/// Every level-k colony keeps two independent binned accumulators, both fed
/// by the centre of its enclosed level-(k-1) structure: the "centre" chain
/// thresholds bins and periods with f_c and publishes s_{k,c}; the
/// "neighbour" chain does the same with f_n and publishes s_{k,n}. At level
/// 1 both chains consume the raw reported syndrome of the colony-centre
/// site; at level k >= 2 they consume the respective published values of the
/// centre level-(k-1) colony, once per level-(k-1) working period.
class SyndromeHierarchy {
 public:
  SyndromeHierarchy() = default;

  SyndromeHierarchy(const LatticeGeom& geom, const DecoderConfig& cfg,
                    size_t charge_count)
      : geom_(geom), cfg_(cfg), charges_(charge_count) {
    levels_.resize(geom.n_levels);  // index k valid for 1 <= k < n_levels
    for (int k = 1; k < geom.n_levels; ++k) {
      int w = geom.L / pow_int(geom.Q, k);
      levels_[k].width = w;
      levels_[k].c_chain.assign(w * w, Chain(charge_count));
      levels_[k].n_chain.assign(w * w, Chain(charge_count));
      levels_[k].pub_c.assign(w * w, kVacuum);
      levels_[k].pub_n.assign(w * w, kVacuum);
    }
  }

  /// Feeds one measurement round into the hierarchy. Must be called exactly
  /// once per time step, after the syndromes for step t were produced.
  void accumulate(const SyndromeGrid& s0, long t) {
    long period = 1;
    for (int k = 1; k < geom_.n_levels; ++k) {
      // Level k consumes one value per level-(k-1) working period.
      if ((t + 1) % period != 0) {
        break;
      }
      Level& lvl = levels_[k];
      int child_mid = geom_.Q / 2;
      for (int ry = 0; ry < lvl.width; ++ry) {
        for (int rx = 0; rx < lvl.width; ++rx) {
          Charge vc, vn;
          if (k == 1) {
            Site c = centre_site(geom_, {1, rx, ry});
            vc = vn = s0.at(c.x, c.y);
          } else {
            const Level& child = levels_[k - 1];
            int cx = rx * geom_.Q + child_mid;
            int cy = ry * geom_.Q + child_mid;
            vc = child.pub_c[cy * child.width + cx];
            vn = child.pub_n[cy * child.width + cx];
          }
          int idx = ry * lvl.width + rx;
          push_chain(lvl.c_chain[idx], vc, cfg_.min_count_c, lvl.pub_c[idx]);
          push_chain(lvl.n_chain[idx], vn, cfg_.min_count_n, lvl.pub_n[idx]);
        }
      }
      period *= cfg_.U;
    }
  }

  Charge published_c(int level, int rx, int ry) const {
    const Level& lvl = levels_.at(level);
    return lvl.pub_c[ry * lvl.width + rx];
  }
  Charge published_n(int level, int rx, int ry) const {
    const Level& lvl = levels_.at(level);
    return lvl.pub_n[ry * lvl.width + rx];
  }

  /// Non-trivial pushes seen by the current bin of the level-1 centre chain
  /// at a colony; exposed for the self-correction tests.
  int level1_bin_count(int rx, int ry) const {
    const Level& lvl = levels_.at(1);
    return lvl.c_chain[ry * lvl.width + rx].bin_nontrivial;
  }

 private:
  struct Chain {
    explicit Chain(size_t charges = 0)
        : counts(charges, 0), last_seen(charges, 0) {}
    std::vector<int> counts;       // per charge, current bin
    std::vector<long> last_seen;   // push ordinal of last occurrence
    int bin_nontrivial = 0;
    int pushes = 0;
    long push_seq = 0;
    int bins_closed = 0;
    int bins_nontrivial = 0;
    Charge last_nontrivial_bin = kVacuum;
  };

  void push_chain(Chain& ch, Charge v, int min_count, Charge& published) {
    ++ch.push_seq;
    ++ch.pushes;
    if (v != kVacuum) {
      ++ch.counts[v];
      ch.last_seen[v] = ch.push_seq;
      ++ch.bin_nontrivial;
    }
    if (ch.pushes < cfg_.b) {
      return;
    }
    // Close the bin: non-trivial iff enough non-trivial reports, and then the
    // charge reported most often wins (ties to the latest occurrence).
    Charge bin_charge = kVacuum;
    if (ch.bin_nontrivial >= min_count) {
      int best = 0;
      long best_seen = -1;
      for (size_t c = 1; c < ch.counts.size(); ++c) {
        if (ch.counts[c] > best ||
            (ch.counts[c] == best && best > 0 && ch.last_seen[c] > best_seen)) {
          best = ch.counts[c];
          best_seen = ch.last_seen[c];
          bin_charge = static_cast<Charge>(c);
        }
      }
    }
    std::fill(ch.counts.begin(), ch.counts.end(), 0);
    ch.pushes = 0;
    ch.bin_nontrivial = 0;
    ++ch.bins_closed;
    if (bin_charge != kVacuum) {
      ++ch.bins_nontrivial;
      ch.last_nontrivial_bin = bin_charge;
    }
    if (ch.bins_closed < cfg_.b) {
      return;
    }
    // Close the working period and publish.
    published = (ch.bins_nontrivial >= min_count) ? ch.last_nontrivial_bin
                                                  : kVacuum;
    ch.bins_closed = 0;
    ch.bins_nontrivial = 0;
    ch.last_nontrivial_bin = kVacuum;
  }

  LatticeGeom geom_;
  DecoderConfig cfg_;
  size_t charges_ = 0;

  struct Level {
    int width = 0;
    std::vector<Chain> c_chain;
    std::vector<Chain> n_chain;
    std::vector<Charge> pub_c;
    std::vector<Charge> pub_n;
  };
  std::vector<Level> levels_;
};

/// Realizes the level-k transport operator M^{(dx,dy),k} at colony (rx, ry):
/// a carrier of the commanded charge starts from the colony centre (created
/// as half of a fresh pair when absent, the partner staying behind) and hops
/// Q^k sites toward the neighbour centre. Occupied intermediate sites are
/// collapsed together with the carrier; when the collapse is not the
/// commanded charge a fresh pair is drawn from the vacuum, the partner is
/// deposited and the carrier keeps going. The landing site is left
/// uncollapsed for the end-of-step collapse.
inline void execute_move(SystemState& state, const AnyonModel& model,
                         int level, int rx, int ry, const RuleAction& act) {
  if (!act.move) {
    return;
  }
  const LatticeGeom& g = state.geom();
  int span = pow_int(g.Q, level);
  Site cur = centre_site(g, {level, rx, ry});
  Charge q = act.charge;
  if (q != kEps && q != kSigma) {
    return;  // only executable species exist in the Ising backend
  }

  // Locate (or create) the carrier at the source.
  int carrier = -1;
  for (int id : state.ids_at(cur)) {
    if (state.instance(id).kind == q) {
      carrier = id;
      break;
    }
  }
  if (carrier < 0) {
    auto [stay, move] = state.create_pair(q, cur, cur);
    (void)stay;
    carrier = move;
  }

  for (int i = 1; i <= span; ++i) {
    Site next{g.wrap(cur.x + act.dx), g.wrap(cur.y + act.dy)};
    state.move_anyon(carrier, next);
    cur = next;
    if (i == span) {
      break;  // landing site collapses at the end of the step
    }
    if (state.ids_at(cur).size() > 1) {
      int result = state.fuse_site(cur);
      Charge got = (result < 0) ? kVacuum : state.instance(result).kind;
      if (got == q) {
        carrier = result;
      } else {
        auto [stay, move] = state.create_pair(q, cur, cur);
        (void)stay;
        carrier = move;
      }
    }
  }
  (void)model;
}

/// Optional decoder trace sink: one line per executed action,
/// "t level rho_x rho_y DIR charge" with DIR in {E, W, N, S}.
struct DecoderTrace {
  std::ostream* out = nullptr;
  void log(long t, int level, int rx, int ry, const RuleAction& a,
           const AnyonModel& model) {
    if (!out || !a.move) {
      return;
    }
    char dir = a.dx > 0 ? 'E' : a.dx < 0 ? 'W' : a.dy > 0 ? 'N' : 'S';
    (*out) << t << ' ' << level << ' ' << rx << ' ' << ry << ' ' << dir << ' '
           << model.name_of(a.charge) << '\n';
  }
};

/// Applies every transition-rule level due at step t (ascending levels, as
/// the schedule prescribes): level n runs when (t+1) is a multiple of U^n.
/// Rule selection for a level uses one syndrome snapshot (the s_0 grid for
/// level 0, the published hierarchy values otherwise); the selected moves
/// then execute in row-major colony order.
inline void apply_transition_rules(SystemState& state, const AnyonModel& model,
                                   const DecoderConfig& cfg,
                                   const SyndromeHierarchy& hierarchy,
                                   const SyndromeGrid& s0, long t,
                                   DecoderTrace* trace = nullptr) {
  const LatticeGeom& g = state.geom();
  long period = 1;
  for (int n = 0; n < g.n_levels; ++n, period *= cfg.U) {
    if ((t + 1) % period != 0) {
      continue;
    }
    int width = g.L / pow_int(g.Q, n);
    auto syn_c = [&](int rx, int ry) {
      return n == 0 ? s0.at(rx, ry) : hierarchy.published_c(n, rx, ry);
    };
    auto syn_n = [&](int rx, int ry) {
      return n == 0 ? s0.at(rx, ry) : hierarchy.published_n(n, rx, ry);
    };
    std::vector<RuleAction> actions(width * width);
    for (int ry = 0; ry < width; ++ry) {
      for (int rx = 0; rx < width; ++rx) {
        std::array<std::array<Charge, 3>, 3> nb{};
        for (int dx = -1; dx <= 1; ++dx) {
          for (int dy = -1; dy <= 1; ++dy) {
            if (dx == 0 && dy == 0) {
              continue;
            }
            int nx = (rx + dx + width) % width;
            int ny = (ry + dy + width) % width;
            nb[dx + 1][dy + 1] = syn_n(nx, ny);
          }
        }
        actions[ry * width + rx] =
            select_rule(region_of(rx, ry, g.Q), syn_c(rx, ry), nb);
      }
    }
    for (int ry = 0; ry < width; ++ry) {
      for (int rx = 0; rx < width; ++rx) {
        const RuleAction& a = actions[ry * width + rx];
        if (a.move) {
          if (trace) {
            trace->log(t, n, rx, ry, a, model);
          }
          execute_move(state, model, n, rx, ry, a);
        }
      }
    }
  }
}

/// Collapses every occupied site (row-major order).
inline void collapse_all_sites(SystemState& state) {
  for (int idx : state.occupied_sites()) {
    state.fuse_site(site_at(state.geom(), idx));
  }
}

/// One full time step of the noisy correction loop:
///   noise -> collapse (t+1/2) -> noisy measurement -> hierarchy update ->
///   transition rules (all due levels) -> collapse (t+1).
/// Returns the syndrome grid of the step. Event sinks, when given, receive
/// the charge- and measurement-error events.
inline SyndromeGrid advance_step(SystemState& state, const AnyonModel& model,
                                 const NoiseConfig& noise,
                                 const DecoderConfig& cfg,
                                 SyndromeHierarchy& hierarchy, long t,
                                 std::vector<ErrorEvent>* event_sink = nullptr,
                                 DecoderTrace* trace = nullptr) {
  auto charge_events = apply_charge_noise(state, noise, t);
  collapse_all_sites(state);
  auto [grid, meas_events] =
      measure_all_sites(state, noise, t, model.charge_count());
  if (event_sink) {
    event_sink->insert(event_sink->end(), charge_events.begin(),
                       charge_events.end());
    event_sink->insert(event_sink->end(), meas_events.begin(),
                       meas_events.end());
  }
  hierarchy.accumulate(grid, t);
  apply_transition_rules(state, model, cfg, hierarchy, grid, t, trace);
  collapse_all_sites(state);
  return grid;
}

}  // namespace anyonca
