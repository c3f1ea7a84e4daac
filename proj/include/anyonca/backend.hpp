#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "anyonca/anyon_model.hpp"
#include "anyonca/lattice.hpp"
#include "anyonca/majorana.hpp"
#include "anyonca/rng.hpp"

namespace anyonca {

/// One live excitation. kind is kEps or kSigma; a sigma may be "dressed" by
/// an absorbed eps, which flips its fusion channel but not its charge label.
/// ledger accumulates the signed unit displacements since creation.
struct AnyonInstance {
  int id = 0;
  Charge kind = kEps;
  int x = 0;
  int y = 0;
  bool dressed = false;
  long ledger_x = 0;
  long ledger_y = 0;
  int slot = -1;  // Majorana mode slot; -1 for eps

  Site site() const { return {x, y}; }
};

/// Winding-parity accumulators, per charge sector and torus cycle. Each entry
/// counts worldline segments crossing the fixed seam (between coordinate L-1
/// and 0); once all worldlines have closed, the parity of a counter equals
/// the parity of that sector's total winding around the cycle.
struct HomologyTotals {
  long eps_x = 0;
  long eps_y = 0;
  long sigma_x = 0;
  long sigma_y = 0;
  bool all_even() const {
    return eps_x % 2 == 0 && eps_y % 2 == 0 && sigma_x % 2 == 0 &&
           sigma_y % 2 == 0;
  }
};

/// The full dynamical state of an Ising-anyon torus: occupancy grid, Majorana
/// covariance state for the sigma modes, classical eps/dressing bits, the
/// homology ledgers, and the seeded random stream.
///
/// eps is abelian and is tracked classically: with per-site charge collapse
/// every half-step its braiding phases are unobservable, and its effect on
/// fusion statistics is captured by the dressed-bit XOR. The dense-oracle
/// tests validate this reduction.
///
/// Randomness is drawn from the state's stream in a fixed order (edge
/// permutation, noise decisions, fusion outcomes), so (seed, config) fixes
/// the trajectory bit-for-bit. Single-writer; clone whole states to branch.
class SystemState {
 public:
  explicit SystemState(LatticeGeom geom, uint64_t seed = 0)
      : geom_(geom), rng_(seed) {}

  const LatticeGeom& geom() const { return geom_; }
  Rng& rng() { return rng_; }
  const MajoranaState& covariance() const { return cov_; }
  const HomologyTotals& homology() const { return totals_; }

  // --- Introspection ---------------------------------------------------

  bool has(int id) const { return live_.count(id) != 0; }
  const AnyonInstance& instance(int id) const {
    auto it = live_.find(id);
    if (it == live_.end()) {
      throw std::invalid_argument("unknown anyon id");
    }
    return it->second;
  }
  size_t live_count() const { return live_.size(); }
  const std::map<int, AnyonInstance>& live() const { return live_; }

  /// Ascending ids of the anyons at one site.
  std::vector<int> ids_at(Site s) const {
    auto it = occupancy_.find(site_index(geom_, s));
    if (it == occupancy_.end()) {
      return {};
    }
    std::vector<int> ids = it->second;
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  /// Occupied site indices in row-major order.
  std::vector<int> occupied_sites() const {
    std::vector<int> sites;
    sites.reserve(occupancy_.size());
    for (const auto& [idx, ids] : occupancy_) {
      if (!ids.empty()) {
        sites.push_back(idx);
      }
    }
    std::sort(sites.begin(), sites.end());
    return sites;
  }

  /// The collapsed charge at a site: vacuum when empty, the single
  /// occupant's charge otherwise. Meaningful right after a collapse pass.
  Charge charge_at(Site s) const {
    auto ids = ids_at(s);
    if (ids.empty()) {
      return kVacuum;
    }
    return live_.at(ids.front()).kind;
  }

  // --- Pair creation ----------------------------------------------------

  /// Creates a particle/anti-particle pair of the given species on an edge
  /// (or on a single site when a == b, as the transition rules do). Returns
  /// (id at a, id at b). Fresh sigma modes enter in the vacuum channel.
  std::pair<int, int> create_pair(Charge kind, Site a, Site b) {
    if (kind != kEps && kind != kSigma) {
      throw std::invalid_argument("pair species must be eps or sigma");
    }
    if (!(a == b) && torus_distance(geom_, a, b) != 1) {
      throw std::invalid_argument("pair creation needs one edge");
    }
    int ia = insert_instance(kind, a);
    int ib = insert_instance(kind, b);
    if (kind == kSigma) {
      // Vacuum-channel block, oriented in slot (creation) order.
      auto [s1, s2] = cov_.add_vacuum_pair();
      live_.at(ia).slot = s1;
      live_.at(ib).slot = s2;
      slot_owner_.push_back(ia);
      slot_owner_.push_back(ib);
    }
    if (!(a == b)) {
      count_edge_crossing(kind, false, a, b);
    }
    return {ia, ib};
  }

  // --- Transport ---------------------------------------------------------

  /// Moves one anyon to an adjacent site. For a sigma, every live mode whose
  /// Jordan-Wigner key (y, x, id) is crossed gets the exchange rotation; the
  /// dense-oracle suite pins this convention down.
  void move_anyon(int id, Site target) {
    auto it = live_.find(id);
    if (it == live_.end()) {
      throw std::invalid_argument("unknown anyon id");
    }
    AnyonInstance& inst = it->second;
    auto [dx, dy] = torus_displacement(geom_, inst.site(), target);
    if (std::abs(dx) + std::abs(dy) != 1) {
      throw std::invalid_argument("move_anyon target must be adjacent");
    }
    count_edge_crossing(inst.kind, inst.dressed, inst.site(), target);
    detach(inst);
    if (inst.kind == kSigma) {
      auto old_key = jw_key(inst);
      auto new_key = std::make_tuple(target.y, target.x, inst.id);
      // Collect crossed modes, innermost first along the move direction.
      std::vector<std::pair<std::tuple<int, int, int>, int>> crossed;
      for (size_t s = 0; s < slot_owner_.size(); ++s) {
        if (static_cast<int>(s) == inst.slot) {
          continue;
        }
        auto key = jw_key(live_.at(slot_owner_[s]));
        if ((old_key < key && key < new_key) ||
            (new_key < key && key < old_key)) {
          crossed.emplace_back(key, static_cast<int>(s));
        }
      }
      std::sort(crossed.begin(), crossed.end());
      if (new_key < old_key) {
        std::reverse(crossed.begin(), crossed.end());
      }
      for (const auto& [key, slot] : crossed) {
        cov_.exchange(inst.slot, slot);
      }
    }
    inst.x = target.x;
    inst.y = target.y;
    inst.ledger_x += dx;
    inst.ledger_y += dy;
    attach(inst);
  }

  // --- Measurement and fusion ---------------------------------------------

  /// Measures the joint fusion parity of two live sigma modes: +1 is the
  /// vacuum channel. Sampled by Born's rule from the covariance entry; sharp
  /// outcomes never branch and draw no randomness. The pair stays alive, so
  /// repeating the measurement repeats the outcome.
  ///
  /// The physical parity is the slot-ordered matrix entry dressed by the
  /// Jordan-Wigner string over the live modes between the two slots,
  /// (-1)^(q-p-1). With that sign the product of all fusion parities over
  /// any complete annihilation history is +1 exactly (a Pfaffian identity),
  /// which is what global charge conservation demands.
  int measure_pair_parity(int id_a, int id_b) {
    if (id_a == id_b) {
      throw std::invalid_argument("measure_pair_parity needs distinct modes");
    }
    const AnyonInstance& a = instance(id_a);
    const AnyonInstance& b = instance(id_b);
    if (a.kind != kSigma || b.kind != kSigma) {
      throw std::invalid_argument("parity is defined for sigma modes");
    }
    return sample_parity(std::min(a.slot, b.slot), std::max(a.slot, b.slot));
  }

  /// Fuses two co-located (or explicitly chosen) anyons and returns the id of
  /// the resulting instance, or -1 for the vacuum. sigma x sigma consumes
  /// both modes; the eps channel deposits a fresh eps carrying the merged
  /// ledger at the site of the first argument.
  int fuse_two(int id_a, int id_b) {
    AnyonInstance& a = live_.at(id_a);
    AnyonInstance& b = live_.at(id_b);
    Site at = a.site();
    if (a.kind == kEps && b.kind == kEps) {
      remove_instance(id_a);
      remove_instance(id_b);
      return -1;
    }
    if (a.kind == kEps || b.kind == kEps) {
      int sigma_id = (a.kind == kSigma) ? id_a : id_b;
      int eps_id = (a.kind == kSigma) ? id_b : id_a;
      remove_instance(eps_id);
      AnyonInstance& s = live_.at(sigma_id);
      s.dressed = !s.dressed;
      return sigma_id;
    }
    // sigma x sigma: Born-sampled channel, then both modes retire.
    int lambda = sample_parity(std::min(a.slot, b.slot),
                               std::max(a.slot, b.slot));
    bool eps_channel = (lambda < 0) ^ a.dressed ^ b.dressed;
    long lx = a.ledger_x + b.ledger_x;
    long ly = a.ledger_y + b.ledger_y;
    remove_instance(id_a);
    remove_instance(id_b);
    if (!eps_channel) {
      return -1;
    }
    int eps = insert_instance(kEps, at);
    live_.at(eps).ledger_x = lx;
    live_.at(eps).ledger_y = ly;
    return eps;
  }

  /// Collapses a site onto a definite superselection sector by fusing its
  /// occupants pairwise in ascending id order. Returns the surviving
  /// instance id, or -1 when the site ends in the vacuum.
  int fuse_site(Site s) {
    std::vector<int> ids = ids_at(s);
    if (ids.empty()) {
      return -1;
    }
    int cur = ids.front();
    for (size_t i = 1; i < ids.size(); ++i) {
      if (cur < 0) {
        cur = ids[i];
        continue;
      }
      cur = fuse_two(cur, ids[i]);
    }
    return cur;
  }

  /// Total topological charge of the lattice, evaluated by folding every
  /// live anyon together on a cloned state. Vacuum at every integer time of
  /// a well-formed run. Folding needs no transport: the total charge depends
  /// only on the channel algebra, not on bookkeeping positions.
  Charge total_charge() const {
    SystemState clone = *this;
    std::vector<int> ids;
    ids.reserve(clone.live_.size());
    for (const auto& [id, inst] : clone.live_) {
      (void)inst;
      ids.push_back(id);
    }
    int cur = -1;
    for (int id : ids) {
      if (cur < 0) {
        cur = id;
        continue;
      }
      cur = clone.fuse_two(cur, id);
    }
    if (cur < 0) {
      return kVacuum;
    }
    return clone.live_.at(cur).kind;
  }

  // --- Branch-forcing hooks (test support) ---------------------------------

  /// Queue of outcomes (+1/-1) that the next genuinely random parity
  /// measurements must take; used by exhaustive branch enumeration.
  std::vector<int>& forced_outcomes() { return forced_outcomes_; }
  int branch_points() const { return branch_points_; }
  void reset_branch_tracking() {
    forced_outcomes_.clear();
    forced_cursor_ = 0;
    branch_points_ = 0;
    outcome_log_.clear();
  }

  /// Every pair-parity outcome this state produced, deterministic ones
  /// included, in measurement order.
  const std::vector<int>& outcome_log() const { return outcome_log_; }

 private:
  std::tuple<int, int, int> jw_key(const AnyonInstance& a) const {
    return {a.y, a.x, a.id};
  }

  // Samples the PHYSICAL fusion parity of slots p < q: the slot-ordered
  // matrix parity times the string sign (-1)^(q-p-1). Slots are compact, so
  // q - p - 1 is exactly the number of live modes between them.
  int sample_parity(int p, int q) {
    int string_sign = ((q - p - 1) % 2 == 0) ? 1 : -1;
    if (cov_.is_deterministic(p, q)) {
      int lambda = (cov_.at(p, q) > 0 ? 1 : -1) * string_sign;
      outcome_log_.push_back(lambda);
      return lambda;
    }
    ++branch_points_;
    int lambda_phys;
    if (forced_cursor_ < forced_outcomes_.size()) {
      lambda_phys = forced_outcomes_[forced_cursor_++];
    } else {
      double prob_plus_phys =
          0.5 * (1.0 + string_sign * cov_.at(p, q));
      lambda_phys = (rng_.unit() < prob_plus_phys) ? 1 : -1;
    }
    cov_.project_pair(p, q, lambda_phys * string_sign);
    outcome_log_.push_back(lambda_phys);
    return lambda_phys;
  }

  int insert_instance(Charge kind, Site s) {
    int id = next_id_++;
    AnyonInstance inst;
    inst.id = id;
    inst.kind = kind;
    inst.x = s.x;
    inst.y = s.y;
    live_.emplace(id, inst);
    attach(live_.at(id));
    return id;
  }

  void remove_instance(int id) {
    AnyonInstance& inst = live_.at(id);
    detach(inst);
    if (inst.kind == kSigma) {
      release_slot_pairwise(inst.slot);
    }
    live_.erase(id);
  }

  // Mode slots retire in pairs: stash the first of a fusing pair until its
  // partner is removed, then compact the covariance matrix once.
  void release_slot_pairwise(int slot) {
    if (pending_slot_ < 0) {
      pending_slot_ = slot;
      return;
    }
    int p = pending_slot_;
    int q = slot;
    pending_slot_ = -1;
    cov_.remove_pair(p, q);
    if (p > q) {
      std::swap(p, q);
    }
    slot_owner_.erase(slot_owner_.begin() + q);
    slot_owner_.erase(slot_owner_.begin() + p);
    for (size_t s = 0; s < slot_owner_.size(); ++s) {
      auto it = live_.find(slot_owner_[s]);
      if (it != live_.end()) {
        it->second.slot = static_cast<int>(s);
      }
    }
  }

  void attach(AnyonInstance& inst) {
    occupancy_[site_index(geom_, inst.site())].push_back(inst.id);
  }

  void detach(AnyonInstance& inst) {
    auto& ids = occupancy_[site_index(geom_, inst.site())];
    ids.erase(std::find(ids.begin(), ids.end(), inst.id));
    if (ids.empty()) {
      occupancy_.erase(site_index(geom_, inst.site()));
    }
  }

  void count_edge_crossing(Charge kind, bool dressed, Site a, Site b) {
    bool seam_x = (a.x == geom_.L - 1 && b.x == 0) ||
                  (a.x == 0 && b.x == geom_.L - 1);
    bool seam_y = (a.y == geom_.L - 1 && b.y == 0) ||
                  (a.y == 0 && b.y == geom_.L - 1);
    if (!seam_x && !seam_y) {
      return;
    }
    if (kind == kSigma) {
      totals_.sigma_x += seam_x;
      totals_.sigma_y += seam_y;
      if (dressed) {
        totals_.eps_x += seam_x;
        totals_.eps_y += seam_y;
      }
    } else {
      totals_.eps_x += seam_x;
      totals_.eps_y += seam_y;
    }
  }

  LatticeGeom geom_;
  Rng rng_;
  MajoranaState cov_;
  std::map<int, AnyonInstance> live_;
  std::unordered_map<int, std::vector<int>> occupancy_;
  std::vector<int> slot_owner_;  // covariance slot -> anyon id
  HomologyTotals totals_;
  int next_id_ = 0;
  int pending_slot_ = -1;

  std::vector<int> forced_outcomes_;
  size_t forced_cursor_ = 0;
  int branch_points_ = 0;
  std::vector<int> outcome_log_;
};

}  // namespace anyonca
