#pragma once

// Test-only reference backend: dense Fock-space simulation of the sigma
// modes (state vector over 2^(m/2) fermion occupations) with the same
// classical eps bookkeeping as the production backend. Everything here is
// written independently of the covariance-matrix path it checks: gamma
// operators act on amplitudes through the Jordan-Wigner construction, and
// exact branch enumeration produces the exact distribution over measurement
// outcome signatures for a fixed operation list.

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "anyonca/anyon_model.hpp"
#include "anyonca/lattice.hpp"

namespace fock {

using anyonca::Charge;
using anyonca::kEps;
using anyonca::kSigma;
using anyonca::kVacuum;
using anyonca::LatticeGeom;
using anyonca::Site;
using cd = std::complex<double>;

/// One scripted backend operation. Sequences built from these are valid for
/// every branch of the fusion outcomes: creations come first, then moves of
/// created anyons, then site fusions (see sequence_gen.hpp).
struct Op {
  enum class Type { CreatePair, Move, FuseSite } type = Type::CreatePair;
  Charge kind = kSigma;  // CreatePair
  Site a{}, b{};         // CreatePair: the two sites; Move: target in a
  int anyon = -1;        // Move: anyon id
};

class FockSim {
 public:
  FockSim(const LatticeGeom& geom, std::vector<int> forced)
      : geom_(geom), forced_(std::move(forced)) {
    psi_ = {cd(1.0, 0.0)};
  }

  void run(const std::vector<Op>& ops) {
    for (const auto& op : ops) {
      switch (op.type) {
        case Op::Type::CreatePair:
          create_pair(op.kind, op.a, op.b);
          break;
        case Op::Type::Move:
          move(op.anyon, op.a);
          break;
        case Op::Type::FuseSite:
          fuse_site(op.a);
          break;
      }
    }
  }

  const std::vector<int>& outcomes() const { return outcomes_; }
  int branch_count() const { return branches_; }
  double probability() const { return prob_; }

  /// Exact distribution over outcome signatures for an op list: depth-first
  /// enumeration of every fusion branch with its Born weight.
  static std::map<std::string, double> exact_distribution(
      const LatticeGeom& geom, const std::vector<Op>& ops) {
    std::map<std::string, double> dist;
    std::vector<int> forced;
    enumerate(geom, ops, forced, dist);
    return dist;
  }

  static std::string signature(const std::vector<int>& outcomes) {
    std::string s;
    for (int o : outcomes) {
      s += (o > 0) ? '+' : '-';
    }
    return s;
  }

 private:
  struct Anyon {
    int id;
    Charge kind;
    int x, y;
    bool dressed = false;
    int mode = -1;
  };

  static void enumerate(const LatticeGeom& geom, const std::vector<Op>& ops,
                        std::vector<int>& forced,
                        std::map<std::string, double>& dist) {
    FockSim sim(geom, forced);
    sim.run(ops);
    if (sim.branches_ > static_cast<int>(forced.size())) {
      for (int lambda : {+1, -1}) {
        forced.push_back(lambda);
        enumerate(geom, ops, forced, dist);
        forced.pop_back();
      }
      return;
    }
    dist[signature(sim.outcomes_)] += sim.prob_;
  }

  // --- Fock-space gamma machinery ---------------------------------------

  // Fermion j occupies bit j; gamma_{2j} = a_j + a_j^dag and
  // gamma_{2j+1} = i (a_j - a_j^dag), with the string over fermions < j.
  std::vector<cd> apply_gamma(const std::vector<cd>& v, int mode) const {
    int j = mode / 2;
    bool odd = mode % 2;
    std::vector<cd> out(v.size(), cd(0, 0));
    for (size_t s = 0; s < v.size(); ++s) {
      if (v[s] == cd(0, 0)) {
        continue;
      }
      double sign = (__builtin_popcountll(s & ((size_t{1} << j) - 1)) & 1)
                        ? -1.0
                        : 1.0;
      size_t t = s ^ (size_t{1} << j);
      bool occupied = (s >> j) & 1;
      cd amp = odd ? (occupied ? cd(0, 1) : cd(0, -1)) * sign * v[s]
                   : sign * v[s];
      out[t] += amp;
    }
    return out;
  }

  void add_fermion() {
    psi_.resize(psi_.size() * 2, cd(0, 0));  // new fermion unoccupied
    n_modes_ += 2;
  }

  /// Transport exchange: the mover's operator is carried onto the crossed
  /// one, g_mover -> g_crossed, g_crossed -> -g_mover, realized by
  /// (1 + g_mover g_crossed)/sqrt(2).
  void exchange(int mover, int crossed) {
    std::vector<cd> tmp = apply_gamma(apply_gamma(psi_, crossed), mover);
    for (size_t s = 0; s < psi_.size(); ++s) {
      psi_[s] = (psi_[s] + tmp[s]) / std::sqrt(2.0);
    }
  }

  double expect_parity(int p, int q) const {
    std::vector<cd> opsi = apply_gamma(apply_gamma(psi_, q), p);
    cd val(0, 0);
    for (size_t s = 0; s < psi_.size(); ++s) {
      val += std::conj(psi_[s]) * cd(0, 1) * opsi[s];
    }
    return val.real();
  }

  /// Physical fusion parity of modes p < q: the mode-ordered pair parity
  /// dressed with the Jordan-Wigner string sign over the live modes between
  /// them (mirrors the production convention).
  int measure_parity(int p, int q) {
    int string_sign = 1;
    for (int w = p + 1; w < q; ++w) {
      if (mode_live_[w]) {
        string_sign = -string_sign;
      }
    }
    double exp = expect_parity(p, q) * string_sign;
    double prob_plus = 0.5 * (1.0 + exp);
    int lambda_phys;
    if (exp >= 1.0 - 1e-9) {
      lambda_phys = 1;
    } else if (exp <= -1.0 + 1e-9) {
      lambda_phys = -1;
    } else {
      if (branches_ < static_cast<int>(forced_.size())) {
        lambda_phys = forced_[branches_];
      } else {
        lambda_phys = 1;  // default branch; the enumerator splits here
      }
      ++branches_;
      prob_ *= (lambda_phys > 0) ? prob_plus : (1.0 - prob_plus);
    }
    // Project (1 + lambda_matrix * i g_p g_q)/2 and renormalize.
    double lambda_matrix = lambda_phys * string_sign;
    std::vector<cd> opsi = apply_gamma(apply_gamma(psi_, q), p);
    double norm2 = 0;
    for (size_t s = 0; s < psi_.size(); ++s) {
      psi_[s] = 0.5 * (psi_[s] + lambda_matrix * cd(0, 1) * opsi[s]);
      norm2 += std::norm(psi_[s]);
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& amp : psi_) {
      amp *= inv;
    }
    outcomes_.push_back(lambda_phys);
    return lambda_phys;
  }

  // --- Anyon-level semantics (mirrors the production contracts) -----------

  std::tuple<int, int, int> key(const Anyon& a) const {
    return {a.y, a.x, a.id};
  }

  std::pair<int, int> oriented_modes(const Anyon& a, const Anyon& b) const {
    return key(a) < key(b) ? std::pair<int, int>{a.mode, b.mode}
                           : std::pair<int, int>{b.mode, a.mode};
  }

  void create_pair(Charge kind, Site a, Site b) {
    int ia = next_id_++;
    int ib = next_id_++;
    live_[ia] = {ia, kind, a.x, a.y, false, -1};
    live_[ib] = {ib, kind, b.x, b.y, false, -1};
    if (kind == kSigma) {
      add_fermion();
      int m1 = n_modes_ - 2;
      int m2 = n_modes_ - 1;
      // |0> of the new fermion means i g_{m1} g_{m2} = +1: the vacuum
      // channel oriented (m1, m2). Assign m1 to the key-first anyon.
      if (key(live_[ia]) < key(live_[ib])) {
        live_[ia].mode = m1;
        live_[ib].mode = m2;
      } else {
        live_[ia].mode = m2;
        live_[ib].mode = m1;
      }
    }
  }

  void move(int id, Site target) {
    Anyon& inst = live_.at(id);
    if (inst.kind == kSigma) {
      auto old_key = key(inst);
      auto new_key = std::make_tuple(target.y, target.x, inst.id);
      std::vector<std::pair<std::tuple<int, int, int>, int>> crossed;
      for (const auto& [oid, other] : live_) {
        if (oid == id || other.kind != kSigma) {
          continue;
        }
        auto k = key(other);
        if ((old_key < k && k < new_key) || (new_key < k && k < old_key)) {
          crossed.emplace_back(k, other.mode);
        }
      }
      std::sort(crossed.begin(), crossed.end());
      if (new_key < old_key) {
        std::reverse(crossed.begin(), crossed.end());
      }
      for (const auto& [k, mode] : crossed) {
        exchange(inst.mode, mode);
      }
    }
    inst.x = target.x;
    inst.y = target.y;
  }

  int fuse_two(int id_a, int id_b) {
    Anyon& a = live_.at(id_a);
    Anyon& b = live_.at(id_b);
    if (a.kind == kEps && b.kind == kEps) {
      live_.erase(id_a);
      live_.erase(id_b);
      return -1;
    }
    if (a.kind == kEps || b.kind == kEps) {
      int sigma_id = (a.kind == kSigma) ? id_a : id_b;
      int eps_id = (a.kind == kSigma) ? id_b : id_a;
      live_.erase(eps_id);
      Anyon& s = live_.at(sigma_id);
      s.dressed = !s.dressed;
      return sigma_id;
    }
    auto [p, q] = oriented_modes(a, b);
    int lambda = measure_parity(p, q);
    bool eps_channel = (lambda < 0) ^ a.dressed ^ b.dressed;
    int sx = a.x, sy = a.y;
    live_.erase(id_a);
    live_.erase(id_b);
    if (!eps_channel) {
      return -1;
    }
    int eps = next_id_++;
    live_[eps] = {eps, kEps, sx, sy, false, -1};
    return eps;
  }

  void fuse_site(Site s) {
    std::vector<int> ids;
    for (const auto& [id, inst] : live_) {
      if (inst.x == s.x && inst.y == s.y) {
        ids.push_back(id);
      }
    }
    if (ids.empty()) {
      return;
    }
    int cur = ids.front();
    for (size_t i = 1; i < ids.size(); ++i) {
      if (cur < 0) {
        cur = ids[i];
        continue;
      }
      cur = fuse_two(cur, ids[i]);
    }
  }

  LatticeGeom geom_;
  std::vector<cd> psi_;
  int n_modes_ = 0;
  std::map<int, Anyon> live_;
  int next_id_ = 0;

  std::vector<int> forced_;
  std::vector<int> outcomes_;
  int branches_ = 0;
  double prob_ = 1.0;
};

}  // namespace fock
