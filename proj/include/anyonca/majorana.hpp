#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace anyonca {

/// Pure Gaussian fermionic state over m Majorana modes, tracked through the
/// real antisymmetric matrix A[p][q] = <i g_p g_q>.
///
/// Mode indices ("slots") are stable labels: exchanges rotate the state, they
/// never permute the matrix. A fresh pair occupies two new slots in the
/// fused-to-vacuum channel (A = +1 for the block, oriented low-key-first by
/// the caller). Measured pairs decouple exactly and are removed eagerly so
/// the matrix stays at the size of the live sigma population.
class MajoranaState {
 public:
  int mode_count() const { return m_; }

  double at(int p, int q) const { return a_[p * m_ + q]; }

  /// Appends two modes paired into the vacuum channel: <i g_p g_q> = +1 with
  /// p the first new slot.
  std::pair<int, int> add_vacuum_pair() {
    int old = m_;
    resize(m_ + 2);
    set(old, old + 1, 1.0);
    return {old, old + 1};
  }

  /// Heisenberg update for the transport exchange taking the mover's operator
  /// onto the crossed one:  g_mover -> g_crossed, g_crossed -> -g_mover.
  /// The pair's mutual entry A[mover][crossed] is invariant.
  void exchange(int mover, int crossed) {
    if (mover == crossed) {
      throw std::invalid_argument("exchange needs two distinct modes");
    }
    for (int q = 0; q < m_; ++q) {
      if (q == mover || q == crossed) {
        continue;
      }
      double am = at(mover, q);
      double ac = at(crossed, q);
      set(mover, q, ac);
      set(crossed, q, -am);
    }
  }

  /// Probability of outcome +1 when measuring i g_p g_q (orientation fixed by
  /// the caller).
  double prob_plus(int p, int q) const { return 0.5 * (1.0 + at(p, q)); }

  /// True when the parity of (p, q) is already sharp: measuring it cannot
  /// branch.
  bool is_deterministic(int p, int q) const {
    return std::abs(at(p, q)) >= 1.0 - kDetTol;
  }

  /// Projects onto the outcome lambda of i g_p g_q and updates the state.
  /// The caller must have sampled lambda with nonzero probability.
  void project_pair(int p, int q, int lambda) {
    double apq = at(p, q);
    double denom = 1.0 + lambda * apq;
    if (denom < kDetTol) {
      throw std::logic_error("projection onto a zero-probability branch");
    }
    if (std::abs(apq) >= 1.0 - kDetTol) {
      // Modes already decoupled; nothing to update.
      return;
    }
    std::vector<double> pi(m_), qi(m_);
    for (int i = 0; i < m_; ++i) {
      pi[i] = at(p, i);
      qi[i] = at(q, i);
    }
    for (int i = 0; i < m_; ++i) {
      if (i == p || i == q) {
        continue;
      }
      for (int j = i + 1; j < m_; ++j) {
        if (j == p || j == q) {
          continue;
        }
        double v = at(i, j) + lambda * (pi[i] * qi[j] - pi[j] * qi[i]) / denom;
        set(i, j, v);
      }
    }
    for (int i = 0; i < m_; ++i) {
      set(p, i, 0.0);
      set(q, i, 0.0);
    }
    set(p, q, static_cast<double>(lambda));
  }

  /// Deletes two modes (after measurement has decoupled them), compacting the
  /// matrix. Slots above the removed ones shift down.
  void remove_pair(int p, int q) {
    if (p > q) {
      std::swap(p, q);
    }
    std::vector<double> next((m_ - 2) * (m_ - 2));
    int ri = 0;
    for (int i = 0; i < m_; ++i) {
      if (i == p || i == q) {
        continue;
      }
      int rj = 0;
      for (int j = 0; j < m_; ++j) {
        if (j == p || j == q) {
          continue;
        }
        next[ri * (m_ - 2) + rj] = a_[i * m_ + j];
        ++rj;
      }
      ++ri;
    }
    m_ -= 2;
    a_ = std::move(next);
  }

  double max_abs_entry() const {
    double v = 0;
    for (double x : a_) {
      v = std::max(v, std::abs(x));
    }
    return v;
  }

  /// Largest deviation of A A^T from the identity; 0 for an exact pure state.
  double purity_defect() const {
    double worst = 0;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        double s = 0;
        for (int k = 0; k < m_; ++k) {
          s += at(i, k) * at(j, k);
        }
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    }
    return worst;
  }

 private:
  static constexpr double kDetTol = 1e-9;

  void set(int p, int q, double v) {
    if (p == q) {
      return;
    }
    a_[p * m_ + q] = v;
    a_[q * m_ + p] = -v;
  }

  void resize(int next) {
    std::vector<double> grown(next * next, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        grown[i * next + j] = a_[i * m_ + j];
      }
    }
    m_ = next;
    a_ = std::move(grown);
  }

  int m_ = 0;
  std::vector<double> a_;
};

}  // namespace anyonca
