#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace anyonca {

/// Closed-form decoder constants for the proof-mode parameter regime.
///
/// With D the fusion-graph diameter and Q the colony size,
///   f_n b = 4(3D+1)Q + 1,     f_c b = b - f_n b        (so f_c + f_n = 1),
///   b0    = 4(3D+1)Q + 5 + 2 sqrt(4(3D+1)^2 Q^2 + 11(3D+1)Q + 7),
///   p_c   = Q^-4 b^-4 / 4,
/// and the default bin count is b = 9(3D+1)Q.
struct ProofParameters {
  int64_t Q = 0;
  int64_t D = 0;
  int64_t a_sep = 0;
  int64_t b = 0;
  int64_t U = 0;  // b^2
  int64_t fc_b = 0;  // f_c * b, exact integer
  int64_t fn_b = 0;  // f_n * b, exact integer
  double f_c = 0;
  double f_n = 0;
  int64_t b0 = 0;  // smallest admissible integer bin count
  double p_c = 0;  // threshold lower bound
  bool b_at_least_b0 = false;
  bool b_large_enough_for_fractions = false;  // b > 2(4(3D+1)Q + 1)
  bool Q_odd = false;  // colony-centre geometry needs odd Q; flagged, not fatal
};

inline ProofParameters proof_parameters(int64_t Q, int64_t D, int64_t a_sep = 3,
                                        int64_t b = 0) {
  if (Q < 4 * (a_sep + 2)) {
    throw std::invalid_argument("Q must be at least 4(a+2)");
  }
  if (D < 0 || a_sep < 2) {
    throw std::invalid_argument("need diameter >= 0 and a >= 2");
  }
  ProofParameters p;
  p.Q = Q;
  p.D = D;
  p.a_sep = a_sep;
  int64_t k = 3 * D + 1;
  p.b = (b > 0) ? b : 9 * k * Q;
  if (p.b < 2) {
    throw std::invalid_argument("bin count b must be at least 2");
  }
  p.U = p.b * p.b;
  p.fn_b = 4 * k * Q + 1;
  p.fc_b = p.b - p.fn_b;
  p.f_c = static_cast<double>(p.fc_b) / static_cast<double>(p.b);
  p.f_n = static_cast<double>(p.fn_b) / static_cast<double>(p.b);

  // b0 = A + 2 sqrt(S), rounded up to the next integer (b counts bins).
  // The ceiling is certified with exact integer arithmetic.
  int64_t A = 4 * k * Q + 5;
  int64_t S = 4 * k * k * Q * Q + 11 * k * Q + 7;
  int64_t b0 = A + static_cast<int64_t>(std::ceil(2.0 * std::sqrt(static_cast<double>(S))));
  auto admissible = [&](int64_t cand) {
    // cand >= A + 2 sqrt(S)  <=>  (cand - A)^2 >= 4 S (for cand >= A)
    if (cand < A) {
      return false;
    }
    __int128 d = cand - A;
    return d * d >= static_cast<__int128>(4) * S;
  };
  while (!admissible(b0)) {
    ++b0;
  }
  while (admissible(b0 - 1)) {
    --b0;
  }
  p.b0 = b0;

  double Q4 = std::pow(static_cast<double>(Q), 4);
  double b4 = std::pow(static_cast<double>(p.b), 4);
  p.p_c = 1.0 / (4.0 * Q4 * b4);

  p.b_at_least_b0 = p.b >= p.b0;
  p.b_large_enough_for_fractions = p.b > 2 * p.fn_b;
  p.Q_odd = (Q % 2) != 0;
  return p;
}

}  // namespace anyonca
