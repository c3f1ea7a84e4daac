#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "anyonca/noise.hpp"

namespace anyonca {

/// True iff some space-time box [x, x+l) x [y, y+m) x [t, t+n) contains at
/// least one point of each set: equivalently, some pair of points (one from
/// each) differs by less than the box size in every coordinate. Works on the
/// doubled-integer coordinates of ErrorEvent, so half-integer positions stay
/// exact; l, m, n are given in lattice units.
inline bool linked(const std::vector<ErrorEvent>& a,
                   const std::vector<ErrorEvent>& b, int64_t l, int64_t m,
                   int64_t n) {
  for (const auto& p : a) {
    for (const auto& q : b) {
      if (std::llabs(p.x2 - q.x2) < 2 * l && std::llabs(p.y2 - q.y2) < 2 * m &&
          std::llabs(p.t2 - q.t2) < 2 * n) {
        return true;
      }
    }
  }
  return false;
}

/// One extracted actual error.
struct ActualError {
  int level = 0;
  std::vector<int> events;  // indices into the input history
  int64_t min_x2 = 0, max_x2 = 0;
  int64_t min_y2 = 0, max_y2 = 0;
  int64_t min_t2 = 0, max_t2 = 0;
};

/// Result of the hierarchical classification: a level per event (-1 when the
/// inductive extraction did not terminate within n_max levels) and the list
/// of actual errors.
struct LevelAssignment {
  std::vector<int> level_of;
  std::vector<ActualError> actuals;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Extent {
  int64_t min_x2 = 0, max_x2 = 0, min_y2 = 0, max_y2 = 0, min_t2 = 0,
          max_t2 = 0;
  bool empty = true;
  void add(const ErrorEvent& e) {
    if (empty) {
      min_x2 = max_x2 = e.x2;
      min_y2 = max_y2 = e.y2;
      min_t2 = max_t2 = e.t2;
      empty = false;
      return;
    }
    min_x2 = std::min(min_x2, e.x2);
    max_x2 = std::max(max_x2, e.x2);
    min_y2 = std::min(min_y2, e.y2);
    max_y2 = std::max(max_y2, e.y2);
    min_t2 = std::min(min_t2, e.t2);
    max_t2 = std::max(max_t2, e.t2);
  }
  // Fits a half-open box of the given lattice dimensions.
  bool fits_open(int64_t sx, int64_t st) const {
    return max_x2 - min_x2 < 2 * sx && max_y2 - min_y2 < 2 * sx &&
           max_t2 - min_t2 < 2 * st;
  }
};

inline bool pair_linked(const ErrorEvent& p, const ErrorEvent& q, int64_t l,
                        int64_t n) {
  return std::llabs(p.x2 - q.x2) < 2 * l && std::llabs(p.y2 - q.y2) < 2 * l &&
         std::llabs(p.t2 - q.t2) < 2 * n;
}

}  // namespace detail

/// Hierarchical space-time error classification.
///
/// Level-0 candidates are maximal same-kind groups inside one closed unit
/// box at a single instant; a candidate becomes actual when (a, a, b)-
/// separated from everything else. Level-n candidates are linkage clusters
/// at scale (a Q^{n-1}, a Q^{n-1}, b U^{n-1}) that fit a Q^n x Q^n x U^n box
/// and contain at least two disjoint level-(n-1) candidates; they become
/// actual when they contain no two far-separated level-n candidates and are
/// (a Q^n, a Q^n, b U^n)-separated from the rest of the unassigned noise.
///
/// The inductive definitions do not prescribe an extraction algorithm; this
/// one is greedy by increasing level, with cluster order fixed by the
/// canonical (t, x, y, kind) event order, so the result is deterministic and
/// independent of the input permutation.
inline LevelAssignment classify(const std::vector<ErrorEvent>& history,
                                int a_sep, int b, int Q, int U, int n_max) {
  if (Q < 4 * (a_sep + 2) || U < 4 * (b + 2)) {
    throw std::invalid_argument(
        "classification needs Q >= 4(a+2) and U >= 4(b+2)");
  }
  size_t n_events = history.size();
  LevelAssignment out;
  out.level_of.assign(n_events, -1);
  if (n_events == 0) {
    return out;
  }

  std::vector<int> order(n_events);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const auto& p = history[i];
    const auto& q = history[j];
    return std::tie(p.t2, p.x2, p.y2, p.kind) <
           std::tie(q.t2, q.x2, q.y2, q.kind);
  });

  std::vector<char> assigned(n_events, 0);
  std::vector<int> cand_id(n_events, -1);  // level-(n-1) candidate membership

  auto remaining_events = [&]() {
    std::vector<int> rem;
    for (int idx : order) {
      if (!assigned[idx]) {
        rem.push_back(idx);
      }
    }
    return rem;
  };

  auto separated_from_rest = [&](const std::vector<int>& cluster,
                                 const std::vector<int>& rem, int64_t l,
                                 int64_t n) {
    std::vector<char> inside(n_events, 0);
    for (int e : cluster) {
      inside[e] = 1;
    }
    for (int e : cluster) {
      for (int o : rem) {
        if (!inside[o] && detail::pair_linked(history[e], history[o], l, n)) {
          return false;
        }
      }
    }
    return true;
  };

  auto record_actual = [&](int level, const std::vector<int>& events) {
    ActualError act;
    act.level = level;
    act.events = events;
    detail::Extent ext;
    for (int e : events) {
      ext.add(history[e]);
      assigned[e] = 1;
      out.level_of[e] = level;
    }
    act.min_x2 = ext.min_x2;
    act.max_x2 = ext.max_x2;
    act.min_y2 = ext.min_y2;
    act.max_y2 = ext.max_y2;
    act.min_t2 = ext.min_t2;
    act.max_t2 = ext.max_t2;
    out.actuals.push_back(std::move(act));
  };

  // --- Level 0 -------------------------------------------------------------
  {
    std::vector<int> rem = remaining_events();
    std::vector<std::vector<int>> groups;
    std::vector<char> grouped(n_events, 0);
    for (size_t i = 0; i < rem.size(); ++i) {
      if (grouped[rem[i]]) {
        continue;
      }
      std::vector<int> group{rem[i]};
      grouped[rem[i]] = 1;
      detail::Extent ext;
      ext.add(history[rem[i]]);
      for (size_t j = i + 1; j < rem.size(); ++j) {
        int e = rem[j];
        if (grouped[e] || history[e].kind != history[rem[i]].kind) {
          continue;
        }
        detail::Extent trial = ext;
        trial.add(history[e]);
        // Closed unit box at one instant: spatial extent <= 1, same time.
        if (trial.max_x2 - trial.min_x2 <= 2 &&
            trial.max_y2 - trial.min_y2 <= 2 &&
            trial.max_t2 == trial.min_t2) {
          ext = trial;
          group.push_back(e);
          grouped[e] = 1;
        }
      }
      groups.push_back(std::move(group));
    }
    int next_cand = 0;
    for (const auto& group : groups) {
      for (int e : group) {
        cand_id[e] = next_cand;
      }
      ++next_cand;
      if (separated_from_rest(group, rem, a_sep, b)) {
        record_actual(0, group);
      }
    }
  }

  // --- Levels 1..n_max -------------------------------------------------------
  int64_t q_prev = 1;  // Q^{n-1}
  int64_t u_prev = 1;  // U^{n-1}
  for (int level = 1; level <= n_max; ++level) {
    int64_t link_l = a_sep * q_prev;
    int64_t link_t = static_cast<int64_t>(b) * u_prev;
    int64_t box_l = q_prev * Q;
    int64_t box_t = u_prev * U;
    std::vector<int> rem = remaining_events();
    if (rem.size() < 2) {
      break;
    }
    detail::UnionFind uf(rem.size());
    for (size_t i = 0; i < rem.size(); ++i) {
      for (size_t j = i + 1; j < rem.size(); ++j) {
        if (detail::pair_linked(history[rem[i]], history[rem[j]], link_l,
                                link_t)) {
          uf.unite(static_cast<int>(i), static_cast<int>(j));
        }
      }
    }
    std::vector<std::vector<int>> clusters;
    {
      std::vector<int> root_to_cluster(rem.size(), -1);
      for (size_t i = 0; i < rem.size(); ++i) {
        int r = uf.find(static_cast<int>(i));
        if (root_to_cluster[r] < 0) {
          root_to_cluster[r] = static_cast<int>(clusters.size());
          clusters.emplace_back();
        }
        clusters[root_to_cluster[r]].push_back(rem[i]);
      }
    }

    auto count_units = [&](const std::vector<int>& events) {
      std::vector<int> ids;
      for (int e : events) {
        if (cand_id[e] >= 0) {
          ids.push_back(cand_id[e]);
        }
      }
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      return static_cast<int>(ids.size());
    };
    auto is_candidate = [&](const std::vector<int>& events) {
      detail::Extent ext;
      for (int e : events) {
        ext.add(history[e]);
      }
      return ext.fits_open(box_l, box_t) && count_units(events) >= 2;
    };

    std::vector<int> next_cand_id(n_events, -1);
    int next_cand = 0;
    for (auto& cluster : clusters) {
      std::vector<std::vector<int>> candidate_sets;
      if (is_candidate(cluster)) {
        candidate_sets.push_back(cluster);
      } else if (cluster.size() >= 2) {
        // Oversize cluster: pack boxable sub-candidates greedily (canonical
        // order) so the next level still has units to count.
        std::vector<int> open;
        detail::Extent ext;
        for (int e : cluster) {
          detail::Extent trial = ext;
          trial.add(history[e]);
          if (trial.fits_open(box_l, box_t)) {
            ext = trial;
            open.push_back(e);
            continue;
          }
          if (count_units(open) >= 2) {
            candidate_sets.push_back(open);
          }
          open = {e};
          ext = detail::Extent{};
          ext.add(history[e]);
        }
        if (count_units(open) >= 2) {
          candidate_sets.push_back(open);
        }
      }
      bool whole_cluster_candidate = candidate_sets.size() == 1 &&
                                     candidate_sets[0].size() == cluster.size();
      for (const auto& cand : candidate_sets) {
        for (int e : cand) {
          next_cand_id[e] = next_cand;
        }
        ++next_cand;
      }
      if (!whole_cluster_candidate) {
        continue;
      }
      // (iii) No two internally far-separated level-n candidates.
      {
        int64_t sep_l = 4 * (a_sep + 2) * q_prev;
        int64_t sep_t = 4 * (static_cast<int64_t>(b) + 2) * u_prev;
        detail::UnionFind sub(cluster.size());
        for (size_t i = 0; i < cluster.size(); ++i) {
          for (size_t j = i + 1; j < cluster.size(); ++j) {
            if (detail::pair_linked(history[cluster[i]], history[cluster[j]],
                                    sep_l, sep_t)) {
              sub.unite(static_cast<int>(i), static_cast<int>(j));
            }
          }
        }
        std::vector<std::vector<int>> parts(cluster.size());
        for (size_t i = 0; i < cluster.size(); ++i) {
          parts[sub.find(static_cast<int>(i))].push_back(cluster[i]);
        }
        int qualifying = 0;
        for (const auto& part : parts) {
          if (part.size() >= 2 && is_candidate(part)) {
            ++qualifying;
          }
        }
        if (qualifying >= 2) {
          continue;  // fails (iii)
        }
      }
      // (iv) Separation from the rest of the unassigned noise.
      if (!separated_from_rest(cluster, rem, a_sep * box_l,
                               static_cast<int64_t>(b) * box_t)) {
        continue;
      }
      record_actual(level, cluster);
    }
    for (size_t e = 0; e < n_events; ++e) {
      cand_id[e] = assigned[e] ? -1 : next_cand_id[e];
    }
    q_prev *= Q;
    u_prev *= U;
  }
  return out;
}

/// Lemma-1 bound on the level-n error rate: (4 Q^4 U^2 (p+q))^(2^n).
inline double epsilon_bound(int n, double p, double q, int Q, int U) {
  double base = 4.0 * std::pow(Q, 4) * std::pow(U, 2) * (p + q);
  return std::pow(base, std::pow(2.0, n));
}

/// Exact denominator of the Lemma-2 convergence condition
/// p + q < 1 / (4 Q^4 U^2).
inline uint64_t convergence_denominator(int Q, int U) {
  uint64_t q4 = 1;
  for (int i = 0; i < 4; ++i) {
    q4 *= static_cast<uint64_t>(Q);
  }
  return 4 * q4 * static_cast<uint64_t>(U) * static_cast<uint64_t>(U);
}

inline bool convergent(double p, double q, int Q, int U) {
  return (p + q) * static_cast<double>(convergence_denominator(Q, U)) < 1.0;
}

}  // namespace anyonca
