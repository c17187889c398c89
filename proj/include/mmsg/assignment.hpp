// Minimum-cost assignment over square cost matrices: exhaustive enumeration
// for small orders, Hungarian algorithm with potentials beyond.
#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "mmsg/errors.hpp"
#include "mmsg/linalg.hpp"

namespace mmsg {

struct Assignment {
  std::vector<int> perm;  // row k is assigned column perm[k]
  double cost = 0.0;
};

namespace detail {

inline Assignment assignment_brute_force(const Matrix& cost) {
  const int k = static_cast<int>(cost.rows());
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  Assignment best;
  best.cost = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int r = 0; r < k; ++r) total += cost(r, idx[static_cast<std::size_t>(r)]);
    if (total < best.cost) {
      best.cost = total;
      best.perm = idx;
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

// O(k^3) Hungarian algorithm with row/column potentials (1-based internally).
inline Assignment assignment_hungarian(const Matrix& cost) {
  const int k = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(k) + 1, 0);  // column -> row
  std::vector<int> way(static_cast<std::size_t>(k) + 1, 0);

  for (int row = 1; row <= k; ++row) {
    match[0] = row;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(k) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(k) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.perm.assign(static_cast<std::size_t>(k), -1);
  for (int j = 1; j <= k; ++j)
    out.perm[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  for (int r = 0; r < k; ++r) out.cost += cost(r, out.perm[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace detail

// Permutation sigma minimizing sum_k cost(k, sigma(k)). Exhaustive for
// k <= 8 (first lexicographic minimizer on ties), Hungarian beyond.
inline Assignment min_cost_permutation(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1)
    throw DimensionMismatchError("min_cost_permutation: cost matrix must be square, k >= 1");
  require_finite(cost, "cost");
  if (cost.rows() <= 8) return detail::assignment_brute_force(cost);
  return detail::assignment_hungarian(cost);
}

}  // namespace mmsg
