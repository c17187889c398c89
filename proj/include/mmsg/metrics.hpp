// Permutation-aligned error metrics and mixing-characteristic statistics.
//
// The aligned error minimizes the total row-wise l1 deviation over component
// permutations. Because the per-row l1 sum decomposes column-wise, the
// minimization reduces exactly to a K x K assignment problem on column
// matching costs.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "mmsg/assignment.hpp"
#include "mmsg/linalg.hpp"
#include "mmsg/model.hpp"

namespace mmsg {

struct MembershipAlignment {
  std::vector<int> perm;   // estimate column k matches truth column perm[k]
  double mean_l1 = 0.0;    // (1/n) * minimized total row l1 deviation, in [0, 2]
  double max_row_l1 = 0.0; // max row deviation under the same permutation
};

inline MembershipAlignment align_memberships(const MembershipMatrix& estimate,
                                             const MembershipMatrix& truth) {
  const Index n = estimate.n(), k = estimate.k();
  if (truth.n() != n || truth.k() != k)
    throw DimensionMismatchError("align_memberships: shape mismatch");

  // Sequential accumulation, so the value matches a plain enumeration oracle
  // bit for bit.
  Matrix cost(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) {
      double total = 0.0;
      for (Index i = 0; i < n; ++i)
        total += std::abs(estimate.matrix()(i, a) - truth.matrix()(i, b));
      cost(a, b) = total;
    }
  Assignment assign = min_cost_permutation(cost);

  MembershipAlignment out;
  out.perm = assign.perm;
  out.mean_l1 = assign.cost / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Index a = 0; a < k; ++a)
      row += std::abs(estimate.matrix()(i, a) -
                      truth.matrix()(i, assign.perm[static_cast<std::size_t>(a)]));
    out.max_row_l1 = std::max(out.max_row_l1, row);
  }
  return out;
}

inline double aligned_l1_error(const MembershipMatrix& estimate, const MembershipMatrix& truth) {
  return align_memberships(estimate, truth).mean_l1;
}

inline double max_row_l1_error(const MembershipMatrix& estimate, const MembershipMatrix& truth) {
  return align_memberships(estimate, truth).max_row_l1;
}

// Per-row argmax with lowest index on ties.
inline std::vector<int> hard_labels(const MembershipMatrix& pi) {
  std::vector<int> labels(static_cast<std::size_t>(pi.n()), 0);
  for (Index i = 0; i < pi.n(); ++i) {
    int arg = 0;
    double best = pi.matrix()(i, 0);
    for (Index c = 1; c < pi.k(); ++c)
      if (pi.matrix()(i, c) > best) {
        best = pi.matrix()(i, c);
        arg = static_cast<int>(c);
      }
    labels[static_cast<std::size_t>(i)] = arg;
  }
  return labels;
}

struct MixingStats {
  double tau_pure = 0.0;   // fraction with max membership >= pure threshold
  double tau_mixed = 0.0;  // fraction with max membership <= mixed threshold
  double kappa = 0.0;      // condition number of the membership matrix
  bool rank_collapse = false;  // kappa flagged infinite
  std::vector<int> home_base;  // per-row argmax labels
};

inline MixingStats mixing_stats(const MembershipMatrix& pi, double pure_threshold = 0.9,
                                double mixed_threshold = 0.6) {
  if (!(mixed_threshold < pure_threshold))
    throw InvalidConfigError("mixing_stats: mixed threshold must be below pure threshold");
  const Index n = pi.n(), k = pi.k();
  MixingStats out;
  Index pure = 0, mixed = 0;
  for (Index i = 0; i < n; ++i) {
    const double m = pi.matrix().row(i).maxCoeff();
    if (m >= pure_threshold) ++pure;
    if (m <= mixed_threshold) ++mixed;
  }
  out.tau_pure = static_cast<double>(pure) / static_cast<double>(n);
  out.tau_mixed = static_cast<double>(mixed) / static_cast<double>(n);

  Eigen::JacobiSVD<Matrix> svd(pi.matrix());
  const double s1 = svd.singularValues()[0];
  const double sk = svd.singularValues()[k - 1];
  if (sk < 1e-12 * s1) {
    out.rank_collapse = true;
    out.kappa = std::numeric_limits<double>::infinity();
  } else {
    out.kappa = s1 / sk;
  }
  out.home_base = hard_labels(pi);
  return out;
}

}  // namespace mmsg
