// The spectral membership estimator and its pieces.
//
// Pipeline: hollow the Gram matrix of the samples (removes the noise-inflated
// diagonal), take its top-K eigenvectors, hunt the simplex vertices among the
// eigenvector rows by successive projection, invert the vertex submatrix, and
// normalize rows onto the probability simplex. The noiseless variant runs
// the same vertex hunt on the right singular vectors of the signal matrix.
#pragma once

#include <string>
#include <vector>

#include "mmsg/errors.hpp"
#include "mmsg/linalg.hpp"
#include "mmsg/model.hpp"

namespace mmsg {

// Gram matrix of the columns of x with the diagonal zeroed. Each off-diagonal
// entry is computed once and mirrored, so the result is exactly symmetric.
inline Matrix hollow_gram(const Matrix& x) {
  const Index n = x.cols();
  Matrix g = Matrix::Zero(n, n);
  g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  g.diagonal().setZero();
  return g;
}

// Successive projection: repeatedly pick the row of maximum norm (lowest
// index on ties), then project every row onto the orthogonal complement of
// the pick. Returns the K selected row indices in selection order.
inline std::vector<Index> spa(const Matrix& y, Index k) {
  const Index n = y.rows();
  if (k < 1 || k > n) throw DimensionMismatchError("spa: need 1 <= K <= rows");
  Matrix residual = y;
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(k));
  for (Index t = 0; t < k; ++t) {
    Vector norms2 = residual.rowwise().squaredNorm();
    Index arg = 0;
    double best = norms2[0];
    for (Index i = 1; i < n; ++i)
      if (norms2[i] > best) {
        best = norms2[i];
        arg = i;
      }
    if (std::sqrt(best) < 1e-12)
      throw DegenerateInputError("spa: residual rank collapsed after " + std::to_string(t) +
                                 " of " + std::to_string(k) + " picks");
    picked.push_back(arg);
    Vector u = residual.row(arg).transpose() / std::sqrt(best);
    residual.noalias() -= (residual * u) * u.transpose();
  }
  return picked;
}

struct VertexMemberships {
  Matrix z_hat;  // n x K, entrywise >= 0
  MembershipMatrix pi_hat;
  Index degenerate_rows = 0;  // rows that fell back to the uniform vector
};

// Memberships from hunted vertices: Z = max(0, U * U(I,:)^{-1}), then row-wise
// l1 normalization. Rows whose l1 mass vanishes after clipping become the
// uniform vector and are tallied.
inline VertexMemberships memberships_from_vertices(const Matrix& u_hat,
                                                   const std::vector<Index>& vertex_indices) {
  const Index n = u_hat.rows(), k = u_hat.cols();
  if (static_cast<Index>(vertex_indices.size()) != k)
    throw DimensionMismatchError("memberships_from_vertices: need exactly K vertex indices");
  Matrix vertex_matrix(k, k);
  for (Index j = 0; j < k; ++j) {
    const Index idx = vertex_indices[static_cast<std::size_t>(j)];
    if (idx < 0 || idx >= n)
      throw DimensionMismatchError("memberships_from_vertices: vertex index out of range");
    vertex_matrix.row(j) = u_hat.row(idx);
  }
  Eigen::JacobiSVD<Matrix> svd(vertex_matrix);
  const Vector& s = svd.singularValues();
  if (s[0] <= 0.0 || s[k - 1] < 1e-10 * s[0])
    throw SingularVertexMatrixError("memberships_from_vertices: vertex matrix condition exceeds 1e10");

  Matrix z = (u_hat * invert_small(vertex_matrix)).cwiseMax(0.0);
  Matrix pi(n, k);
  Index degenerate = 0;
  for (Index i = 0; i < n; ++i) {
    const double mass = z.row(i).sum();
    if (mass < 1e-12) {
      pi.row(i).setConstant(1.0 / static_cast<double>(k));
      ++degenerate;
    } else {
      pi.row(i) = z.row(i) / mass;
    }
  }
  return {std::move(z), MembershipMatrix(std::move(pi)), degenerate};
}

struct EstimationResult {
  Matrix u_hat;                       // n x K leading eigenvectors
  Vector lambda_hat;                  // K eigenvalues by magnitude
  std::vector<Index> vertex_indices;  // K distinct sample indices
  Matrix vertex_matrix;               // K x K rows of u_hat at the vertices
  Matrix z_hat;
  MembershipMatrix pi_hat;
  Index degenerate_rows = 0;
};

inline EstimationResult spg(const Matrix& x, Index k, const EigOptions& eig = {}) {
  const Index n = x.cols(), p = x.rows();
  if (k < 1 || k > std::min(n, p)) throw InvalidConfigError("spg: need 1 <= K <= min(p, n)");
  if (n < 2) throw InvalidConfigError("spg: need at least 2 samples");
  require_finite(x, "x");

  EigPairs pairs = top_k_eig_sym(hollow_gram(x), k, eig);
  std::vector<Index> vertices = spa(pairs.vectors, k);
  VertexMemberships vm = memberships_from_vertices(pairs.vectors, vertices);

  EstimationResult out{std::move(pairs.vectors), std::move(pairs.values), std::move(vertices),
                       Matrix(k, k), std::move(vm.z_hat), std::move(vm.pi_hat),
                       vm.degenerate_rows};
  for (Index j = 0; j < k; ++j)
    out.vertex_matrix.row(j) = out.u_hat.row(out.vertex_indices[static_cast<std::size_t>(j)]);
  return out;
}

// Noiseless recovery from the signal matrix itself: right singular vectors,
// vertex hunt, membership inversion. Exact up to component permutation under
// the pure-individual condition.
inline MembershipMatrix oracle_memberships(const Matrix& signal, Index k) {
  const Index n = signal.cols(), p = signal.rows();
  if (k < 1 || k > std::min(n, p))
    throw InvalidConfigError("oracle_memberships: need 1 <= K <= min(p, n)");
  SvdResult svd = svd_compact(signal, k);
  if (svd.s[0] <= 0.0 || svd.s[k - 1] < 1e-10 * svd.s[0])
    throw RankMismatchError("oracle_memberships: signal rank is below K");
  std::vector<Index> vertices = spa(svd.v, k);
  return memberships_from_vertices(svd.v, vertices).pi_hat;
}

}  // namespace mmsg
