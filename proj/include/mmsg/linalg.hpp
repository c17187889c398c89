// Dense real-matrix kernels shared by the whole library: thin QR
// orthonormalization, top-k symmetric eigenpairs (dense solver for small
// problems, thick-restart Lanczos with full reorthogonalization beyond),
// compact SVD, and small-matrix inversion.
//
// Eigenvalue ordering is by decreasing magnitude throughout. Exact magnitude
// ties prefer the positive eigenvalue, then the solver's discovery order.
// Eigenvector columns are sign-normalized so the entry of largest absolute
// value is positive, which makes repeated runs byte-reproducible.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mmsg/errors.hpp"
#include "mmsg/rng.hpp"

namespace mmsg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require_finite(const Matrix& m, const char* name) {
  if (!m.allFinite())
    throw InvalidConfigError(std::string(name) + " contains non-finite entries");
}

struct EigPairs {
  Matrix vectors;  // n x k, orthonormal columns
  Vector values;   // k, ordered by decreasing magnitude
};

struct EigOptions {
  double tol = 1e-10;            // residual tolerance relative to ||g||_F
  Index dense_cutoff = 512;      // dense eigensolver at or below this order
  long matvec_budget_per_n = 100;
};

namespace detail {

// Flip each column so its largest-magnitude entry (first on ties) is positive.
inline void sign_normalize_columns(Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    Index arg = 0;
    double best = std::abs(m(0, j));
    for (Index i = 1; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (m(arg, j) < 0.0) m.col(j) = -m.col(j);
  }
}

// Order eigenvalue indices by |value| descending; exact-magnitude ties prefer
// the positive value, then the original (discovery) order.
inline std::vector<Index> magnitude_order(const Vector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(values[a]), mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    if ((values[a] > 0.0) != (values[b] > 0.0)) return values[a] > 0.0;
    return false;  // stable sort keeps discovery order
  });
  return order;
}

// Deterministic orthonormal columns spanning a complement of q.
inline Matrix orthonormal_completion(const Matrix& q, Index extra, std::uint64_t salt) {
  const Index n = q.rows();
  Matrix out(n, extra);
  Rng rng(0xC011EC7EDULL ^ salt ^ static_cast<std::uint64_t>(n));
  Index filled = 0;
  while (filled < extra) {
    Vector cand(n);
    for (Index i = 0; i < n; ++i) cand[i] = rng.normal();
    for (int pass = 0; pass < 2; ++pass) {
      if (q.cols() > 0) cand.noalias() -= q * (q.transpose() * cand);
      if (filled > 0)
        cand.noalias() -= out.leftCols(filled) * (out.leftCols(filled).transpose() * cand);
    }
    const double nrm = cand.norm();
    if (nrm > 1e-8) out.col(filled++) = cand / nrm;
  }
  return out;
}

inline EigPairs assemble_eigpairs(const Matrix& vectors, const Vector& values, Index k) {
  const auto order = magnitude_order(values);
  EigPairs out;
  out.vectors.resize(vectors.rows(), k);
  out.values.resize(k);
  for (Index j = 0; j < k; ++j) {
    out.vectors.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
    out.values[j] = values[order[static_cast<std::size_t>(j)]];
  }
  sign_normalize_columns(out.vectors);
  return out;
}

// Thick-restart Lanczos for the k magnitude-largest eigenpairs of a symmetric
// matrix. Each step fully reorthogonalizes the new direction against the
// whole basis and records the true projection coefficients, so the small
// projected matrix stays valid across restarts without spike bookkeeping.
inline EigPairs lanczos_top_k(const Matrix& g, Index k, const EigOptions& opt) {
  const Index n = g.rows();
  const double scale = g.norm();
  const long matvec_budget = opt.matvec_budget_per_n * static_cast<long>(n);

  if (scale == 0.0) return {Matrix::Identity(n, k), Vector::Zero(k)};

  const Index m_max = std::min<Index>(n, std::max<Index>(2 * k + 30, 60));
  Matrix basis(n, m_max + 1);
  Matrix proj = Matrix::Zero(m_max + 1, m_max + 1);

  Rng rng(0xD1CE5EEDULL ^ static_cast<std::uint64_t>(n));
  for (Index i = 0; i < n; ++i) basis(i, 0) = rng.normal();
  basis.col(0).normalize();

  Index m = 1;
  long matvecs = 0;

  while (matvecs < matvec_budget) {
    // Expand: multiply the newest basis vector and record projections.
    Vector w = g * basis.col(m - 1);
    ++matvecs;
    Vector h = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * h;
    Vector h2 = basis.leftCols(m).transpose() * w;
    w.noalias() -= basis.leftCols(m) * h2;
    h += h2;
    proj.col(m - 1).head(m) = h;
    proj.row(m - 1).head(m) = h.transpose();
    const double beta = w.norm();

    Eigen::SelfAdjointEigenSolver<Matrix> es(proj.topLeftCorner(m, m));
    const Vector ritz_values = es.eigenvalues();
    const Matrix ritz_vectors = es.eigenvectors();

    if (m >= k) {
      auto order = magnitude_order(ritz_values);
      bool plausible = true;
      for (Index j = 0; j < k && plausible; ++j) {
        const Index idx = order[static_cast<std::size_t>(j)];
        const double est = beta * std::abs(ritz_vectors(m - 1, idx));
        plausible = est <= opt.tol * scale;
      }
      if (plausible) {
        Matrix sel(m, k);
        Vector vals(k);
        for (Index j = 0; j < k; ++j) {
          const Index idx = order[static_cast<std::size_t>(j)];
          sel.col(j) = ritz_vectors.col(idx);
          vals[j] = ritz_values[idx];
        }
        Matrix y = basis.leftCols(m) * sel;
        Matrix resid = g * y;
        matvecs += k;
        resid.noalias() -= y * vals.asDiagonal();
        if ((resid.colwise().norm().array() <= opt.tol * scale).all())
          return assemble_eigpairs(y, vals, k);
      }
    }

    if (m == n) {
      // Full space reached; the projected solve is exact, so select directly.
      Matrix y = basis.leftCols(m) * ritz_vectors;
      return assemble_eigpairs(y, ritz_values, k);
    }

    if (m == m_max) {
      // Thick restart: keep the best Ritz pairs plus the residual direction.
      const Index keep = std::min<Index>(m - 1, k + 8);
      auto order = magnitude_order(ritz_values);
      Matrix sel(m, keep);
      Vector vals(keep);
      for (Index j = 0; j < keep; ++j) {
        const Index idx = order[static_cast<std::size_t>(j)];
        sel.col(j) = ritz_vectors.col(idx);
        vals[j] = ritz_values[idx];
      }
      Matrix y = basis.leftCols(m) * sel;
      basis.leftCols(keep) = y;
      proj.setZero();
      proj.topLeftCorner(keep, keep) = vals.asDiagonal();
      if (beta > 1e-12 * scale) {
        basis.col(keep) = w / beta;
      } else {
        basis.col(keep) =
            orthonormal_completion(basis.leftCols(keep), 1, 0x7E57A7EDULL + static_cast<std::uint64_t>(matvecs));
      }
      m = keep + 1;
      continue;
    }

    if (beta > 1e-12 * scale) {
      basis.col(m) = w / beta;
    } else {
      // Invariant subspace hit: continue from a fresh orthogonal direction.
      basis.col(m) =
          orthonormal_completion(basis.leftCols(m), 1, 0xF00DF00DULL + static_cast<std::uint64_t>(matvecs));
    }
    ++m;
  }
  throw NoConvergenceError("lanczos_top_k: matrix-vector budget exhausted before " +
                           std::to_string(k) + " eigenpairs converged");
}

}  // namespace detail

// Thin QR orthonormalization. The returned factor has orthonormal columns
// spanning the input's column space; the R diagonal is made positive so the
// result is unique (identity maps to identity).
inline Matrix qr_orthonormal(const Matrix& a) {
  const Index p = a.rows(), k = a.cols();
  if (p < k) throw DimensionMismatchError("qr_orthonormal: need rows >= cols");
  Eigen::HouseholderQR<Matrix> qr(a);
  const Vector rdiag = qr.matrixQR().diagonal().head(k);
  const double max_col_norm = a.colwise().norm().maxCoeff();
  if (rdiag.cwiseAbs().minCoeff() < 1e-12 * max_col_norm)
    throw RankDeficientError("qr_orthonormal: numerically rank-deficient input");
  Matrix q = qr.householderQ() * Matrix::Identity(p, k);
  for (Index j = 0; j < k; ++j)
    if (rdiag[j] < 0.0) q.col(j) = -q.col(j);
  return q;
}

// Top-k eigenpairs of a symmetric matrix, ordered by decreasing magnitude.
inline EigPairs top_k_eig_sym(const Matrix& g, Index k, const EigOptions& opt = {}) {
  const Index n = g.rows();
  if (g.cols() != n) throw DimensionMismatchError("top_k_eig_sym: matrix must be square");
  if (k < 1 || k > n) throw DimensionMismatchError("top_k_eig_sym: need 1 <= k <= n");
  const double mag = g.cwiseAbs().maxCoeff();
  if (mag > 0.0 && (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * mag)
    throw AsymmetricError("top_k_eig_sym: input is not symmetric");

  if (n <= opt.dense_cutoff) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    if (es.info() != Eigen::Success)
      throw NoConvergenceError("top_k_eig_sym: dense eigensolver failed");
    Matrix vectors = es.eigenvectors();
    Vector values = es.eigenvalues();
    auto order = detail::magnitude_order(values);
    Matrix vsel(n, k);
    Vector lsel(k);
    for (Index j = 0; j < k; ++j) {
      vsel.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
      lsel[j] = values[order[static_cast<std::size_t>(j)]];
    }
    detail::sign_normalize_columns(vsel);
    return {std::move(vsel), std::move(lsel)};
  }
  return detail::lanczos_top_k(g, k, opt);
}

struct SvdResult {
  Matrix u;  // rows(m) x k, orthonormal columns
  Vector s;  // k singular values, nonincreasing and nonnegative
  Matrix v;  // cols(m) x k, orthonormal columns; m ~ u * diag(s) * v^T
};

// Compact rank-k SVD. Small problems go through a dense SVD; when both sides
// exceed the dense cutoff the Gram matrix of the shorter side is
// eigendecomposed instead and the long-side factor is recovered by
// back-multiplication. Singular directions below 1e-14 of the largest are
// treated as zero and completed with deterministic orthonormal columns.
inline SvdResult svd_compact(const Matrix& m, Index k, const EigOptions& opt = {}) {
  const Index rows = m.rows(), cols = m.cols();
  const Index small = std::min(rows, cols);
  if (k < 1 || k > small) throw DimensionMismatchError("svd_compact: need 1 <= k <= min(rows, cols)");

  SvdResult out;
  if (small <= opt.dense_cutoff) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
      throw NoConvergenceError("svd_compact: dense SVD failed");
    out.u = svd.matrixU().leftCols(k);
    out.s = svd.singularValues().head(k);
    out.v = svd.matrixV().leftCols(k);
  } else {
    const bool tall = rows >= cols;  // Gram on the shorter side
    Matrix gram = Matrix::Zero(small, small);
    if (tall)
      gram.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());
    else
      gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    EigPairs eig = top_k_eig_sym(gram, k, opt);

    Matrix& short_side = tall ? out.v : out.u;
    Matrix& long_side = tall ? out.u : out.v;
    short_side = eig.vectors;
    out.s.resize(k);
    long_side.resize(tall ? rows : cols, k);
    const double smax = std::sqrt(std::max(0.0, eig.values.maxCoeff()));
    Index zeros = 0;
    for (Index j = 0; j < k; ++j) {
      out.s[j] = std::sqrt(std::max(0.0, eig.values[j]));
      if (out.s[j] > 1e-14 * smax && out.s[j] > 0.0) {
        if (tall)
          long_side.col(j) = m * short_side.col(j) / out.s[j];
        else
          long_side.col(j) = m.transpose() * short_side.col(j) / out.s[j];
      } else {
        out.s[j] = 0.0;
        ++zeros;
      }
    }
    if (zeros > 0) {
      Matrix fill = detail::orthonormal_completion(long_side.leftCols(k - zeros), zeros, 0x5FDULL);
      long_side.rightCols(zeros) = fill;
    }
  }
  // Joint sign convention keyed on the right factor.
  for (Index j = 0; j < k; ++j) {
    Index arg = 0;
    double best = std::abs(out.v(0, j));
    for (Index i = 1; i < out.v.rows(); ++i) {
      const double a = std::abs(out.v(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (out.v(arg, j) < 0.0) {
      out.v.col(j) = -out.v.col(j);
      out.u.col(j) = -out.u.col(j);
    }
  }
  return out;
}

// Inverse of a small square matrix via SVD, guarding against singularity.
inline Matrix invert_small(const Matrix& b) {
  const Index k = b.rows();
  if (b.cols() != k) throw DimensionMismatchError("invert_small: matrix must be square");
  if (k > 64) throw DimensionMismatchError("invert_small: order capped at 64");
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (s[k - 1] < 1e-12 * s[0])
    throw SingularError("invert_small: singular to working precision");
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

}  // namespace mmsg
