// Model objects and the synthetic generator: equidistant centres, mixed
// membership rows with pure anchors, heteroscedastic noise, and the composed
// data matrix X = Theta * Pi^T + E.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmsg/errors.hpp"
#include "mmsg/linalg.hpp"
#include "mmsg/rng.hpp"

namespace mmsg {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// n x K nonnegative matrix with unit row sums.
class MembershipMatrix {
 public:
  explicit MembershipMatrix(Matrix rows) : m_(std::move(rows)) {
    if (m_.rows() < 1 || m_.cols() < 1)
      throw DimensionMismatchError("MembershipMatrix: empty matrix");
    require_finite(m_, "membership");
    if ((m_.array() < 0.0).any() || (m_.array() > 1.0).any())
      throw InvalidConfigError("MembershipMatrix: entries must lie in [0,1]");
    if (((m_.rowwise().sum().array() - 1.0).abs() > 1e-12).any())
      throw InvalidConfigError("MembershipMatrix: rows must sum to 1");
  }

  Index n() const { return m_.rows(); }
  Index k() const { return m_.cols(); }
  const Matrix& matrix() const { return m_; }

  bool is_pure_row(Index i, double tol = 1e-12) const {
    Index arg = 0;
    m_.row(i).maxCoeff(&arg);
    return std::abs(m_(i, arg) - 1.0) <= tol;
  }

 private:
  Matrix m_;
};

enum class NoiseKind { GaussianHeteroscedastic, SubGaussianHeteroscedastic };

inline const char* noise_kind_name(NoiseKind k) {
  return k == NoiseKind::GaussianHeteroscedastic ? "ghe" : "she";
}

struct NoiseScenario {
  NoiseKind kind = NoiseKind::GaussianHeteroscedastic;
  double eta = 1.0;  // per-sample scales are drawn from Uniform(0.5, eta)
};

struct ModelInstance {
  Matrix centres;               // p x K
  MembershipMatrix membership;  // n x K
  Matrix signal;                // p x n = centres * membership^T
  std::vector<Index> pure_indices;
  double delta = 0.0;  // min pairwise centre distance
  double eta = 0.0;

  Index n() const { return membership.n(); }
  Index p() const { return centres.rows(); }
  Index k() const { return centres.cols(); }
};

inline double min_pairwise_centre_distance(const Matrix& centres) {
  const Index k = centres.cols();
  if (k < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < k; ++a)
    for (Index b = a + 1; b < k; ++b)
      best = std::min(best, (centres.col(a) - centres.col(b)).norm());
  return best;
}

// Validating factory: signal consistency, the pure-individual condition for
// every component, and full column rank of the centres.
inline ModelInstance make_model_instance(Matrix centres, MembershipMatrix membership,
                                         std::vector<Index> pure_indices, double eta) {
  const Index k = centres.cols();
  if (membership.k() != k)
    throw DimensionMismatchError("make_model_instance: centre/membership component mismatch");

  Eigen::JacobiSVD<Matrix> svd(centres);
  const Vector& s = svd.singularValues();
  if (centres.rows() < k || s[0] <= 0.0 || s[k - 1] < 1e-10 * s[0])
    throw RankDeficientError("make_model_instance: centre matrix is not full column rank");

  std::vector<char> covered(static_cast<std::size_t>(k), 0);
  for (Index idx : pure_indices) {
    if (idx < 0 || idx >= membership.n())
      throw InvalidConfigError("make_model_instance: pure index out of range");
    if (!membership.is_pure_row(idx))
      throw InvalidConfigError("make_model_instance: recorded pure index is not a pure row");
    Index arg = 0;
    membership.matrix().row(idx).maxCoeff(&arg);
    covered[static_cast<std::size_t>(arg)] = 1;
  }
  for (Index c = 0; c < k; ++c)
    if (!covered[static_cast<std::size_t>(c)])
      throw InvalidConfigError("make_model_instance: component " + std::to_string(c + 1) +
                               " has no pure individual");

  ModelInstance inst{std::move(centres), std::move(membership), Matrix{}, std::move(pure_indices),
                     0.0, eta};
  inst.signal.noalias() = inst.centres * inst.membership.matrix().transpose();
  inst.delta = min_pairwise_centre_distance(inst.centres);
  return inst;
}

// Centres theta_k = (delta / sqrt(2)) u_k with orthonormal u_k, so every
// pairwise distance equals delta exactly.
inline Matrix generate_centres(Index p, Index k, double delta, Rng& rng) {
  if (k < 1 || p < k) throw InvalidConfigError("generate_centres: need p >= K >= 1");
  if (delta < 0.0) throw InvalidConfigError("generate_centres: delta must be >= 0");
  for (int attempt = 0; attempt < 2; ++attempt) {
    Matrix draw(p, k);
    for (Index j = 0; j < k; ++j)
      for (Index i = 0; i < p; ++i) draw(i, j) = rng.normal();
    try {
      return (delta / std::sqrt(2.0)) * qr_orthonormal(draw);
    } catch (const RankDeficientError&) {
      if (attempt == 1) throw;  // probability-zero event, retried once
    }
  }
  throw RankDeficientError("generate_centres: unreachable");
}

inline Vector sample_dirichlet(double alpha, Index k, Rng& rng) {
  if (alpha <= 0.0) throw InvalidConfigError("sample_dirichlet: alpha must be > 0");
  if (k < 1) throw InvalidConfigError("sample_dirichlet: K must be >= 1");
  Vector draw(k);
  for (;;) {
    for (Index j = 0; j < k; ++j) draw[j] = rng.gamma(alpha);
    const double total = draw.sum();
    if (total > 0.0) return draw / total;
  }
}

struct GeneratedMembership {
  MembershipMatrix pi;
  std::vector<Index> pure_indices;
};

// First n_pure rows are pure, grouped by component in ascending order with
// any remainder going to the lowest-numbered components; the rest are i.i.d.
// Dirichlet(alpha * 1_K).
inline GeneratedMembership generate_membership(Index n, Index k, Index n_pure, double alpha,
                                               Rng& rng) {
  if (k < 1) throw InvalidConfigError("generate_membership: K must be >= 1");
  if (n_pure < k)
    throw InvalidConfigError("generate_membership: n_pure < K violates the pure-individual condition");
  if (n_pure > n) throw InvalidConfigError("generate_membership: n_pure cannot exceed n");

  Matrix pi = Matrix::Zero(n, k);
  std::vector<Index> pure;
  pure.reserve(static_cast<std::size_t>(n_pure));
  const Index base = n_pure / k, rem = n_pure % k;
  Index row = 0;
  for (Index c = 0; c < k; ++c) {
    const Index count = base + (c < rem ? 1 : 0);
    for (Index r = 0; r < count; ++r, ++row) {
      pi(row, c) = 1.0;
      pure.push_back(row);
    }
  }
  for (; row < n; ++row) pi.row(row) = sample_dirichlet(alpha, k, rng).transpose();
  return {MembershipMatrix(std::move(pi)), std::move(pure)};
}

// Heteroscedastic noise: one scale per sample (column), then i.i.d. entries.
// scale_override pins every column scale, bypassing the Uniform(0.5, eta)
// draw; it exists so tests can force exact zero noise.
inline Matrix generate_noise(const NoiseScenario& scenario, Index p, Index n, Rng& rng,
                             std::optional<double> scale_override = {}) {
  if (!scale_override && scenario.eta <= 0.5)
    throw InvalidConfigError("generate_noise: eta must exceed 0.5");
  Matrix e(p, n);
  for (Index i = 0; i < n; ++i) {
    const double sigma = scale_override ? *scale_override : rng.uniform(0.5, scenario.eta);
    if (scenario.kind == NoiseKind::GaussianHeteroscedastic) {
      for (Index j = 0; j < p; ++j) e(j, i) = sigma * rng.normal();
    } else {
      for (Index j = 0; j < p; ++j) e(j, i) = sigma * rng.rademacher();
    }
  }
  return e;
}

struct SynthesisParams {
  Index n = 0, p = 0, k = 0;
  double delta = 0.0;
  Index n_pure = 0;
  double alpha = 0.5;
  NoiseScenario scenario;
  std::uint64_t seed = kDefaultSeed;
};

struct SyntheticData {
  Matrix x;  // p x n observed
  ModelInstance model;
};

// Deterministic in the seed: centre, membership, and noise stages each use a
// forked child stream.
inline SyntheticData synthesize(const SynthesisParams& prm,
                                std::optional<double> noise_scale_override = {}) {
  if (prm.k < 1 || prm.k > std::min(prm.n, prm.p))
    throw InvalidConfigError("synthesize: need 1 <= K <= min(n, p)");
  Rng root(prm.seed);
  Rng rng_centres = root.fork(1);
  Rng rng_membership = root.fork(2);
  Rng rng_noise = root.fork(3);

  Matrix centres = generate_centres(prm.p, prm.k, prm.delta, rng_centres);
  GeneratedMembership gm = generate_membership(prm.n, prm.k, prm.n_pure, prm.alpha, rng_membership);
  ModelInstance inst = make_model_instance(std::move(centres), std::move(gm.pi),
                                           std::move(gm.pure_indices), prm.scenario.eta);
  Matrix e = generate_noise(prm.scenario, prm.p, prm.n, rng_noise, noise_scale_override);
  SyntheticData out{inst.signal + e, std::move(inst)};
  return out;
}

}  // namespace mmsg
