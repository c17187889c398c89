// Theory-parameter diagnostics: separation, balancedness, condition numbers,
// incoherence of the signal matrix, and the sufficient-condition ratios
// evaluated with every hidden constant set to 1 (natural logarithms).
// Ratios are reported for inspection only; a value above 1 merely means the
// condition holds at unit constants.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mmsg/linalg.hpp"
#include "mmsg/model.hpp"

namespace mmsg {

struct ConditionRatio {
  std::string name;
  double value = 0.0;
  bool satisfied = false;  // value > 1
};

struct DiagnosticsReport {
  double delta = 0.0;
  double beta = 0.0;
  double kappa_theta = 0.0, kappa_pi = 0.0, kappa_p = 0.0;
  double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0, mu = 0.0;
  Index d = 0;  // max(n, p)
  Index n = 0, p = 0, k = 0;
  double sigma1_theta = 0.0, sigmaK_theta = 0.0;
  double sigma1_pi = 0.0, sigmaK_pi = 0.0;
  double sigma1_p = 0.0, sigmaK_p = 0.0;
  std::vector<ConditionRatio> condition_ratios;
};

inline DiagnosticsReport diagnostics(const Matrix& centres, const MembershipMatrix& pi) {
  DiagnosticsReport r;
  r.p = centres.rows();
  r.n = pi.n();
  r.k = centres.cols();
  if (pi.k() != r.k)
    throw DimensionMismatchError("diagnostics: centre/membership component mismatch");
  r.d = std::max(r.n, r.p);

  Eigen::JacobiSVD<Matrix> svd_theta(centres);
  r.sigma1_theta = svd_theta.singularValues()[0];
  r.sigmaK_theta = svd_theta.singularValues()[r.k - 1];
  if (r.sigma1_theta <= 0.0 || r.sigmaK_theta < 1e-10 * r.sigma1_theta)
    throw RankDeficientError("diagnostics: centre matrix is rank deficient");

  Eigen::JacobiSVD<Matrix> svd_pi(pi.matrix());
  r.sigma1_pi = svd_pi.singularValues()[0];
  r.sigmaK_pi = svd_pi.singularValues()[r.k - 1];
  if (r.sigmaK_pi < 1e-10 * r.sigma1_pi)
    throw RankDeficientError("diagnostics: membership matrix is rank deficient");

  r.delta = min_pairwise_centre_distance(centres);
  r.beta = (r.sigmaK_pi * r.sigmaK_pi) / (static_cast<double>(r.n) / static_cast<double>(r.k));
  r.kappa_theta = r.sigma1_theta / r.sigmaK_theta;
  r.kappa_pi = r.sigma1_pi / r.sigmaK_pi;

  Matrix signal = centres * pi.matrix().transpose();  // p x n
  SvdResult sp = svd_compact(signal, r.k);
  r.sigma1_p = sp.s[0];
  r.sigmaK_p = sp.s[r.k - 1];
  r.kappa_p = r.sigmaK_p > 0.0 ? r.sigma1_p / r.sigmaK_p
                               : std::numeric_limits<double>::infinity();

  const double fro2 = signal.squaredNorm();
  const double max_abs = signal.cwiseAbs().maxCoeff();
  r.mu0 = fro2 > 0.0 ? static_cast<double>(r.p) * static_cast<double>(r.n) * max_abs * max_abs / fro2
                     : 0.0;
  r.mu1 = (static_cast<double>(r.n) / r.k) * sp.v.rowwise().squaredNorm().maxCoeff();
  r.mu2 = (static_cast<double>(r.p) / r.k) * sp.u.rowwise().squaredNorm().maxCoeff();
  r.mu = std::max({r.mu0, r.mu1, r.mu2});
  return r;
}

// Ratios LHS/RHS for the sufficient dimension and separation conditions and
// their bounded-parameter simplifications.
inline std::vector<ConditionRatio> check_conditions(const DiagnosticsReport& r, Index n, Index p,
                                                    Index k, double eta) {
  const double dn = static_cast<double>(n), dp = static_cast<double>(p), dk = static_cast<double>(k);
  const double logd = std::log(static_cast<double>(std::max(n, p)));
  const double kappa = r.kappa_theta, kpi = r.kappa_pi, beta = r.beta, mu = r.mu;
  const double s1pi = r.sigma1_pi;

  auto ratio = [](const std::string& name, double lhs, double rhs) {
    const double v = rhs > 0.0 ? lhs / rhs : 0.0;
    return ConditionRatio{name, v, v > 1.0};
  };

  std::vector<ConditionRatio> out;
  out.push_back(ratio("dim_np", dn * dp,
                      mu * mu * std::pow(kappa, 8) * std::pow(kpi, 8) * dk * dk * std::pow(logd, 4)));
  out.push_back(ratio("dim_p", dp,
                      std::pow(kappa, 8) * std::pow(kpi, 8) / beta * dk * logd * logd));
  out.push_back(ratio("dim_n", dn,
                      std::cbrt(mu) * std::pow(kappa, 8.0 / 3.0) * std::pow(kpi, 4) /
                          std::pow(beta, 2.0 / 3.0) * dk * std::pow(s1pi, 2.0 / 3.0)));
  out.push_back(ratio("sep_min_distance", r.delta,
                      eta * std::pow(kappa, 3.5) * std::pow(kpi, 5) * std::sqrt(mu) /
                          std::sqrt(beta) * dk * s1pi * std::sqrt(logd) / std::sqrt(dn)));
  out.push_back(ratio("sep_aspect_ratio", r.delta,
                      eta * kappa * kappa * kpi * kpi * std::pow(mu, 0.25) / std::sqrt(beta) *
                          std::sqrt(s1pi * std::sqrt(dk / dn)) * std::pow(dp / dn, 0.25) *
                          std::sqrt(dk * logd)));
  out.push_back(ratio("simplified_dim_np", dn * dp, dk * dk * std::pow(logd, 4)));
  out.push_back(ratio("simplified_dim_p", dp, dk * logd * logd));
  out.push_back(ratio("simplified_dim_n", dn, dk));
  out.push_back(ratio("simplified_sep", r.delta,
                      std::sqrt(dk * logd) * std::max(1.0, std::pow(dp / dn, 0.25))));
  return out;
}

}  // namespace mmsg
