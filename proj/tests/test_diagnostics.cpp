#include <catch_amalgamated.hpp>

#include "mmsg/diagnostics.hpp"
#include "oracles.hpp"

using namespace mmsg;

TEST_CASE("diagnostics equidistant orthogonal centres have unit condition number") {
  Rng rng(51);
  Matrix theta = generate_centres(6, 3, 4.0, rng);
  GeneratedMembership gm = generate_membership(20, 3, 6, 0.5, rng);
  DiagnosticsReport r = diagnostics(theta, gm.pi);
  CHECK(r.kappa_theta == Catch::Approx(1.0).margin(1e-10));
  CHECK(r.delta == Catch::Approx(4.0).margin(1e-10));
  CHECK(r.kappa_pi >= 1.0);
  CHECK(r.kappa_p >= 1.0);
  CHECK(r.mu0 >= 0.0);
  CHECK(r.beta > 0.0);
  CHECK(r.d == 20);
}

TEST_CASE("diagnostics identity membership") {
  Rng rng(52);
  Matrix theta = generate_centres(5, 4, 2.0, rng);
  MembershipMatrix pi(Matrix::Identity(4, 4));
  DiagnosticsReport r = diagnostics(theta, pi);
  CHECK(r.beta == Catch::Approx(1.0).margin(1e-12));
  CHECK(r.kappa_pi == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("diagnostics rejects rank-deficient membership") {
  Rng rng(53);
  Matrix theta = generate_centres(5, 2, 2.0, rng);
  Matrix pi(3, 2);
  pi << 1, 0, 1, 0, 1, 0;  // rank one
  CHECK_THROWS_AS(diagnostics(theta, MembershipMatrix(pi)), RankDeficientError);
}

TEST_CASE("structural singular-value bounds hold on random instances") {
  Rng rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 20 + static_cast<Index>(rng.index(40));
    const Index k = 2 + static_cast<Index>(rng.index(3));
    const Index p = k + 5 + static_cast<Index>(rng.index(20));
    ModelInstance inst = oracles::random_instance(rng, n, p, k, 0.5, rng.uniform(0.5, 3.0));
    DiagnosticsReport r = diagnostics(inst.centres, inst.membership);
    const double slack = 1e-10;
    CHECK(r.sigmaK_p + slack >= r.delta / (std::sqrt(2.0) * r.kappa_theta) * r.sigmaK_pi);
    CHECK(r.kappa_p <= r.kappa_theta * r.kappa_pi + slack);
    CHECK(r.mu1 <= 1.0 / r.beta + slack);
  }
}

TEST_CASE("check_conditions separation ratios vanish with the separation") {
  Rng rng(55);
  Matrix theta = generate_centres(30, 4, 50.0, rng);
  GeneratedMembership gm = generate_membership(50, 4, 20, 0.5, rng);
  DiagnosticsReport r = diagnostics(theta, gm.pi);

  DiagnosticsReport degenerate = r;
  degenerate.delta = 0.0;
  for (const auto& ratio : check_conditions(degenerate, 50, 30, 4, 1.0)) {
    if (ratio.name.find("sep") != std::string::npos) {
      CHECK(ratio.value == 0.0);
      CHECK_FALSE(ratio.satisfied);
    }
  }
}

TEST_CASE("check_conditions separation ratios are linear in delta") {
  Rng rng(56);
  Matrix theta = generate_centres(30, 4, 50.0, rng);
  GeneratedMembership gm = generate_membership(50, 4, 20, 0.5, rng);
  DiagnosticsReport r = diagnostics(theta, gm.pi);
  auto base = check_conditions(r, 50, 30, 4, 1.0);

  DiagnosticsReport doubled = r;
  doubled.delta = 2.0 * r.delta;
  auto scaled = check_conditions(doubled, 50, 30, 4, 1.0);
  REQUIRE(base.size() == scaled.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i].name.find("sep") != std::string::npos)
      CHECK(scaled[i].value == Catch::Approx(2.0 * base[i].value).epsilon(1e-12));
    else
      CHECK(scaled[i].value == base[i].value);
  }
}

TEST_CASE("check_conditions evaluates the high-dimensional base design") {
  // n=500, p=2000, K=4 with the design separation; ratios are reported, not
  // asserted against a threshold.
  SynthesisParams prm{500, 2000, 4, 82.5455, 200, 0.5,
                      {NoiseKind::GaussianHeteroscedastic, 1.0}, 61};
  SyntheticData data = synthesize(prm, 0.0);
  DiagnosticsReport r = diagnostics(data.model.centres, data.model.membership);
  auto ratios = check_conditions(r, 500, 2000, 4, 1.0);
  CHECK(ratios.size() == 9);
  for (const auto& ratio : ratios) {
    CHECK(std::isfinite(ratio.value));
    CHECK(ratio.value >= 0.0);
  }
}
