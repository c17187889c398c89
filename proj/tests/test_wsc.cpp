#include <catch_amalgamated.hpp>

#include "mmsg/experiments.hpp"
#include "mmsg/metrics.hpp"
#include "mmsg/wsc.hpp"

using namespace mmsg;

TEST_CASE("wsc single component assigns everyone together") {
  Rng rng(71);
  Matrix x(3, 8);
  for (Index j = 0; j < 8; ++j)
    for (Index i = 0; i < 3; ++i) x(i, j) = rng.normal();
  HardClustering hc = wsc(x, 1, 3, rng);
  for (int label : hc.labels) CHECK(label == 0);
  CHECK((hc.one_hot.matrix().col(0).array() == 1.0).all());
}

TEST_CASE("wsc separates far clusters exactly") {
  // Two pure spherical clusters with separation 100x the noise scale.
  SynthesisParams prm{100, 10, 2, 100.0, 100, 0.5, {NoiseKind::GaussianHeteroscedastic, 1.0}, 72};
  SyntheticData data = synthesize(prm);
  Rng rng(73);
  HardClustering hc = wsc(data.x, 2, 10, rng);
  CHECK(aligned_l1_error(hc.one_hot, data.model.membership) == 0.0);
}

TEST_CASE("wsc hard assignment carries irreducible error on mixed data") {
  const double delta = delta_formula(10.0, 4, 300, 200);
  SynthesisParams prm{300, 200, 4, delta, 120, 0.5, {NoiseKind::GaussianHeteroscedastic, 1.0}, 74};
  SyntheticData data = synthesize(prm);
  Rng rng(75);
  HardClustering hc = wsc(data.x, 4, 10, rng);
  const double err = aligned_l1_error(hc.one_hot, data.model.membership);
  CHECK(err > 0.25);
  CHECK(err < 0.65);
}

TEST_CASE("kmeans tolerates duplicate points and stays in range") {
  Matrix points(6, 2);
  points << 0, 0, 0, 0, 0, 0, 5, 5, 5, 5, 9, 9;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    KMeansResult km = kmeans(points, 3, 4, rng);
    CHECK(std::isfinite(km.wcss));
    for (int label : km.labels) {
      CHECK(label >= 0);
      CHECK(label < 3);
    }
  }
}

TEST_CASE("kmeans lowers the objective with more restarts") {
  Rng rng_data(76);
  Matrix points(40, 2);
  for (Index i = 0; i < 40; ++i)
    for (Index j = 0; j < 2; ++j) points(i, j) = rng_data.normal();
  Rng rng1(77), rng2(77);
  KMeansResult one = kmeans(points, 4, 1, rng1);
  KMeansResult many = kmeans(points, 4, 12, rng2);
  CHECK(many.wcss <= one.wcss + 1e-12);
}

TEST_CASE("wsc validates dimensions") {
  Rng rng(78);
  Matrix x = Matrix::Zero(3, 5);
  CHECK_THROWS_AS(wsc(x, 4, 5, rng), InvalidConfigError);
}
