#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmsg/experiments.hpp"
#include "mmsg/realdata.hpp"

using namespace mmsg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("builtin dataset schemas") {
  DatasetSpec iris = builtin_dataset("iris");
  CHECK(iris.expected_n == 150);
  CHECK(iris.expected_p == 4);
  CHECK(iris.k == 3);
  DatasetSpec wine = builtin_dataset("wine");
  CHECK(wine.expected_n == 178);
  CHECK(wine.expected_p == 13);
  CHECK(*wine.label_column == 0);
  DatasetSpec derm = builtin_dataset("dermatology");
  CHECK(derm.expected_n == 358);
  CHECK(derm.expected_p == 34);
  CHECK(derm.k == 6);
  CHECK_THROWS_AS(builtin_dataset("mnist"), InvalidConfigError);
}

TEST_CASE("load_dataset drops rows with missing values") {
  std::filesystem::create_directories("test_realdata_out");
  write_text_file("test_realdata_out/toy.csv",
                  "1.0,2.0,A\n3.0,4.0,B\n?,6.0,C\n7.0,8.0,A\n");
  DatasetSpec spec{"toy", 3, 2, 2, Index{2}};
  Dataset data = load_dataset("test_realdata_out/toy.csv", spec);
  CHECK(data.x.rows() == 2);
  CHECK(data.x.cols() == 3);
  CHECK(data.dropped_rows == 1);
  CHECK(data.labels == std::vector<std::string>{"A", "B", "A"});
  CHECK(data.x(0, 2) == 7.0);

  // Idempotent: loading twice yields the same matrix.
  Dataset again = load_dataset("test_realdata_out/toy.csv", spec);
  CHECK((again.x.array() == data.x.array()).all());
}

TEST_CASE("load_dataset names malformed cells") {
  std::filesystem::create_directories("test_realdata_out");
  write_text_file("test_realdata_out/bad.csv", "1.0,2.0,A\n3.0,4x0,B\n");
  DatasetSpec spec{"toy", 2, 2, 2, Index{2}};
  try {
    load_dataset("test_realdata_out/bad.csv", spec);
    FAIL("expected ParseErrorException");
  } catch (const ParseErrorException& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
}

TEST_CASE("load_dataset enforces the expected dimensions") {
  std::filesystem::create_directories("test_realdata_out");
  write_text_file("test_realdata_out/short.csv", "1.0,2.0,A\n");
  DatasetSpec spec{"toy", 3, 2, 2, Index{2}};
  CHECK_THROWS_AS(load_dataset("test_realdata_out/short.csv", spec), SchemaMismatchError);
}

TEST_CASE("standardize_features centres and scales") {
  Matrix x(2, 4);
  x << 1, 2, 3, 4, 5, 5, 5, 5;  // second feature constant
  Matrix z = standardize_features(x);
  CHECK(z.row(0).mean() == Catch::Approx(0.0).margin(1e-14));
  const double sd = std::sqrt(z.row(0).squaredNorm() / 3.0);
  CHECK(sd == Catch::Approx(1.0).margin(1e-12));
  CHECK(z.row(1).cwiseAbs().maxCoeff() == 0.0);  // centred only
}

TEST_CASE("ternary coordinates hit the reference points") {
  Matrix pi(3, 3);
  pi << 1, 0, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0.5, 0.5;
  auto points = ternary_points(MembershipMatrix(pi));
  REQUIRE(points.size() == 3);
  CHECK(points[0].x == Catch::Approx(0.0).margin(1e-15));
  CHECK(points[0].y == Catch::Approx(0.0).margin(1e-15));
  CHECK(points[1].x == Catch::Approx(0.5).margin(1e-12));
  CHECK(points[1].y == Catch::Approx(std::sqrt(3.0) / 6.0).margin(1e-12));
  CHECK(points[2].x == Catch::Approx(0.75).margin(1e-15));
  CHECK(points[2].y == Catch::Approx(std::sqrt(3.0) / 4.0).margin(1e-15));
  CHECK(points[0].purity == PurityClass::HighlyPure);
  CHECK(points[1].purity == PurityClass::HighlyMixed);
  CHECK(points[2].purity == PurityClass::HighlyMixed);
  CHECK(points[0].home_base == 0);
  CHECK(points[2].home_base == 1);  // tie between components 2 and 3: lowest wins
}

TEST_CASE("ternary points stay inside the unit-edge triangle") {
  Rng rng(111);
  Matrix pi(200, 3);
  for (Index i = 0; i < 200; ++i) pi.row(i) = sample_dirichlet(0.4, 3, rng).transpose();
  const double h = std::sqrt(3.0) / 2.0;
  for (const auto& pt : ternary_points(MembershipMatrix(pi))) {
    CHECK(pt.y >= -1e-12);
    // Left and right edges in cartesian form.
    CHECK(pt.y <= std::sqrt(3.0) * pt.x + 1e-12);
    CHECK(pt.y <= std::sqrt(3.0) * (1.0 - pt.x) + 1e-12);
    CHECK(pt.y <= h + 1e-12);
  }
}

TEST_CASE("ternary_points requires three components") {
  CHECK_THROWS_AS(ternary_points(MembershipMatrix(Matrix::Identity(4, 4))), InvalidConfigError);
}

TEST_CASE("emit_ternary writes deterministic files") {
  Matrix pi(2, 3);
  pi << 1, 0, 0, 0.2, 0.3, 0.5;
  auto points = ternary_points(MembershipMatrix(pi));
  std::filesystem::create_directories("test_realdata_out");
  emit_ternary(points, "test_realdata_out/t1.csv", "test_realdata_out/t1.svg");
  emit_ternary(points, "test_realdata_out/t2.csv", "test_realdata_out/t2.svg");
  CHECK(slurp("test_realdata_out/t1.csv") == slurp("test_realdata_out/t2.csv"));
  CHECK(slurp("test_realdata_out/t1.svg") == slurp("test_realdata_out/t2.svg"));
  const std::string csv = slurp("test_realdata_out/t1.csv");
  CHECK(csv.rfind("index,pi1,pi2,pi3,x,y,purity_class,home_base", 0) == 0);
  CHECK(csv.find("highly-pure") != std::string::npos);
}

TEST_CASE("analyze_real purity classes partition by threshold") {
  const double delta = delta_formula(10.0, 3, 120, 30);
  SynthesisParams prm{120, 30, 3, delta, 48, 0.5, {NoiseKind::GaussianHeteroscedastic, 1.0}, 112};
  SyntheticData data = synthesize(prm);
  RealDataAnalysis analysis = analyze_real(data.x, 3, false);
  REQUIRE(analysis.ternary.size() == 120);

  Index pure = 0, mixed = 0;
  for (const auto& pt : analysis.ternary) {
    const double m = analysis.estimation.pi_hat.matrix().row(pt.index).maxCoeff();
    switch (pt.purity) {
      case PurityClass::HighlyPure:
        CHECK(m >= 0.9);
        ++pure;
        break;
      case PurityClass::HighlyMixed:
        CHECK(m <= 0.6);
        ++mixed;
        break;
      case PurityClass::Moderate:
        CHECK(m > 0.6);
        CHECK(m < 0.9);
        break;
    }
  }
  CHECK(analysis.stats.tau_pure == Catch::Approx(static_cast<double>(pure) / 120.0));
  CHECK(analysis.stats.tau_mixed == Catch::Approx(static_cast<double>(mixed) / 120.0));

  // K != 3 yields stats only.
  SynthesisParams prm6{60, 40, 6, delta_formula(10.0, 6, 60, 40), 24, 0.5,
                       {NoiseKind::GaussianHeteroscedastic, 1.0}, 113};
  SyntheticData data6 = synthesize(prm6);
  RealDataAnalysis analysis6 = analyze_real(data6.x, 6, true);
  CHECK(analysis6.ternary.empty());
}
