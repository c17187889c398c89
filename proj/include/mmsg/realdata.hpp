// Real-dataset pipeline: UCI-style CSV ingestion with a drop-row policy for
// missing values, the spectral estimator on the (optionally z-scored)
// feature matrix, mixing statistics, and ternary-coordinate export for
// three-component datasets.
#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mmsg/csv.hpp"
#include "mmsg/errors.hpp"
#include "mmsg/estimators.hpp"
#include "mmsg/metrics.hpp"
#include "mmsg/svg.hpp"

namespace mmsg {

struct DatasetSpec {
  std::string name;
  Index expected_n = 0;
  Index expected_p = 0;
  Index k = 0;
  std::optional<Index> label_column;  // 0-based CSV column holding the expert label
};

// Schema of the three benchmark files (UCI layout, no header row, '?' as the
// missing marker). The files themselves are user-supplied.
inline DatasetSpec builtin_dataset(const std::string& name) {
  if (name == "iris") return {"iris", 150, 4, 3, Index{4}};
  if (name == "wine") return {"wine", 178, 13, 3, Index{0}};
  if (name == "dermatology") return {"dermatology", 358, 34, 6, Index{34}};
  throw InvalidConfigError("builtin_dataset: unknown dataset '" + name + "'");
}

struct Dataset {
  Matrix x;  // p x n, features by samples
  std::vector<std::string> labels;
  Index dropped_rows = 0;
};

// One sample per CSV row; rows containing the missing marker are dropped
// whole. Cleaned dimensions must match the spec exactly.
inline Dataset load_dataset(const std::string& path, const DatasetSpec& spec) {
  std::ifstream in(path);
  if (!in) throw IoErrorException("cannot open for reading: " + path);

  std::vector<std::vector<double>> samples;
  std::vector<std::string> labels;
  Index dropped = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");

    std::vector<double> features;
    std::string label;
    bool missing = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (spec.label_column && static_cast<Index>(c) == *spec.label_column) {
        label = cells[c];
        continue;
      }
      std::string v = cells[c];
      while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.erase(v.begin());
      while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.pop_back();
      if (v == "?") {
        missing = true;
        continue;
      }
      try {
        std::size_t used = 0;
        const double parsed = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        features.push_back(parsed);
      } catch (const std::exception&) {
        throw ParseErrorException(path + ": malformed numeric cell at row " +
                                  std::to_string(lineno) + ", column " + std::to_string(c + 1));
      }
    }
    if (missing) {
      ++dropped;
      continue;
    }
    if (!samples.empty() && features.size() != samples.front().size())
      throw ParseErrorException(path + ": inconsistent column count at row " +
                                std::to_string(lineno));
    samples.push_back(std::move(features));
    labels.push_back(label);
  }

  const Index n = static_cast<Index>(samples.size());
  const Index p = samples.empty() ? 0 : static_cast<Index>(samples.front().size());
  if (n != spec.expected_n || p != spec.expected_p)
    throw SchemaMismatchError(spec.name + ": cleaned dimensions " + std::to_string(n) + "x" +
                              std::to_string(p) + " do not match expected " +
                              std::to_string(spec.expected_n) + "x" +
                              std::to_string(spec.expected_p));

  Dataset out{Matrix(p, n), std::move(labels), dropped};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j)
      out.x(j, i) = samples[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

// Per-feature z-scoring across samples; constant features are centred only.
inline Matrix standardize_features(const Matrix& x) {
  const Index p = x.rows(), n = x.cols();
  Matrix out(p, n);
  for (Index j = 0; j < p; ++j) {
    const double mean = x.row(j).mean();
    const double var = (x.row(j).array() - mean).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    if (sd > 1e-12)
      out.row(j) = (x.row(j).array() - mean) / sd;
    else
      out.row(j) = x.row(j).array() - mean;
  }
  return out;
}

enum class PurityClass { HighlyPure, Moderate, HighlyMixed };

inline const char* purity_class_name(PurityClass c) {
  switch (c) {
    case PurityClass::HighlyPure: return "highly-pure";
    case PurityClass::HighlyMixed: return "highly-mixed";
    default: return "moderate";
  }
}

struct TernaryPoint {
  Index index = 0;  // 0-based sample index
  double pi1 = 0.0, pi2 = 0.0, pi3 = 0.0;
  double x = 0.0, y = 0.0;  // cartesian inside the unit-edge triangle
  PurityClass purity = PurityClass::Moderate;
  int home_base = 0;  // 0-based component
};

inline std::vector<TernaryPoint> ternary_points(const MembershipMatrix& pi,
                                                double pure_threshold = 0.9,
                                                double mixed_threshold = 0.6) {
  if (pi.k() != 3) throw InvalidConfigError("ternary_points: requires exactly 3 components");
  std::vector<TernaryPoint> out;
  out.reserve(static_cast<std::size_t>(pi.n()));
  for (Index i = 0; i < pi.n(); ++i) {
    TernaryPoint pt;
    pt.index = i;
    pt.pi1 = pi.matrix()(i, 0);
    pt.pi2 = pi.matrix()(i, 1);
    pt.pi3 = pi.matrix()(i, 2);
    pt.x = pt.pi2 + pt.pi3 / 2.0;
    pt.y = std::sqrt(3.0) / 2.0 * pt.pi3;
    const double m = pi.matrix().row(i).maxCoeff();
    pt.purity = m >= pure_threshold   ? PurityClass::HighlyPure
                : m <= mixed_threshold ? PurityClass::HighlyMixed
                                       : PurityClass::Moderate;
    Index arg = 0;
    double best = pt.pi1;
    if (pt.pi2 > best) {
      best = pt.pi2;
      arg = 1;
    }
    if (pt.pi3 > best) arg = 2;
    pt.home_base = static_cast<int>(arg);
    out.push_back(pt);
  }
  return out;
}

// CSV (1-based indices and components) and SVG scatter: marker shape encodes
// the purity class, colour the home base.
inline void emit_ternary(const std::vector<TernaryPoint>& points, const std::string& csv_path,
                         const std::string& svg_path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(points.size());
  std::vector<svg::TernaryMarker> markers;
  markers.reserve(points.size());
  for (const auto& pt : points) {
    rows.push_back({std::to_string(pt.index + 1), format_double(pt.pi1), format_double(pt.pi2),
                    format_double(pt.pi3), format_double(pt.x), format_double(pt.y),
                    purity_class_name(pt.purity), std::to_string(pt.home_base + 1)});
    markers.push_back({pt.x, pt.y,
                       pt.purity == PurityClass::HighlyPure    ? 0
                       : pt.purity == PurityClass::Moderate    ? 1
                                                               : 2,
                       pt.home_base});
  }
  write_table_csv(csv_path, {"index", "pi1", "pi2", "pi3", "x", "y", "purity_class", "home_base"},
                  rows);
  write_text_file(svg_path,
                  svg::ternary_plot("estimated memberships", markers, {"Comp1", "Comp2", "Comp3"},
                                    {"highly pure", "moderate", "highly mixed"},
                                    {"home base 1", "home base 2", "home base 3"}));
}

struct RealDataAnalysis {
  EstimationResult estimation;
  MixingStats stats;
  std::vector<TernaryPoint> ternary;  // only for K = 3
  bool standardized = false;
};

inline RealDataAnalysis analyze_real(const Matrix& x, Index k, bool standardize) {
  Matrix features = standardize ? standardize_features(x) : x;
  EstimationResult est = spg(features, k);
  MixingStats stats = mixing_stats(est.pi_hat);
  std::vector<TernaryPoint> ternary;
  if (k == 3) ternary = ternary_points(est.pi_hat);
  return {std::move(est), std::move(stats), std::move(ternary), standardize};
}

}  // namespace mmsg
