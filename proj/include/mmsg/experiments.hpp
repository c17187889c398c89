// Config-driven Monte Carlo harness: built-in sweep grids at desk or full
// scale, seeded replicates, permutation-aligned error aggregation, and
// CSV/SVG emission.
//
// Replicate r of a cell always uses seed base_seed + r, so replicates are
// reproducible in isolation and cells that differ only in separation share
// common random numbers. Aggregation sorts the collected values before the
// compensated summation, making the aggregates independent of completion
// order to exact equality.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mmsg/csv.hpp"
#include "mmsg/estimators.hpp"
#include "mmsg/metrics.hpp"
#include "mmsg/model.hpp"
#include "mmsg/parallel.hpp"
#include "mmsg/svg.hpp"
#include "mmsg/wsc.hpp"

namespace mmsg {

enum class Method { SPG, WSC };

inline const char* method_name(Method m) { return m == Method::SPG ? "spg" : "wsc"; }

enum class Scale { Desk, Full };

// Delta = c_delta * sqrt(K ln d) * max{1, (p/n)^(1/4)} with d = max(n, p),
// natural logarithm. d_override freezes d at a different design size (the
// fixed-separation sweep keeps d at the largest n of the full grid).
inline double delta_formula(double c_delta, Index k, Index n, Index p,
                            std::optional<Index> d_override = {}) {
  if (n < 1 || p < 1 || k < 1) throw InvalidConfigError("delta_formula: need n, p, K >= 1");
  const double d = static_cast<double>(d_override.value_or(std::max(n, p)));
  const double aspect = std::max(1.0, std::pow(static_cast<double>(p) / static_cast<double>(n), 0.25));
  return c_delta * std::sqrt(static_cast<double>(k) * std::log(d)) * aspect;
}

struct ExperimentCell {
  Index n = 0, p = 0, k = 0;
  double alpha = 0.5;
  double eta = 1.0;
  Index n_pure = 0;
  NoiseKind scenario = NoiseKind::GaussianHeteroscedastic;
  double delta = 0.0;
  std::optional<double> c_delta;  // set when delta came from the formula
  std::string sweep_name = "n";
  double sweep_value = 0.0;
};

struct ExperimentSpec {
  std::string experiment_id = "custom";
  std::vector<ExperimentCell> grid;
  int replicates = 20;
  std::uint64_t base_seed = kDefaultSeed;
  std::vector<Method> methods = {Method::SPG, Method::WSC};
};

struct MethodStats {
  double mean_error = 0.0;
  double std_error = 0.0;
  int replicates_used = 0;
  int failures = 0;
  double mean_wall_ms = 0.0;
};

struct CellResult {
  ExperimentCell cell;
  double mean_beta = 0.0;
  std::vector<std::pair<Method, MethodStats>> per_method;
};

struct ExperimentResult {
  std::string experiment_id;
  std::vector<CellResult> cells;
};

namespace detail {

inline double kahan_sum_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

inline MethodStats summarize(const std::vector<double>& values, const std::vector<double>& wall_ms,
                             int failures) {
  MethodStats s;
  s.failures = failures;
  s.replicates_used = static_cast<int>(values.size());
  if (values.empty()) return s;
  s.mean_error = kahan_sum_sorted(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - s.mean_error;
      sq[i] = d * d;
    }
    const double var = kahan_sum_sorted(sq) / static_cast<double>(values.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  s.mean_wall_ms = kahan_sum_sorted(wall_ms) / static_cast<double>(wall_ms.size());
  return s;
}

}  // namespace detail

// One grid cell: `replicates` seeded synthetic instances, every requested
// method on each, aligned-l1 errors aggregated per method. A method's
// replicate failure is logged and skipped; the cell fails only when more
// than 10% of a method's replicates error out.
inline CellResult run_cell(const ExperimentCell& cell, int replicates, std::uint64_t base_seed,
                           const std::vector<Method>& methods) {
  if (replicates < 1) throw InvalidConfigError("run_cell: need replicates >= 1");

  struct RepOutcome {
    double beta = 0.0;
    std::vector<std::optional<double>> errors;  // per method
    std::vector<double> wall_ms;
  };
  std::vector<RepOutcome> reps(static_cast<std::size_t>(replicates));

  parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
    const std::uint64_t seed = base_seed + r + 1;
    SynthesisParams prm{cell.n, cell.p, cell.k, cell.delta, cell.n_pure,
                        cell.alpha, NoiseScenario{cell.scenario, cell.eta}, seed};
    SyntheticData data = synthesize(prm);

    Eigen::JacobiSVD<Matrix> svd_pi(data.model.membership.matrix());
    const double sk = svd_pi.singularValues()[cell.k - 1];
    RepOutcome& out = reps[r];
    out.beta = sk * sk / (static_cast<double>(cell.n) / static_cast<double>(cell.k));
    out.errors.resize(methods.size());
    out.wall_ms.assign(methods.size(), 0.0);

    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        MembershipMatrix estimate = [&] {
          if (methods[m] == Method::SPG) return spg(data.x, cell.k).pi_hat;
          Rng rng = Rng(seed).fork(100);
          return wsc(data.x, cell.k, 10, rng).one_hot;
        }();
        out.errors[m] = aligned_l1_error(estimate, data.model.membership);
      } catch (const Error& e) {
        std::cerr << "[cell n=" << cell.n << " p=" << cell.p << " " << noise_kind_name(cell.scenario)
                  << "] replicate " << (r + 1) << " " << method_name(methods[m])
                  << " failed: " << e.what() << "\n";
      }
      out.wall_ms[m] = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    }
  });

  CellResult result{cell, 0.0, {}};
  std::vector<double> betas;
  betas.reserve(reps.size());
  for (const auto& r : reps) betas.push_back(r.beta);
  result.mean_beta = detail::kahan_sum_sorted(betas) / static_cast<double>(replicates);

  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<double> values, walls;
    int failures = 0;
    for (const auto& r : reps) {
      if (r.errors[m])
        values.push_back(*r.errors[m]);
      else
        ++failures;
      walls.push_back(r.wall_ms[m]);
    }
    if (failures * 10 > replicates)
      throw NoConvergenceError(std::string("run_cell: ") + method_name(methods[m]) + " failed " +
                               std::to_string(failures) + " of " + std::to_string(replicates) +
                               " replicates");
    result.per_method.emplace_back(methods[m], detail::summarize(values, walls, failures));
  }
  return result;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result{spec.experiment_id, {}};
  for (const auto& cell : spec.grid) {
    const auto t0 = std::chrono::steady_clock::now();
    result.cells.push_back(run_cell(cell, spec.replicates, spec.base_seed, spec.methods));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << spec.experiment_id << " cell " << cell.sweep_name << "=" << cell.sweep_value
              << " n=" << cell.n << " p=" << cell.p << " " << noise_kind_name(cell.scenario) << ": ";
    for (const auto& [method, stats] : result.cells.back().per_method)
      std::cerr << method_name(method) << " " << format_double_short(stats.mean_error) << "  ";
    std::cerr << "(" << format_double_short(secs) << "s)\n";
  }
  return result;
}

// Built-in sweep grids. Desk scale keeps the grid endpoints and thins the
// interior with 20 replicates; full scale runs the complete grids with 200.
inline ExperimentSpec builtin_spec(const std::string& id, Scale scale,
                                   const std::vector<NoiseKind>& scenarios = {
                                       NoiseKind::GaussianHeteroscedastic,
                                       NoiseKind::SubGaussianHeteroscedastic}) {
  ExperimentSpec spec;
  spec.experiment_id = id;
  spec.replicates = scale == Scale::Desk ? 20 : 200;
  const bool desk = scale == Scale::Desk;

  auto add_cell = [&](Index n, Index p, Index k, double alpha, double eta, Index n_pure,
                      double delta, std::optional<double> c_delta, const std::string& sweep,
                      double sweep_value) {
    for (NoiseKind kind : scenarios) {
      ExperimentCell cell{n, p, k, alpha, eta, n_pure, kind, delta, c_delta, sweep, sweep_value};
      spec.grid.push_back(cell);
    }
  };

  const Index k = 4;
  const double alpha_default = 0.5, eta = 1.0;

  if (id == "exp1") {
    // Fixed separation from the full design: d frozen at the largest n.
    const double delta = delta_formula(10.0, k, 500, 2000, Index{5000});
    std::vector<Index> ns = desk ? std::vector<Index>{500, 1000}
                                 : std::vector<Index>{500, 1000, 1500, 2000, 2500,
                                                      3000, 3500, 4000, 4500, 5000};
    for (Index n : ns)
      add_cell(n, 2000, k, alpha_default, eta, (n * 2) / 5, delta, 10.0, "n",
               static_cast<double>(n));
  } else if (id == "exp2") {
    std::vector<double> cds = desk ? std::vector<double>{10, 50, 100}
                                   : std::vector<double>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    const std::pair<Index, Index> settings[] = {{200, 2000}, {2000, 20}};
    for (auto [n, p] : settings)
      for (double cd : cds)
        add_cell(n, p, k, alpha_default, eta, (n * 2) / 5, delta_formula(cd, k, n, p), cd,
                 "c_delta", cd);
  } else if (id == "exp3") {
    std::vector<double> alphas =
        desk ? std::vector<double>{0.2, 1.0, 5.0} : std::vector<double>{0.2, 0.5, 1.0, 2.0, 5.0};
    const std::pair<Index, Index> settings[] = {{200, 2000}, {2000, 200}};
    for (auto [n, p] : settings)
      for (double a : alphas)
        add_cell(n, p, k, a, eta, (n * 2) / 5, delta_formula(10.0, k, n, p), 10.0, "alpha", a);
  } else if (id == "exp4") {
    std::vector<double> pures =
        desk ? std::vector<double>{0.05, 0.25, 0.5}
             : std::vector<double>{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    const std::pair<Index, Index> settings[] = {{2000, 20}, {200, 2000}};
    for (auto [n, p] : settings)
      for (double cp : pures) {
        const Index n_pure = std::max<Index>(k, static_cast<Index>(std::floor(cp * static_cast<double>(n))));
        add_cell(n, p, k, alpha_default, eta, n_pure, delta_formula(10.0, k, n, p), 10.0,
                 "c_pure", cp);
      }
  } else {
    throw InvalidConfigError("builtin_spec: unknown experiment id '" + id + "'");
  }
  return spec;
}

namespace detail {

// Cells grouped by the (n, p) setting with the swept dimension wildcarded;
// multi-setting experiments get one chart per setting.
inline std::string setting_key(const ExperimentCell& cell) {
  const std::string n = cell.sweep_name == "n" ? "*" : std::to_string(cell.n);
  const std::string p = cell.sweep_name == "p" ? "*" : std::to_string(cell.p);
  return "n" + n + "_p" + p;
}

}  // namespace detail

// CSV table plus one SVG line chart per (n, p) setting. Returns the paths
// written. Charts carry one polyline per method x scenario.
inline std::vector<std::string> emit_results(const ExperimentResult& result,
                                             const std::string& csv_path,
                                             const std::string& svg_path) {
  if (result.cells.empty()) throw InvalidConfigError("emit_results: empty result");

  std::vector<std::string> written;
  std::vector<std::string> header = {"experiment", "scenario", "n",      "p",
                                     "K",          "alpha",    "eta",    "n_pure",
                                     "c_delta",    "delta",    "sweep",  "sweep_value",
                                     "method",     "mean_error", "stderr", "replicates",
                                     "mean_beta"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& cr : result.cells) {
    for (const auto& [method, stats] : cr.per_method) {
      rows.push_back({result.experiment_id, noise_kind_name(cr.cell.scenario),
                      std::to_string(cr.cell.n), std::to_string(cr.cell.p),
                      std::to_string(cr.cell.k), format_double(cr.cell.alpha),
                      format_double(cr.cell.eta), std::to_string(cr.cell.n_pure),
                      cr.cell.c_delta ? format_double(*cr.cell.c_delta) : std::string(),
                      format_double(cr.cell.delta), cr.cell.sweep_name,
                      format_double(cr.cell.sweep_value), method_name(method),
                      format_double(stats.mean_error), format_double(stats.std_error),
                      std::to_string(stats.replicates_used), format_double(cr.mean_beta)});
    }
  }
  write_table_csv(csv_path, header, rows);
  written.push_back(csv_path);

  std::vector<std::string> group_order;
  std::map<std::string, std::vector<const CellResult*>> groups;
  for (const auto& cr : result.cells) {
    const std::string key = detail::setting_key(cr.cell);
    if (!groups.count(key)) group_order.push_back(key);
    groups[key].push_back(&cr);
  }

  for (const std::string& key : group_order) {
    std::vector<svg::Series> series;
    std::map<std::string, std::size_t> series_index;
    for (const CellResult* cr : groups[key]) {
      for (const auto& [method, stats] : cr->per_method) {
        std::string label = std::string(method_name(method)) + " " +
                            noise_kind_name(cr->cell.scenario);
        auto [it, inserted] = series_index.emplace(label, series.size());
        if (inserted) series.push_back({label, {}, {}});
        series[it->second].x.push_back(cr->cell.sweep_value);
        series[it->second].y.push_back(stats.mean_error);
      }
    }
    for (auto& s : series) {
      std::vector<std::size_t> idx(s.x.size());
      std::iota(idx.begin(), idx.end(), 0u);
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
      std::vector<double> xs, ys;
      for (std::size_t i : idx) {
        xs.push_back(s.x[i]);
        ys.push_back(s.y[i]);
      }
      s.x = std::move(xs);
      s.y = std::move(ys);
    }
    std::string path = svg_path;
    if (group_order.size() > 1) {
      const auto dot = path.rfind('.');
      const std::string suffix = "_" + key;
      if (dot == std::string::npos)
        path += suffix;
      else
        path.insert(dot, suffix);
    }
    const std::string title = result.experiment_id + " (" + key + ")";
    write_text_file(path, svg::line_chart(title, groups[key].front()->cell.sweep_name,
                                          "mean aligned l1 error", series));
    written.push_back(path);
  }
  return written;
}

// Experiment spec from JSON: either a built-in id with overrides or a fully
// custom grid.
inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  const std::string id = j.value("experiment_id", "custom");
  const std::string scale_name = j.value("scale", "desk");
  if (scale_name != "desk" && scale_name != "full")
    throw InvalidConfigError("experiment spec: scale must be 'desk' or 'full'");
  const Scale scale = scale_name == "desk" ? Scale::Desk : Scale::Full;

  std::vector<NoiseKind> scenarios = {NoiseKind::GaussianHeteroscedastic,
                                      NoiseKind::SubGaussianHeteroscedastic};
  if (j.contains("scenarios")) {
    scenarios.clear();
    for (const auto& s : j.at("scenarios")) {
      const std::string name = s.get<std::string>();
      if (name == "ghe")
        scenarios.push_back(NoiseKind::GaussianHeteroscedastic);
      else if (name == "she")
        scenarios.push_back(NoiseKind::SubGaussianHeteroscedastic);
      else
        throw InvalidConfigError("experiment spec: unknown scenario '" + name + "'");
    }
  }

  if (id != "custom") {
    spec = builtin_spec(id, scale, scenarios);
  } else {
    spec.experiment_id = id;
    if (!j.contains("grid")) throw InvalidConfigError("experiment spec: custom grid required");
    for (const auto& c : j.at("grid")) {
      const Index n = c.at("n").get<Index>();
      const Index p = c.at("p").get<Index>();
      const Index k = c.at("K").get<Index>();
      const double alpha = c.value("alpha", 0.5);
      const double eta = c.value("eta", 1.0);
      Index n_pure = 0;
      if (c.contains("n_pure"))
        n_pure = c.at("n_pure").get<Index>();
      else if (c.contains("pure_fraction"))
        n_pure = std::max<Index>(k, static_cast<Index>(std::floor(
                                        c.at("pure_fraction").get<double>() * static_cast<double>(n))));
      else
        throw InvalidConfigError("experiment spec: cell needs n_pure or pure_fraction");
      double delta = 0.0;
      std::optional<double> c_delta;
      if (c.contains("delta")) {
        delta = c.at("delta").get<double>();
      } else if (c.contains("c_delta")) {
        c_delta = c.at("c_delta").get<double>();
        delta = delta_formula(*c_delta, k, n, p);
      } else {
        throw InvalidConfigError("experiment spec: cell needs delta or c_delta");
      }
      const std::string sweep = c.value("sweep", "n");
      const double sweep_value = c.value("sweep_value", static_cast<double>(n));
      if (c.contains("scenario")) {
        const std::string name = c.at("scenario").get<std::string>();
        const NoiseKind kind = name == "she" ? NoiseKind::SubGaussianHeteroscedastic
                                             : NoiseKind::GaussianHeteroscedastic;
        spec.grid.push_back({n, p, k, alpha, eta, n_pure, kind, delta, c_delta, sweep, sweep_value});
      } else {
        for (NoiseKind kind : scenarios)
          spec.grid.push_back({n, p, k, alpha, eta, n_pure, kind, delta, c_delta, sweep, sweep_value});
      }
    }
  }

  if (j.contains("replicates")) spec.replicates = j.at("replicates").get<int>();
  if (j.contains("base_seed")) spec.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("methods")) {
    spec.methods.clear();
    for (const auto& m : j.at("methods")) {
      const std::string name = m.get<std::string>();
      if (name == "spg")
        spec.methods.push_back(Method::SPG);
      else if (name == "wsc")
        spec.methods.push_back(Method::WSC);
      else
        throw InvalidConfigError("experiment spec: unknown method '" + name + "'");
    }
  }
  return spec;
}

}  // namespace mmsg
