// Command-line front end: simulate / estimate / diagnose / experiment /
// realdata subcommands over the library. All human-facing sample and
// component indices are 1-based. Outputs are byte-identical for identical
// configs and seeds; MMSG_THREADS caps internal parallelism (0 = auto).
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmsg/mmsg.hpp"

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mmsg::IoErrorException("cannot open config: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw mmsg::ParseErrorException(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw mmsg::IoErrorException("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw mmsg::IoErrorException("cannot create directory: " + dir);
}

mmsg::NoiseKind parse_scenario(const std::string& name) {
  if (name == "ghe") return mmsg::NoiseKind::GaussianHeteroscedastic;
  if (name == "she") return mmsg::NoiseKind::SubGaussianHeteroscedastic;
  throw mmsg::InvalidConfigError("unknown scenario '" + name + "' (expected ghe or she)");
}

struct SimulateArgs {
  std::string out_dir;
  std::string config_path;
  std::int64_t n = 100, p = 50, k = 3;
  double delta = -1.0;     // negative means: derive from c_delta
  double c_delta = 10.0;
  std::int64_t n_pure = -1;  // negative means: derive from pure_fraction
  double pure_fraction = 0.4;
  double alpha = 0.5;
  double eta = 1.0;
  std::string scenario = "ghe";
  std::uint64_t seed = mmsg::kDefaultSeed;
};

int cmd_simulate(const SimulateArgs& a) {
  SimulateArgs args = a;
  if (!args.config_path.empty()) {
    const json cfg = load_json_file(args.config_path);
    args.n = cfg.value("n", args.n);
    args.p = cfg.value("p", args.p);
    args.k = cfg.value("K", args.k);
    args.delta = cfg.value("delta", args.delta);
    args.c_delta = cfg.value("c_delta", args.c_delta);
    args.n_pure = cfg.value("n_pure", args.n_pure);
    args.pure_fraction = cfg.value("pure_fraction", args.pure_fraction);
    args.alpha = cfg.value("alpha", args.alpha);
    args.eta = cfg.value("eta", args.eta);
    args.scenario = cfg.value("scenario", args.scenario);
    args.seed = cfg.value("seed", args.seed);
  }

  mmsg::SynthesisParams prm;
  prm.n = args.n;
  prm.p = args.p;
  prm.k = args.k;
  prm.delta = args.delta >= 0.0
                  ? args.delta
                  : mmsg::delta_formula(args.c_delta, args.k, args.n, args.p);
  prm.n_pure = args.n_pure >= 0
                   ? args.n_pure
                   : std::max<std::int64_t>(args.k, static_cast<std::int64_t>(
                                                        args.pure_fraction * static_cast<double>(args.n)));
  prm.alpha = args.alpha;
  prm.scenario = {parse_scenario(args.scenario), args.eta};
  prm.seed = args.seed;

  mmsg::SyntheticData data = mmsg::synthesize(prm);
  ensure_dir(args.out_dir);
  json manifest;
  manifest["seed"] = prm.seed;
  manifest["scenario"] = args.scenario;
  manifest["alpha"] = prm.alpha;
  manifest["n_pure"] = prm.n_pure;
  mmsg::save_model_dir(args.out_dir, data.x, data.model, manifest);
  std::cerr << "simulate: wrote " << args.out_dir << " (n=" << prm.n << " p=" << prm.p
            << " K=" << prm.k << " delta=" << mmsg::format_double_short(prm.delta) << ")\n";
  return 0;
}

struct EstimateArgs {
  std::string x_path;
  std::string model_dir;
  std::string out_dir;
  std::string truth_path;
  std::string method = "spg";
  std::int64_t k = 0;
  double eig_tol = 1e-10;
  std::uint64_t seed = mmsg::kDefaultSeed;
};

int cmd_estimate(const EstimateArgs& args) {
  if (args.x_path.empty() && args.model_dir.empty())
    throw mmsg::InvalidConfigError("estimate: provide --x or --model");

  mmsg::Matrix x;
  std::optional<mmsg::MembershipMatrix> truth;
  std::int64_t k = args.k;
  if (!args.model_dir.empty()) {
    mmsg::SavedModel saved = mmsg::load_model_dir(args.model_dir);
    x = std::move(saved.x);
    truth = saved.membership;
    if (k == 0) k = saved.manifest.value("K", std::int64_t{0});
  } else {
    x = mmsg::read_matrix_csv(args.x_path);
  }
  if (!args.truth_path.empty())
    truth = mmsg::MembershipMatrix(mmsg::read_matrix_csv(args.truth_path));
  if (k <= 0) throw mmsg::InvalidConfigError("estimate: --K is required with --x");
  if (k > std::min(x.rows(), x.cols()))
    throw mmsg::InvalidConfigError("estimate: K exceeds min(p, n)");

  ensure_dir(args.out_dir);
  json manifest;
  manifest["K"] = k;
  manifest["n"] = x.cols();
  manifest["p"] = x.rows();

  const bool run_spg = args.method == "spg" || args.method == "both";
  const bool run_wsc = args.method == "wsc" || args.method == "both";
  if (!run_spg && !run_wsc)
    throw mmsg::InvalidConfigError("estimate: --method must be spg, wsc, or both");

  if (run_spg) {
    mmsg::EigOptions eig;
    eig.tol = args.eig_tol;
    mmsg::EstimationResult est = mmsg::spg(x, k, eig);
    mmsg::write_matrix_csv(args.out_dir + "/pi_hat_spg.csv", est.pi_hat.matrix());
    std::vector<std::int64_t> vertices;
    for (auto idx : est.vertex_indices) vertices.push_back(idx + 1);
    manifest["spg"]["vertex_indices"] = vertices;
    std::vector<double> eigenvalues(est.lambda_hat.data(), est.lambda_hat.data() + est.lambda_hat.size());
    manifest["spg"]["eigenvalues"] = eigenvalues;
    manifest["spg"]["degenerate_rows"] = est.degenerate_rows;
    if (truth) manifest["spg"]["aligned_l1_error"] = mmsg::aligned_l1_error(est.pi_hat, *truth);
  }
  if (run_wsc) {
    mmsg::Rng rng = mmsg::Rng(args.seed).fork(100);
    mmsg::HardClustering clustering = mmsg::wsc(x, k, 10, rng);
    mmsg::write_matrix_csv(args.out_dir + "/pi_hat_wsc.csv", clustering.one_hot.matrix());
    manifest["wsc"]["seed"] = args.seed;
    if (truth) manifest["wsc"]["aligned_l1_error"] = mmsg::aligned_l1_error(clustering.one_hot, *truth);
  }
  write_json_file(args.out_dir + "/estimate_manifest.json", manifest);
  return 0;
}

struct DiagnoseArgs {
  std::string model_dir;
  std::string out_path;
};

int cmd_diagnose(const DiagnoseArgs& args) {
  mmsg::SavedModel saved = mmsg::load_model_dir(args.model_dir);
  mmsg::DiagnosticsReport report = mmsg::diagnostics(saved.centres, saved.membership);
  const double eta = saved.manifest.value("eta", 1.0);
  report.condition_ratios = mmsg::check_conditions(report, report.n, report.p, report.k, eta);

  json j;
  j["n"] = report.n;
  j["p"] = report.p;
  j["K"] = report.k;
  j["d"] = report.d;
  j["delta"] = report.delta;
  j["beta"] = report.beta;
  j["kappa_theta"] = report.kappa_theta;
  j["kappa_pi"] = report.kappa_pi;
  j["kappa_p"] = report.kappa_p;
  j["mu0"] = report.mu0;
  j["mu1"] = report.mu1;
  j["mu2"] = report.mu2;
  j["mu"] = report.mu;
  j["sigma1_pi"] = report.sigma1_pi;
  j["sigmaK_pi"] = report.sigmaK_pi;
  j["sigma1_theta"] = report.sigma1_theta;
  j["sigmaK_theta"] = report.sigmaK_theta;
  j["sigma1_p"] = report.sigma1_p;
  j["sigmaK_p"] = report.sigmaK_p;
  for (const auto& ratio : report.condition_ratios) {
    j["condition_ratios"][ratio.name]["value"] = ratio.value;
    j["condition_ratios"][ratio.name]["satisfied_at_unit_constants"] = ratio.satisfied;
  }
  // Structural singular-value bounds that must hold for any valid instance.
  const double slack = 1e-10;
  j["bounds"]["sigmaK_p_lower"] =
      report.sigmaK_p + slack >= report.delta / (std::sqrt(2.0) * report.kappa_theta) * report.sigmaK_pi;
  j["bounds"]["kappa_p_upper"] = report.kappa_p <= report.kappa_theta * report.kappa_pi + slack;
  j["bounds"]["mu1_upper"] = report.mu1 <= 1.0 / report.beta + slack;

  write_json_file(args.out_path, j);
  return 0;
}

struct ExperimentArgs {
  std::string id = "exp1";
  std::string scale = "desk";
  std::string out_dir = ".";
  std::string config_path;
  std::string scenario = "both";
  std::string method = "both";
  int replicates = 0;  // 0 = scale default
  std::uint64_t seed = mmsg::kDefaultSeed;
};

int cmd_experiment(const ExperimentArgs& args) {
  mmsg::ExperimentSpec spec;
  if (!args.config_path.empty()) {
    spec = mmsg::spec_from_json(load_json_file(args.config_path));
  } else {
    std::vector<mmsg::NoiseKind> scenarios;
    if (args.scenario == "both" || args.scenario == "ghe")
      scenarios.push_back(mmsg::NoiseKind::GaussianHeteroscedastic);
    if (args.scenario == "both" || args.scenario == "she")
      scenarios.push_back(mmsg::NoiseKind::SubGaussianHeteroscedastic);
    if (scenarios.empty())
      throw mmsg::InvalidConfigError("experiment: --scenario must be ghe, she, or both");
    spec = mmsg::builtin_spec(args.id, args.scale == "full" ? mmsg::Scale::Full : mmsg::Scale::Desk,
                              scenarios);
  }
  if (args.replicates > 0) spec.replicates = args.replicates;
  spec.base_seed = args.seed;
  if (args.method == "spg")
    spec.methods = {mmsg::Method::SPG};
  else if (args.method == "wsc")
    spec.methods = {mmsg::Method::WSC};
  else if (args.method != "both")
    throw mmsg::InvalidConfigError("experiment: --method must be spg, wsc, or both");

  mmsg::ExperimentResult result = mmsg::run_experiment(spec);
  if (result.cells.empty()) {
    std::cerr << "experiment: empty grid, nothing to do\n";
    return 0;
  }
  ensure_dir(args.out_dir);
  const std::string base = args.out_dir + "/" + spec.experiment_id;
  for (const std::string& path : mmsg::emit_results(result, base + ".csv", base + ".svg"))
    std::cerr << "experiment: wrote " << path << "\n";
  return 0;
}

struct RealDataArgs {
  std::string dataset;
  std::string data_path;
  std::string out_dir = ".";
  bool standardize = false;
};

int cmd_realdata(const RealDataArgs& args) {
  const mmsg::DatasetSpec spec = mmsg::builtin_dataset(args.dataset);
  mmsg::Dataset data = mmsg::load_dataset(args.data_path, spec);
  mmsg::RealDataAnalysis analysis = mmsg::analyze_real(data.x, spec.k, args.standardize);

  ensure_dir(args.out_dir);
  json stats;
  stats["dataset"] = spec.name;
  stats["n"] = data.x.cols();
  stats["p"] = data.x.rows();
  stats["K"] = spec.k;
  stats["standardize"] = args.standardize;
  stats["dropped_rows"] = data.dropped_rows;
  stats["tau_pure"] = analysis.stats.tau_pure;
  stats["tau_mixed"] = analysis.stats.tau_mixed;
  if (analysis.stats.rank_collapse)
    stats["kappa_pi_hat"] = nullptr;
  else
    stats["kappa_pi_hat"] = analysis.stats.kappa;
  stats["rank_collapse"] = analysis.stats.rank_collapse;
  stats["degenerate_rows"] = analysis.estimation.degenerate_rows;
  std::vector<std::int64_t> vertices;
  for (auto idx : analysis.estimation.vertex_indices) vertices.push_back(idx + 1);
  stats["vertex_indices"] = vertices;
  write_json_file(args.out_dir + "/" + spec.name + "_stats.json", stats);

  if (spec.k == 3) {
    mmsg::emit_ternary(analysis.ternary, args.out_dir + "/" + spec.name + "_ternary.csv",
                       args.out_dir + "/" + spec.name + "_ternary.svg");
  }
  std::cerr << "realdata " << spec.name << ": tau_pure=" << mmsg::format_double_short(analysis.stats.tau_pure)
            << " tau_mixed=" << mmsg::format_double_short(analysis.stats.tau_mixed)
            << " kappa=" << mmsg::format_double_short(analysis.stats.kappa) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-membership spectral estimation toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic instance to CSV files");
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--config", sim.config_path, "JSON config file");
  simulate->add_option("--n", sim.n, "Samples");
  simulate->add_option("--p", sim.p, "Feature dimension");
  simulate->add_option("--K", sim.k, "Components");
  simulate->add_option("--delta", sim.delta, "Centre separation (overrides --c-delta)");
  simulate->add_option("--c-delta", sim.c_delta, "Separation factor for the design formula");
  simulate->add_option("--n-pure", sim.n_pure, "Pure individuals (overrides --pure-frac)");
  simulate->add_option("--pure-frac", sim.pure_fraction, "Pure fraction of n");
  simulate->add_option("--alpha", sim.alpha, "Dirichlet concentration");
  simulate->add_option("--eta", sim.eta, "Noise scale upper bound (> 0.5)");
  simulate->add_option("--scenario", sim.scenario, "ghe | she");
  simulate->add_option("--seed", sim.seed, "Seed (default 0xC0FFEE)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate memberships from a data CSV");
  estimate->add_option("--x", est.x_path, "Data matrix CSV (features x samples)");
  estimate->add_option("--model", est.model_dir, "Simulated instance directory");
  estimate->add_option("--out", est.out_dir, "Output directory")->required();
  estimate->add_option("--K", est.k, "Components");
  estimate->add_option("--method", est.method, "spg | wsc | both");
  estimate->add_option("--truth", est.truth_path, "Ground-truth membership CSV");
  estimate->add_option("--eig-tol", est.eig_tol, "Eigensolver residual tolerance");
  estimate->add_option("--seed", est.seed, "Seed for the clustering baseline");

  DiagnoseArgs diag;
  auto* diagnose = app.add_subcommand("diagnose", "Theory-parameter diagnostics for an instance");
  diagnose->add_option("--model", diag.model_dir, "Instance directory (theta.csv, pi.csv)")->required();
  diagnose->add_option("--out", diag.out_path, "Output JSON path")->required();

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo sweep");
  experiment->add_option("--id", exp.id, "exp1 | exp2 | exp3 | exp4");
  experiment->add_option("--scale", exp.scale, "desk | full");
  experiment->add_option("--out", exp.out_dir, "Output directory");
  experiment->add_option("--config", exp.config_path, "JSON experiment spec");
  experiment->add_option("--scenario", exp.scenario, "ghe | she | both");
  experiment->add_option("--method", exp.method, "spg | wsc | both");
  experiment->add_option("--replicates", exp.replicates, "Override replicate count");
  experiment->add_option("--seed", exp.seed, "Base seed");

  RealDataArgs real;
  auto* realdata = app.add_subcommand("realdata", "Analyze a benchmark dataset CSV");
  realdata->add_option("--dataset", real.dataset, "iris | wine | dermatology")->required();
  realdata->add_option("--data", real.data_path, "Path to the dataset CSV")->required();
  realdata->add_option("--out", real.out_dir, "Output directory");
  realdata->add_flag("--standardize", real.standardize, "z-score features before estimation");

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(sim);
    if (estimate->parsed()) return cmd_estimate(est);
    if (diagnose->parsed()) return cmd_diagnose(diag);
    if (experiment->parsed()) return cmd_experiment(exp);
    if (realdata->parsed()) return cmd_realdata(real);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mmsg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
