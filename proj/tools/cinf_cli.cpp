#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cinf/equivalence.hpp"
#include "cinf/fpt.hpp"
#include "cinf/instances.hpp"
#include "cinf/io.hpp"
#include "cinf/montecarlo.hpp"
#include "cinf/phase.hpp"

namespace {

constexpr const char* kVersion = "cinf 1.0.0";

using nlohmann::json;

// "start:stop:step", stop inclusive within 1e-12; a bare number is itself.
std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> out;
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(spec));
    return out;
  }
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw CLI::ValidationError("range", "expected start:stop:step: " + spec);
  const double start = std::stod(spec.substr(0, c1));
  const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(spec.substr(c2 + 1));
  if (step <= 0) throw CLI::ValidationError("range", "step must be > 0");
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 1e-12) break;
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("range", "empty range: " + spec);
  return out;
}

std::vector<int> parse_int_range(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_range(spec)) out.push_back(static_cast<int>(std::lround(v)));
  return out;
}

int env_threads(int fallback) {
  if (const char* s = std::getenv("CINF_THREADS")) {
    const int v = std::atoi(s);
    if (v > 0) return v;
  }
  return fallback;
}

struct RunScope {
  cinf::RunManifest manifest;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::string manifest_path;

  RunScope(std::string command, std::string path)
      : manifest_path(std::move(path)) {
    manifest.command = std::move(command);
    manifest.tool_version = kVersion;
    manifest.parameters_json = "{}";
  }

  int finish(bool ok) {
    manifest.success = ok;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    try {
      cinf::write_manifest(manifest, manifest_path);
    } catch (const std::exception& e) {
      std::cerr << "manifest write failed: " << e.what() << "\n";
      return 1;
    }
    return ok ? 0 : 1;
  }
};

int run_guarded(RunScope& scope, const std::function<void()>& body) {
  try {
    body();
    return scope.finish(true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return scope.finish(false);
  }
}

std::vector<double> linspace(double a, double b, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = a + (b - a) * i / std::max(1, points - 1);
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for block matrix completion phase "
               "transitions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // pt-curve ---------------------------------------------------------------
  auto* pt = app.add_subcommand("pt-curve", "Closed-form transition curves");
  std::string pt_scenario = "ac";
  std::string pt_eta, pt_alpha;
  std::string pt_out = "pt_curve.csv";
  std::string pt_manifest = "pt_curve_manifest.json";
  pt->add_option("--scenario", pt_scenario, "wc | ac | ac-alpha")
      ->check(CLI::IsMember({"wc", "ac", "ac-alpha"}));
  pt->add_option("--eta", pt_eta, "eta value or start:stop:step");
  pt->add_option("--alpha", pt_alpha, "alpha value or start:stop:step");
  pt->add_option("--out", pt_out, "output CSV path");
  pt->add_option("--manifest", pt_manifest, "run manifest path");

  // simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "Monte Carlo transition grid");
  int sim_n = 80, sim_trials = 50, sim_threads = 1;
  std::string sim_eta = "0.6:0.95:0.05", sim_k;
  std::string sim_method = "certificate";
  double sim_rel_tol = 1e-4;
  std::uint64_t sim_seed = 1;
  std::string sim_prefix = "simulate";
  std::string sim_manifest = "simulate_manifest.json";
  sim->add_option("--n", sim_n, "matrix size")->check(CLI::PositiveNumber);
  sim->add_option("--eta", sim_eta, "eta value or start:stop:step");
  sim->add_option("--k", sim_k, "rank value or start:stop:step (default 0..l)");
  sim->add_option("--trials", sim_trials, "trials per cell")
      ->check(CLI::PositiveNumber);
  sim->add_option("--method", sim_method, "certificate | solver")
      ->check(CLI::IsMember({"certificate", "solver"}));
  sim->add_option("--rel-tol", sim_rel_tol, "solver success threshold");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--threads", sim_threads, "worker threads");
  sim->add_option("--out-prefix", sim_prefix,
                  "writes <prefix>_grid.csv and <prefix>_summary.json");
  sim->add_option("--manifest", sim_manifest, "run manifest path");

  // spectrum ---------------------------------------------------------------
  auto* sp = app.add_subcommand("spectrum",
                                "Certificate spectrum vs limiting density");
  double sp_beta = 0.4, sp_eta = 0.9, sp_epsilon = 1e-4;
  int sp_n = 2000, sp_trials = 5, sp_points = 400;
  bool sp_theory_only = false;
  std::uint64_t sp_seed = 1;
  std::string sp_out = "spectrum.csv";
  std::string sp_manifest = "spectrum_manifest.json";
  sp->add_option("--beta", sp_beta, "rank ratio k/n")->required();
  sp->add_option("--eta", sp_eta, "observed-rows ratio l/n")->required();
  sp->add_option("--n", sp_n, "matrix size")->check(CLI::PositiveNumber);
  sp->add_option("--trials", sp_trials, "pooled instances")
      ->check(CLI::PositiveNumber);
  sp->add_option("--epsilon", sp_epsilon, "Stieltjes inversion offset");
  sp->add_option("--grid-points", sp_points, "density grid size")
      ->check(CLI::PositiveNumber);
  sp->add_flag("--theory-only", sp_theory_only, "skip Monte Carlo");
  sp->add_option("--seed", sp_seed, "master seed");
  sp->add_option("--out", sp_out, "output CSV path");
  sp->add_option("--manifest", sp_manifest, "run manifest path");

  // certify ----------------------------------------------------------------
  auto* cf = app.add_subcommand("certify",
                                "Exact recovery certificate for one instance");
  std::string cf_instance, cf_save;
  int cf_n = 400, cf_k = 0;
  double cf_eta = 0.9;
  std::string cf_scenario = "asymmetric";
  std::uint64_t cf_seed = 1;
  std::string cf_out = "certificate.json";
  std::string cf_manifest = "certify_manifest.json";
  cf->add_option("--instance", cf_instance, "load a saved instance file");
  cf->add_option("--n", cf_n, "matrix size")->check(CLI::PositiveNumber);
  cf->add_option("--k", cf_k, "rank")->check(CLI::NonNegativeNumber);
  cf->add_option("--eta", cf_eta, "observed-rows ratio l/n");
  cf->add_option("--scenario", cf_scenario, "asymmetric | symmetric")
      ->check(CLI::IsMember({"asymmetric", "symmetric"}));
  cf->add_option("--seed", cf_seed, "instance seed");
  cf->add_option("--save-instance", cf_save, "also save the instance");
  cf->add_option("--out", cf_out, "certificate JSON path");
  cf->add_option("--manifest", cf_manifest, "run manifest path");

  CLI11_PARSE(app, argc, argv);

  if (pt->parsed()) {
    RunScope scope("pt-curve", pt_manifest);
    scope.manifest.parameters_json =
        json{{"scenario", pt_scenario}, {"eta", pt_eta}, {"alpha", pt_alpha},
             {"out", pt_out}}
            .dump();
    return run_guarded(scope, [&] {
      cinf::PTScenario sc = pt_scenario == "wc" ? cinf::PTScenario::worst_case
                            : pt_scenario == "ac"
                                ? cinf::PTScenario::asymmetric
                                : cinf::PTScenario::asymmetric_alpha;
      const bool wants_alpha = sc == cinf::PTScenario::asymmetric_alpha;
      const std::string& range = wants_alpha ? pt_alpha : pt_eta;
      if (range.empty())
        throw std::runtime_error(wants_alpha ? "--alpha is required"
                                             : "--eta is required");
      cinf::PTCurve curve = cinf::pt_curve(sc, parse_range(range));
      cinf::write_pt_curve_csv(curve, pt_out);
      scope.manifest.artifacts.push_back(pt_out);
    });
  }

  if (sim->parsed()) {
    RunScope scope("simulate", sim_manifest);
    scope.manifest.master_seed = sim_seed;
    scope.manifest.parameters_json =
        json{{"n", sim_n},           {"eta", sim_eta},
             {"k", sim_k},           {"trials", sim_trials},
             {"method", sim_method}, {"rel_tol", sim_rel_tol},
             {"seed", sim_seed},     {"threads", sim_threads},
             {"out_prefix", sim_prefix}}
            .dump();
    return run_guarded(scope, [&] {
      cinf::GridConfig cfg;
      cfg.n = sim_n;
      cfg.eta_values = parse_range(sim_eta);
      cfg.trials = sim_trials;
      cfg.master_seed = sim_seed;
      cfg.method = sim_method == "solver" ? cinf::GridMethod::solver
                                          : cinf::GridMethod::certificate;
      cfg.success_rel_tol = sim_rel_tol;
      cfg.threads = env_threads(sim_threads);
      for (double eta : cfg.eta_values) {
        const int l = static_cast<int>(std::lround(eta * cfg.n));
        std::vector<int> ks;
        if (sim_k.empty()) {
          for (int k = 0; k <= l; ++k) ks.push_back(k);
        } else {
          ks = parse_int_range(sim_k);
        }
        cfg.k_values.push_back(std::move(ks));
      }
      cinf::PTGridResult result = cinf::run_grid(cfg);
      const std::string grid_path = sim_prefix + "_grid.csv";
      const std::string summary_path = sim_prefix + "_summary.json";
      cinf::write_grid_csv(result, cfg.n, grid_path);
      cinf::write_grid_summary_json(result, cfg.eta_values, summary_path);
      scope.manifest.artifacts = {grid_path, summary_path};
    });
  }

  if (sp->parsed()) {
    RunScope scope("spectrum", sp_manifest);
    scope.manifest.master_seed = sp_seed;
    scope.manifest.parameters_json =
        json{{"beta", sp_beta},       {"eta", sp_eta},
             {"n", sp_n},             {"trials", sp_trials},
             {"epsilon", sp_epsilon}, {"grid_points", sp_points},
             {"theory_only", sp_theory_only}, {"seed", sp_seed},
             {"out", sp_out}}
            .dump();
    return run_guarded(scope, [&] {
      const std::string edge_path = sp_out + ".edge.json";
      if (sp_theory_only) {
        if (!(sp_beta > 0 && sp_beta <= sp_eta && sp_eta < 1))
          throw std::domain_error("requires 0 < beta <= eta < 1");
        const auto grid = linspace(0.005, 1.3, sp_points);
        cinf::SpectralDensity d =
            cinf::q1_density(sp_beta, sp_eta, grid, sp_epsilon);
        cinf::write_density_csv(d.grid, d.density, sp_out);
        const cinf::EdgePolynomial ep = cinf::edge_polynomial(sp_beta, sp_eta);
        json edge{{"beta", sp_beta},
                  {"eta", sp_eta},
                  {"y_opt", ep.y_opt},
                  {"upper_edge", d.upper_edge},
                  {"beta_edge", cinf::spectral_edge_beta(sp_eta)}};
        std::ofstream out(edge_path);
        out << edge.dump(2);
        scope.manifest.artifacts = {sp_out, edge_path};
        return;
      }
      cinf::SpectrumReport report = cinf::spectrum_experiment(
          sp_n, sp_beta, sp_eta, sp_trials, sp_seed, sp_epsilon, sp_points);
      cinf::write_spectrum_csv(report, sp_out);
      const cinf::EdgePolynomial ep = cinf::edge_polynomial(sp_beta, sp_eta);
      json edge{{"beta", sp_beta},
                {"eta", sp_eta},
                {"y_opt", ep.y_opt},
                {"upper_edge", report.max_eigenvalue},
                {"beta_edge", cinf::spectral_edge_beta(sp_eta)},
                {"l1_distance", report.l1_distance}};
      std::ofstream out(edge_path);
      out << edge.dump(2);
      scope.manifest.artifacts = {sp_out, edge_path};
      std::cout << "l1_distance=" << report.l1_distance
                << " max_eigenvalue=" << report.max_eigenvalue << "\n";
    });
  }

  if (cf->parsed()) {
    RunScope scope("certify", cf_manifest);
    scope.manifest.master_seed = cf_seed;
    scope.manifest.parameters_json =
        json{{"instance", cf_instance}, {"n", cf_n},
             {"k", cf_k},               {"eta", cf_eta},
             {"scenario", cf_scenario}, {"seed", cf_seed},
             {"out", cf_out}}
            .dump();
    return run_guarded(scope, [&] {
      cinf::LowRankInstance inst;
      if (!cf_instance.empty()) {
        inst = cinf::load_instance(cf_instance);
      } else {
        const int l = static_cast<int>(std::lround(cf_eta * cf_n));
        inst = cinf::make_instance(cf_n, cf_k, l,
                                   cinf::scenario_from_string(cf_scenario),
                                   cinf::Vector(), cf_seed);
      }
      cinf::BlockMask mask(inst.dims.n, inst.dims.l);
      cinf::SpectralCertificate cert = cinf::certificate(inst, mask);
      std::ofstream out(cf_out);
      if (!out) throw std::runtime_error("cannot open " + cf_out);
      out << cinf::certificate_json(inst, mask, cert);
      scope.manifest.artifacts.push_back(cf_out);
      if (!cf_save.empty()) {
        cinf::save_instance(inst, cf_save);
        scope.manifest.artifacts.push_back(cf_save);
      }
      std::cout << "lambda_max=" << cert.lambda_max
                << " equivalent=" << (cert.equivalent ? "true" : "false")
                << "\n";
    });
  }

  return 0;
}
