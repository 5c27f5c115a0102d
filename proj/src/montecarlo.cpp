#include "cinf/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cinf/fpt.hpp"
#include "cinf/phase.hpp"
#include "cinf/rng.hpp"

namespace cinf {

namespace {

bool run_trial(const GridConfig& cfg, double eta, int eta_index, int k,
               int trial, bool* diagnostic) {
  const int n = cfg.n;
  const int l = static_cast<int>(std::lround(eta * n));
  const std::uint64_t seed =
      stable_hash(cfg.master_seed, static_cast<std::uint64_t>(eta_index),
                  static_cast<std::uint64_t>(k),
                  static_cast<std::uint64_t>(trial));
  const BlockMask mask(n, l);
  const LowRankInstance inst =
      make_instance(n, k, l, Scenario::asymmetric, Vector(), seed);
  try {
    if (cfg.method == GridMethod::certificate)
      return certificate(inst, mask).equivalent;
    const Matrix y = mask.apply(inst.x_sol);
    const SolveReport rep = solve_nuclear_min(y, mask, cfg.solver_options);
    if (!rep.converged) *diagnostic = true;
    return classify_success(rep, inst.x_sol, cfg.success_rel_tol);
  } catch (const SingularConfigurationError&) {
    *diagnostic = true;
    return false;
  }
}

}  // namespace

PTGridResult run_grid(const GridConfig& cfg) {
  if (cfg.trials < 1) throw std::domain_error("run_grid: trials >= 1");
  if (cfg.eta_values.size() != cfg.k_values.size())
    throw std::domain_error("run_grid: eta/k range size mismatch");
  for (std::size_t e = 0; e < cfg.eta_values.size(); ++e) {
    const int l = static_cast<int>(std::lround(cfg.eta_values[e] * cfg.n));
    for (int k : cfg.k_values[e])
      if (k < 0 || k > l)
        throw std::domain_error("run_grid: k outside [0, l]");
  }

  PTGridResult result;
  for (std::size_t e = 0; e < cfg.eta_values.size(); ++e)
    for (int k : cfg.k_values[e]) {
      GridCell cell;
      cell.eta = cfg.eta_values[e];
      cell.eta_index = static_cast<int>(e);
      cell.k = k;
      cell.trials = cfg.trials;
      result.cells.push_back(cell);
    }

  const int nthreads =
      std::max(1, std::min<int>(cfg.threads, static_cast<int>(
                                                 result.cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.cells.size()) return;
      GridCell& cell = result.cells[i];
      for (int t = 0; t < cfg.trials; ++t) {
        bool diag = false;
        if (run_trial(cfg, cell.eta, cell.eta_index, cell.k, t, &diag))
          ++cell.successes;
        if (diag) ++cell.diagnostic_failures;
      }
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t e = 0; e < cfg.eta_values.size(); ++e) {
    std::vector<GridCell> column;
    for (const GridCell& c : result.cells)
      if (c.eta_index == static_cast<int>(e)) column.push_back(c);
    const TransitionEstimate est = empirical_transition(column, cfg.n);
    result.empirical_beta.push_back(est.beta);
    result.saturated.push_back(est.saturated);
    result.theory_beta.push_back(beta_ac(cfg.eta_values[e]));
  }
  return result;
}

TransitionEstimate empirical_transition(const std::vector<GridCell>& column,
                                        int n) {
  if (column.empty())
    throw std::domain_error("empirical_transition: empty column");
  if (column.size() == 1) {
    // A single cell cannot bracket the crossing; report its own abscissa.
    TransitionEstimate est;
    est.beta = static_cast<double>(column.front().k) / n;
    est.saturated = true;
    return est;
  }
  std::vector<GridCell> cells = column;
  std::sort(cells.begin(), cells.end(),
            [](const GridCell& a, const GridCell& b) { return a.k < b.k; });

  std::vector<double> f(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    f[i] = static_cast<double>(cells[i].successes) / cells[i].trials;

  // Pool-adjacent-violators for a non-increasing fit.
  std::vector<double> level(f);
  std::vector<int> weight(f.size(), 1);
  std::size_t m = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    level[m] = f[i];
    weight[m] = 1;
    while (m > 0 && level[m - 1] < level[m]) {
      const double merged = (level[m - 1] * weight[m - 1] +
                             level[m] * weight[m]) /
                            (weight[m - 1] + weight[m]);
      weight[m - 1] += weight[m];
      level[m - 1] = merged;
      --m;
    }
    ++m;
  }
  std::vector<double> smoothed;
  for (std::size_t b = 0; b < m; ++b)
    for (int r = 0; r < weight[b]; ++r) smoothed.push_back(level[b]);

  TransitionEstimate est;
  if (smoothed.front() < 0.5) {
    est.beta = static_cast<double>(cells.front().k) / n;
    est.saturated = true;
    return est;
  }
  if (smoothed.back() >= 0.5) {
    est.beta = static_cast<double>(cells.back().k) / n;
    est.saturated = true;
    return est;
  }
  for (std::size_t i = 0; i + 1 < smoothed.size(); ++i) {
    if (smoothed[i] >= 0.5 && smoothed[i + 1] < 0.5) {
      const double df = smoothed[i] - smoothed[i + 1];
      const double frac = df > 0 ? (smoothed[i] - 0.5) / df : 0.5;
      const double kstar =
          cells[i].k + frac * (cells[i + 1].k - cells[i].k);
      est.beta = kstar / n;
      return est;
    }
  }
  est.beta = static_cast<double>(cells.back().k) / n;  // unreachable guard
  est.saturated = true;
  return est;
}

Vector q1_eigenvalues(const LowRankInstance& inst, const BlockMask& mask) {
  auto [lv, lu] = mask_modified_bases(inst, mask);
  return cal_q1_eigenvalues(lv.transpose() * lv, lu.transpose() * lu);
}

SpectrumReport spectrum_experiment(int n, double beta, double eta, int trials,
                                   std::uint64_t seed, double epsilon,
                                   int grid_points) {
  const int k = static_cast<int>(std::floor(beta * n));
  const int l = static_cast<int>(std::floor(eta * n));
  if (k > l)
    throw std::domain_error("spectrum_experiment: requires k <= l");
  SpectrumReport report;
  if (k == 0) {
    report.degenerate = true;
    return report;
  }
  if (trials < 1)
    throw std::domain_error("spectrum_experiment: trials >= 1");

  const BlockMask mask(n, l);
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(k) * trials);
  for (int t = 0; t < trials; ++t) {
    const LowRankInstance inst =
        make_instance(n, k, l, Scenario::asymmetric, Vector(),
                      stable_hash(seed, 0x5BEC, t));
    const Vector ev = q1_eigenvalues(inst, mask);
    for (Eigen::Index i = 0; i < ev.size(); ++i) pooled.push_back(ev(i));
  }
  report.pooled_count = static_cast<int>(pooled.size());
  report.max_eigenvalue =
      *std::max_element(pooled.begin(), pooled.end());

  // Split the exact-zero atom (rank deficiency of the product) from the bulk.
  std::vector<double> bulk;
  for (double v : pooled)
    if (v > 1e-8) bulk.push_back(v);
  report.atom_fraction_empirical =
      1.0 - static_cast<double>(bulk.size()) / pooled.size();

  const double hi =
      std::max(1.2, report.max_eigenvalue * 1.05);
  report.grid.resize(grid_points);
  for (int i = 0; i < grid_points; ++i)
    report.grid[i] = 0.005 + (hi - 0.005) * i / (grid_points - 1);

  const SpectralDensity theory = q1_density(beta, eta, report.grid, epsilon);
  report.f_theory = theory.density;
  for (const auto& [loc, mass] : theory.point_masses)
    if (loc == 0.0) report.atom_mass_theory = mass;

  // Empirical density of the bulk, normalized so that the bulk carries
  // 1 - atom fraction of the unit mass; piecewise constant on the grid.
  std::sort(bulk.begin(), bulk.end());
  report.f_empirical.assign(report.grid.size(), 0.0);
  if (!bulk.empty()) {
    // Freedman-Diaconis bin width on the pooled bulk.
    const double q1v = bulk[bulk.size() / 4];
    const double q3v = bulk[(3 * bulk.size()) / 4];
    double width = 2.0 * (q3v - q1v) / std::cbrt(double(bulk.size()));
    if (!(width > 0)) width = (bulk.back() - bulk.front()) / 20.0 + 1e-6;
    const double lo = bulk.front();
    const int nbins =
        std::max(1, static_cast<int>(std::ceil((bulk.back() - lo) / width)));
    std::vector<double> counts(nbins, 0.0);
    for (double v : bulk) {
      int b = static_cast<int>((v - lo) / width);
      b = std::min(b, nbins - 1);
      counts[b] += 1.0;
    }
    const double norm =
        (1.0 - report.atom_fraction_empirical) / (bulk.size() * width);
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
      const double x = report.grid[i];
      if (x < lo || x > lo + nbins * width) continue;
      int b = static_cast<int>((x - lo) / width);
      b = std::min(b, nbins - 1);
      report.f_empirical[i] = counts[b] * norm;
    }
  }

  double l1 = 0.0;
  for (std::size_t i = 1; i < report.grid.size(); ++i) {
    const double dx = report.grid[i] - report.grid[i - 1];
    const double a = std::abs(report.f_empirical[i] - report.f_theory[i]);
    const double b = std::abs(report.f_empirical[i - 1] -
                              report.f_theory[i - 1]);
    l1 += 0.5 * (a + b) * dx;
  }
  report.l1_distance = l1;
  return report;
}

}  // namespace cinf
