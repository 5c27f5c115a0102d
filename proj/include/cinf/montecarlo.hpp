#pragma once

#include <cstdint>
#include <vector>

#include "cinf/equivalence.hpp"
#include "cinf/instances.hpp"
#include "cinf/solver.hpp"

namespace cinf {

enum class GridMethod { solver, certificate };

struct GridConfig {
  int n = 80;
  std::vector<double> eta_values;
  std::vector<std::vector<int>> k_values;  // one list per eta
  int trials = 50;
  std::uint64_t master_seed = 1;
  GridMethod method = GridMethod::certificate;
  double success_rel_tol = 1e-4;
  SolverOptions solver_options;
  int threads = 1;
};

struct GridCell {
  double eta = 0.0;
  int eta_index = 0;
  int k = 0;
  int successes = 0;
  int trials = 0;
  int diagnostic_failures = 0;  // solver non-convergence, singular configs
};

struct TransitionEstimate {
  double beta = 0.0;
  bool saturated = false;
};

struct PTGridResult {
  std::vector<GridCell> cells;  // ordered by (eta_index, k)
  std::vector<double> empirical_beta;  // one per eta
  std::vector<bool> saturated;
  std::vector<double> theory_beta;     // beta_ac(eta)
};

/// Independent trials per (eta, k) cell; trial seed =
/// stable_hash(master_seed, eta index, k, trial index), so results do not
/// depend on the parallel schedule and added cells never shift existing
/// streams.
PTGridResult run_grid(const GridConfig& config);

/// 50% crossing of the isotonically smoothed success fraction, returned as
/// k*/n. Saturated columns return the boundary value with the flag set.
TransitionEstimate empirical_transition(const std::vector<GridCell>& column,
                                        int n);

struct SpectrumReport {
  std::vector<double> grid;
  std::vector<double> f_theory;
  std::vector<double> f_empirical;
  double l1_distance = 0.0;
  double max_eigenvalue = 0.0;
  double atom_fraction_empirical = 0.0;  // share of near-zero eigenvalues
  double atom_mass_theory = 0.0;
  bool degenerate = false;
  int pooled_count = 0;
};

/// Pools certificate-product eigenvalues over trials and compares the
/// positive part against the theoretical density on a shared grid.
SpectrumReport spectrum_experiment(int n, double beta, double eta, int trials,
                                   std::uint64_t seed, double epsilon = 1e-4,
                                   int grid_points = 400);

/// Eigenvalues of the certificate product matrix for one instance, ascending.
Vector q1_eigenvalues(const LowRankInstance& inst, const BlockMask& mask);

}  // namespace cinf
