#pragma once

#include <vector>

#include "cinf/instances.hpp"

namespace cinf {

struct SolverOptions {
  int max_iterations = 5000;
  double step = 0.1;             // smallest soft-threshold level
  double tol_feasibility = 1e-9;  // max abs deviation on observed entries
  double tol_change = 1e-9;       // relative iterate change
  bool record_trace = false;
};

struct TraceRow {
  int iteration;
  double feasibility_residual;
  double nuclear_norm;
  double relative_change;
};

struct SolveReport {
  Matrix x_hat;
  double rmse = -1.0;  // set when ground truth supplied
  double nuclear_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double feasibility_residual = 0.0;
  std::vector<TraceRow> trace;
};

/// Sum of singular values.
double nuclear_norm(const Matrix& x);

/// Count of singular values above cutoff * sigma_max.
int rank_l0(const Matrix& x, double cutoff);

/// Nuclear-norm minimization under exact equality on observed entries,
/// Douglas-Rachford splitting with singular-value soft-thresholding and
/// geometric continuation on the threshold. Deterministic per inputs.
/// y must vanish on masked entries (projected otherwise). x_sol, when given,
/// only fills report.rmse.
SolveReport solve_nuclear_min(const Matrix& y, const BlockMask& mask,
                              const SolverOptions& opts,
                              const Matrix* x_sol = nullptr);

/// ||x_hat - x_sol||_F <= rel_tol * ||x_sol||_F, absolute fallback 1e-12
/// for a zero ground truth.
bool classify_success(const SolveReport& report, const Matrix& x_sol,
                      double rel_tol);

}  // namespace cinf
