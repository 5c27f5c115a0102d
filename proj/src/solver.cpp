#include "cinf/solver.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cinf {

double nuclear_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

int rank_l0(const Matrix& x, double cutoff) {
  if (!(cutoff > 0.0)) throw std::domain_error("rank_l0: cutoff must be > 0");
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double thr = cutoff * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++r;
  return r;
}

namespace {

// Singular-value soft-thresholding prox.
Matrix svt(const Matrix& z, double tau) {
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(0.0, s(i) - tau);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

double feasibility(const BlockMask& mask, const Matrix& x, const Matrix& y) {
  return (mask.apply(x) - y).cwiseAbs().maxCoeff();
}

}  // namespace

SolveReport solve_nuclear_min(const Matrix& y_in, const BlockMask& mask,
                              const SolverOptions& opts, const Matrix* x_sol) {
  if (y_in.hasNaN()) throw std::domain_error("solve_nuclear_min: NaN in observations");
  if (y_in.rows() != mask.n() || y_in.cols() != mask.n())
    throw std::domain_error("solve_nuclear_min: shape mismatch");
  if (opts.max_iterations < 1 || !(opts.step > 0.0) ||
      !(opts.tol_feasibility > 0.0) || !(opts.tol_change > 0.0))
    throw std::domain_error("solve_nuclear_min: invalid options");

  const Matrix y = mask.apply(y_in);
  const int n = mask.n();

  SolveReport report;
  report.x_hat = Matrix::Zero(n, n);

  // Affine projection: fix observed entries to y, leave the corner free.
  const auto project = [&](const Matrix& m) -> Matrix {
    return mask.complement(m) + y;
  };

  double sigma1 = 0.0;
  if (y.squaredNorm() > 0.0) {
    Eigen::JacobiSVD<Matrix> svd(y);
    sigma1 = svd.singularValues()(0);
  }
  // Geometric continuation from a coarse threshold down to opts.step.
  double tau = std::max(opts.step, 0.5 * sigma1);
  const double stage_tol = std::max(1e-3, 10.0 * opts.tol_change);

  Matrix z = y;
  Matrix x_prev = Matrix::Zero(n, n);
  Matrix x_best = Matrix::Zero(n, n);
  double best_feas = feasibility(mask, x_best, y);

  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations; ++iter) {
    const Matrix x = svt(z, tau);
    z += project(2.0 * x - z) - x;

    const double feas = feasibility(mask, x, y);
    if (feas <= best_feas) {
      best_feas = feas;
      x_best = x;
    }
    const double xn = x.norm();
    const double change = (x - x_prev).norm() / std::max(1e-12, xn);
    x_prev = x;

    if (opts.record_trace)
      report.trace.push_back({iter, best_feas, nuclear_norm(x_best), change});

    const bool final_stage = tau <= opts.step;
    if (final_stage) {
      if (change < opts.tol_change && best_feas < opts.tol_feasibility) {
        converged = true;
        ++iter;
        break;
      }
    } else if (change < stage_tol) {
      tau = std::max(opts.step, 0.5 * tau);
    }
  }

  report.x_hat = x_best;
  report.nuclear_norm = nuclear_norm(x_best);
  report.iterations = iter;
  report.converged = converged;
  report.feasibility_residual = best_feas;
  if (x_sol != nullptr) report.rmse = (x_best - *x_sol).norm();
  return report;
}

bool classify_success(const SolveReport& report, const Matrix& x_sol,
                      double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::domain_error("classify_success: rel_tol must be > 0");
  if (report.x_hat.rows() != x_sol.rows() || report.x_hat.cols() != x_sol.cols())
    throw std::domain_error("classify_success: shape mismatch");
  const double ref = x_sol.norm();
  const double err = (report.x_hat - x_sol).norm();
  if (ref == 0.0) return err <= 1e-12;
  return err <= rel_tol * ref;
}

}  // namespace cinf
