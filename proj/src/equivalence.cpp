#include "cinf/equivalence.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "cinf/rng.hpp"

namespace cinf {

namespace {

// Moore-Penrose pseudo-inverse of a full-row-rank matrix; throws when the
// row rank drops below rows().
Matrix pinv_full_row_rank(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const Eigen::Index r = std::min(a.rows(), a.cols());
  if (a.rows() > a.cols() || s.size() < r || !(s(r - 1) > 1e-12 * s(0)))
    throw SingularConfigurationError(
        "mask-modified basis matrix is rank deficient");
  Vector sinv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) sinv(i) = 1.0 / s(i);
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

double lambda_max_dinv_minus_i(const Matrix& bottom_perp) {
  // Q = (A A^T)^{-1} - I with A the bottom rows of the perp frame.
  const Matrix d = bottom_perp * bottom_perp.transpose();
  if (d.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(d);
  const double lmin = eig.eigenvalues()(0);
  if (!(lmin > 1e-14))
    throw SingularConfigurationError("masked Gram matrix is singular");
  return 1.0 / lmin - 1.0;
}

}  // namespace

std::pair<Matrix, Matrix> mask_modified_bases(const LowRankInstance& inst,
                                              const BlockMask& mask) {
  const int n = inst.dims.n;
  const int k = inst.dims.k;
  const int l = mask.l();
  if (mask.n() != n) throw std::domain_error("mask_modified_bases: n mismatch");
  if (k > l) throw std::domain_error("mask_modified_bases: requires k <= l");
  if (k == 0) return {Matrix(n, 0), Matrix(n, 0)};

  const Matrix av = inst.v_perp.bottomRows(n - l);  // (n-l) x (n-k)
  const Matrix bv = inst.v_basis.bottomRows(n - l); // (n-l) x k
  const Matrix au = inst.u_perp.bottomRows(n - l);
  const Matrix bu = inst.u_basis.bottomRows(n - l);
  return {pinv_full_row_rank(av) * bv, pinv_full_row_rank(au) * bu};
}

Vector cal_q1_eigenvalues(const Matrix& q1, const Matrix& q1_perp) {
  if (q1.rows() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q1);
  Vector w = eig.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w(i) = std::sqrt(std::max(0.0, w(i)));
  const Matrix q1_half =
      eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().transpose();
  const Matrix sym = q1_half * q1_perp * q1_half;
  Eigen::SelfAdjointEigenSolver<Matrix> eig2(0.5 * (sym + sym.transpose()));
  return eig2.eigenvalues();
}

SpectralCertificate certificate(const LowRankInstance& inst,
                                const BlockMask& mask) {
  SpectralCertificate cert;
  auto [lv, lu] = mask_modified_bases(inst, mask);
  cert.lambda_v = lv;
  cert.lambda_u = lu;
  cert.q1 = lv.transpose() * lv;
  cert.q1_perp = lu.transpose() * lu;
  cert.cal_q1 = cert.q1 * cert.q1_perp;

  if (inst.dims.k == 0) {
    cert.lambda_max = 0.0;
  } else {
    const Vector evs = cal_q1_eigenvalues(cert.q1, cert.q1_perp);
    cert.lambda_max = evs(evs.size() - 1);
  }
  cert.equivalent = cert.lambda_max <= 1.0 + 1e-12;
  cert.marginal = std::abs(cert.lambda_max - 1.0) < 1e-9;

  const int n = inst.dims.n;
  const int l = mask.l();
  const double q_max = lambda_max_dinv_minus_i(inst.v_perp.bottomRows(n - l));
  const double qp_max = lambda_max_dinv_minus_i(inst.u_perp.bottomRows(n - l));
  cert.sufficient_check = q_max * qp_max <= 1.0 + 1e-12;
  return cert;
}

bool certificate_agrees_with_solver(const LowRankInstance& inst,
                                    const BlockMask& mask,
                                    const SolverOptions& opts,
                                    double rel_tol) {
  const SpectralCertificate cert = certificate(inst, mask);
  const Matrix y = mask.apply(inst.x_sol);
  const SolveReport report = solve_nuclear_min(y, mask, opts, &inst.x_sol);
  const bool solver_success = classify_success(report, inst.x_sol, rel_tol);
  return cert.equivalent == solver_success;
}

namespace {

double falsifier_objective(const LowRankInstance& inst, const Matrix& w) {
  const double tr = (inst.u_basis.transpose() * w * inst.v_basis).trace();
  return tr + nuclear_norm(inst.u_perp.transpose() * w * inst.v_perp);
}

}  // namespace

std::optional<FalsifierWitness> nullspace_falsifier(
    const LowRankInstance& inst, const BlockMask& mask, int samples,
    std::uint64_t seed) {
  if (samples < 1) throw std::domain_error("nullspace_falsifier: samples >= 1");
  const int n = inst.dims.n;
  const int free = n - mask.l();
  if (free == 0 || inst.dims.k == 0) return std::nullopt;

  for (int s = 0; s < samples; ++s) {
    auto eng = make_engine(stable_hash(seed, 0xFA15u, s));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix w = Matrix::Zero(n, n);
    for (int j = n - free; j < n; ++j)
      for (int i = n - free; i < n; ++i) w(i, j) = gauss(eng);
    w /= w.norm();

    double obj = falsifier_objective(inst, w);
    double step = 0.5;
    for (int it = 0; it < 60 && obj >= -1e-10; ++it) {
      // Subgradient of tr + nuclear terms, restricted to the free corner.
      const Matrix inner = inst.u_perp.transpose() * w * inst.v_perp;
      Eigen::JacobiSVD<Matrix> svd(inner,
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
      Matrix grad = inst.u_basis * inst.v_basis.transpose() +
                    inst.u_perp * (svd.matrixU() * svd.matrixV().transpose()) *
                        inst.v_perp.transpose();
      grad = mask.complement(grad);

      bool improved = false;
      for (int bt = 0; bt < 8; ++bt) {
        Matrix cand = w - step * grad;
        const double cn = cand.norm();
        if (cn < 1e-14) break;
        cand /= cn;
        const double cobj = falsifier_objective(inst, cand);
        if (cobj < obj - 1e-14) {
          w = cand;
          obj = cobj;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (obj < -1e-10) return FalsifierWitness{w, obj};
  }
  return std::nullopt;
}

IdentityBlockReport verify_identity_block(const Matrix& c, int k, double tol) {
  if (c.rows() != c.cols())
    throw std::domain_error("verify_identity_block: square matrix required");
  if (k < 0 || k > c.rows())
    throw std::domain_error("verify_identity_block: bad k");
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::domain_error("verify_identity_block: input not symmetric");

  const int n = static_cast<int>(c.rows());
  IdentityBlockReport rep;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (c + c.transpose()));
  const Vector& w = eig.eigenvalues();
  bool premise = w(0) >= -1.0 - tol && w(w.size() - 1) <= 1.0 + tol;
  for (int i = 0; i < k && premise; ++i) premise = c(i, i) >= 1.0 - tol;
  rep.premise_holds = premise;
  if (!premise) {
    rep.value = true;  // vacuous
    return rep;
  }

  const double stol = std::sqrt(tol);
  const Matrix topleft = c.topLeftCorner(k, k) - Matrix::Identity(k, k);
  const Matrix topright = c.topRightCorner(k, n - k);
  rep.conclusion_holds =
      topleft.cwiseAbs().maxCoeff() <= stol &&
      (topright.size() == 0 || topright.cwiseAbs().maxCoeff() <= stol);
  rep.value = rep.conclusion_holds;
  return rep;
}

}  // namespace cinf
