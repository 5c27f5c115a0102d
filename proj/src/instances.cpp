#include "cinf/instances.hpp"

#include <random>
#include <stdexcept>

#include "cinf/rng.hpp"

namespace cinf {

BlockMask::BlockMask(int n, int l) : n_(n), l_(l) {
  if (n < 0) throw std::domain_error("BlockMask: n must be nonnegative");
  if (l < 0 || l > n) throw std::domain_error("BlockMask: need 0 <= l <= n");
}

Matrix BlockMask::apply(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_)
    throw std::domain_error("BlockMask::apply: shape mismatch");
  Matrix out = x;
  out.bottomRightCorner(n_ - l_, n_ - l_).setZero();
  return out;
}

Matrix BlockMask::complement(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_)
    throw std::domain_error("BlockMask::complement: shape mismatch");
  Matrix out = Matrix::Zero(n_, n_);
  out.bottomRightCorner(n_ - l_, n_ - l_) =
      x.bottomRightCorner(n_ - l_, n_ - l_);
  return out;
}

Matrix BlockMask::dense() const {
  Matrix m = Matrix::Ones(n_, n_);
  m.bottomRightCorner(n_ - l_, n_ - l_).setZero();
  return m;
}

BlockMask make_block_mask(int n, int l) { return BlockMask(n, l); }

std::string to_string(Scenario s) {
  return s == Scenario::symmetric ? "symmetric" : "asymmetric";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "symmetric") return Scenario::symmetric;
  if (s == "asymmetric") return Scenario::asymmetric;
  throw std::domain_error("unknown scenario: " + s);
}

namespace {

Matrix gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  auto eng = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = gauss(eng);
  return g;
}

// Thin QR with the R-diagonal sign fixed positive.
Matrix haar_from_gaussian(const Matrix& g) {
  const auto cols = g.cols();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), cols);
  const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace

Matrix sample_haar_basis(int n, int k, std::uint64_t seed) {
  if (k < 0 || k > n) throw std::domain_error("sample_haar_basis: need 0 <= k <= n");
  if (k == 0) return Matrix(n, 0);
  return haar_from_gaussian(gaussian_matrix(n, k, seed));
}

Matrix sample_haar_matrix(int n, std::uint64_t seed) {
  if (n == 0) return Matrix(0, 0);
  return haar_from_gaussian(gaussian_matrix(n, n, seed));
}

LowRankInstance make_instance(int n, int k, int l, Scenario scenario,
                              const Vector& sigma, std::uint64_t seed) {
  if (k < 0 || k > n) throw std::domain_error("make_instance: need 0 <= k <= n");
  if (l < 0 || l > n) throw std::domain_error("make_instance: need 0 <= l <= n");
  Vector sv = sigma;
  if (sv.size() == 0) sv = Vector::Ones(k);
  if (sv.size() != k) throw std::domain_error("make_instance: sigma size != k");
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (!(sv(i) > 0.0))
      throw std::domain_error("make_instance: singular values must be positive");

  LowRankInstance inst;
  inst.dims = ProblemDims{n, k, l};
  inst.scenario = scenario;
  inst.seed = seed;
  inst.singular_values = sv;

  const Matrix u_full = sample_haar_matrix(n, stable_hash(seed, 0x55u));
  inst.u_basis = u_full.leftCols(k);
  inst.u_perp = u_full.rightCols(n - k);
  if (scenario == Scenario::symmetric) {
    inst.v_basis = inst.u_basis;
    inst.v_perp = inst.u_perp;
  } else {
    const Matrix v_full = sample_haar_matrix(n, stable_hash(seed, 0x56u));
    inst.v_basis = v_full.leftCols(k);
    inst.v_perp = v_full.rightCols(n - k);
  }
  inst.x_sol = inst.u_basis * sv.asDiagonal() * inst.v_basis.transpose();
  return inst;
}

Matrix apply_mask(const BlockMask& mask, const Matrix& x) {
  return mask.apply(x);
}

}  // namespace cinf
