#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace cinf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dimension bundle n, k, l with the derived large-n ratios.
struct ProblemDims {
  int n = 0;
  int k = 0;
  int l = 0;

  double beta() const { return n > 0 ? static_cast<double>(k) / n : 0.0; }
  double eta() const { return n > 0 ? static_cast<double>(l) / n : 0.0; }
  double alpha() const {
    const double e = eta();
    return 1.0 - (1.0 - e) * (1.0 - e);
  }
};

/// Block observation pattern: everything is observed except the trailing
/// (n-l) x (n-l) corner. Stored as the (n, l) descriptor, never densified
/// outside tests.
class BlockMask {
 public:
  BlockMask(int n, int l);

  int n() const { return n_; }
  int l() const { return l_; }
  std::int64_t ones_count() const {
    const std::int64_t d = n_ - l_;
    return static_cast<std::int64_t>(n_) * n_ - d * d;
  }
  bool observed(int i, int j) const { return i < l_ || j < l_; }

  /// Zero out the masked corner.
  Matrix apply(const Matrix& x) const;
  /// Keep only the masked corner, zero elsewhere.
  Matrix complement(const Matrix& x) const;
  /// Dense 0/1 pattern, for tests.
  Matrix dense() const;

 private:
  int n_;
  int l_;
};

enum class Scenario { asymmetric, symmetric };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// Ground truth x_sol = u_basis * diag(singular_values) * v_basis^T together
/// with the full orthogonal frames [u_basis u_perp], [v_basis v_perp].
/// Immutable after construction.
struct LowRankInstance {
  ProblemDims dims;
  Scenario scenario = Scenario::asymmetric;
  std::uint64_t seed = 0;
  Matrix u_basis;  // n x k
  Matrix v_basis;  // n x k
  Matrix u_perp;   // n x (n-k)
  Matrix v_perp;   // n x (n-k)
  Vector singular_values;  // k, all > 0
  Matrix x_sol;    // n x n
};

BlockMask make_block_mask(int n, int l);

/// Haar n x k orthonormal frame: QR of an iid Gaussian matrix with the
/// R-diagonal signs folded into Q (exact Haar law, not just orthonormality).
Matrix sample_haar_basis(int n, int k, std::uint64_t seed);

/// Full n x n Haar orthogonal matrix.
Matrix sample_haar_matrix(int n, std::uint64_t seed);

/// sigma may be empty: defaults to all ones. symmetric sets v := u.
LowRankInstance make_instance(int n, int k, int l, Scenario scenario,
                              const Vector& sigma, std::uint64_t seed);

Matrix apply_mask(const BlockMask& mask, const Matrix& x);

}  // namespace cinf
