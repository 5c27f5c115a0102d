#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "cinf/instances.hpp"
#include "cinf/solver.hpp"

namespace cinf {

/// Raised when the mask-modified basis matrix loses rank (probability zero
/// under Haar, still detected).
struct SingularConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact spectral certificate for nuclear-norm equivalence: the largest
/// eigenvalue of cal_q1 = q1 * q1_perp decides recovery.
struct SpectralCertificate {
  Matrix lambda_v;  // (n-k) x k
  Matrix lambda_u;  // (n-k) x k
  Matrix q1;        // k x k, lambda_v^T lambda_v
  Matrix q1_perp;   // k x k, lambda_u^T lambda_u
  Matrix cal_q1;    // k x k, q1 * q1_perp
  double lambda_max = 0.0;
  bool equivalent = true;
  bool sufficient_check = true;  // product-of-maxima variant
  bool marginal = false;         // |lambda_max - 1| < 1e-9
};

struct FalsifierWitness {
  Matrix w;          // unit Frobenius, supported on the masked corner
  double objective;  // tr(u^T W v) + nuclear(u_perp^T W v_perp), < 0
};

struct IdentityBlockReport {
  bool premise_holds = false;
  bool conclusion_holds = false;
  bool value = true;  // vacuous true when the premise fails
};

/// Lambda_V = pinv(bottom (n-l) rows of v_perp) * (bottom rows of v_basis),
/// and the analogue for u. Requires k <= l.
std::pair<Matrix, Matrix> mask_modified_bases(const LowRankInstance& inst,
                                              const BlockMask& mask);

SpectralCertificate certificate(const LowRankInstance& inst,
                                const BlockMask& mask);

/// Cross-validation harness: certificate verdict vs solver success on the
/// same instance.
bool certificate_agrees_with_solver(const LowRankInstance& inst,
                                    const BlockMask& mask,
                                    const SolverOptions& opts,
                                    double rel_tol = 1e-4);

/// Random search plus projected descent for a null-space witness of
/// non-equivalence. A returned witness certifies failure; absence certifies
/// nothing.
std::optional<FalsifierWitness> nullspace_falsifier(
    const LowRankInstance& inst, const BlockMask& mask, int samples,
    std::uint64_t seed);

/// Checker for the identity-block facts: if c is symmetric with spectrum in
/// [-1-tol, 1+tol] and its first k diagonal entries >= 1-tol, then the top-left
/// k x k block must be the identity and the top-right k x (n-k) block zero.
IdentityBlockReport verify_identity_block(const Matrix& c, int k, double tol);

/// Eigenvalues of cal_q1 via the symmetrized similar form
/// q1^{1/2} q1_perp q1^{1/2}; sorted ascending.
Vector cal_q1_eigenvalues(const Matrix& q1, const Matrix& q1_perp);

}  // namespace cinf
