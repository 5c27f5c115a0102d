#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace cinf {

using Complex = std::complex<double>;

enum class Branch { plus, minus };

/// Closed-form G-transform of the product of two Haar projectors with trace
/// ratios 1-beta and 1-eta:
///   G(z) = (z - (beta+eta) +/- sqrt((z-(beta+eta))^2 + 4 beta eta (z-1)))
///          / (2 (z^2 - z)).
/// Principal square root; branch continuity along paths is the caller's duty.
Complex g_dtilde(Complex z, double beta, double eta, Branch branch);

struct SpectralDensity {
  std::vector<double> grid;     // ascending x samples
  std::vector<double> density;  // f(x) >= 0
  double upper_edge = 0.0;      // largest x with density above 1e-4
  std::vector<std::pair<double, double>> point_masses;  // (location, mass)

  /// Trapezoidal integral of the continuous part.
  double continuous_mass() const;
  double total_mass() const;
};

/// f(x) = -imag(g(x + i eps)) / pi, clipped below at 0.
SpectralDensity stieltjes_invert(const std::function<Complex(Complex)>& g,
                                 const std::vector<double>& x_grid,
                                 double epsilon);

/// One solved point of the coupled functional system for the G-transform of
/// the certificate product matrix.
struct FptSystemState {
  Complex g_q1;  // G(z) at z = x + i eps
  Complex z1;    // -z G - sqrt(G) sqrt(zG - 1)
  Complex y;     // sqrt(zG-1) / (sqrt(zG-1) + z sqrt(G))
  Complex s_d1;  // sqrt((zG-1)/G) + 1
  double residual = 0.0;  // max absolute residual of the three relations
};

struct FptSolveError : std::runtime_error {
  double last_residual;
  FptSolveError(const std::string& what, double res)
      : std::runtime_error(what), last_residual(res) {}
};

/// Damped Newton on the scalar complex equation in G; warm_start seeds the
/// iteration (grid continuation), cold start uses a support-centered pole
/// guess G = 1/(z - 0.5).
FptSystemState solve_gq1(double x, double epsilon, double beta, double eta,
                         std::optional<Complex> warm_start = std::nullopt);

/// Density of the certificate product matrix on x_grid via Stieltjes
/// inversion of solve_gq1, swept left to right with warm starts. The mass
/// deficit 1 - integral is attributed to an atom at 0.
SpectralDensity q1_density(double beta, double eta,
                           const std::vector<double>& x_grid, double epsilon);

/// Quartic edge polynomial coefficients and the stationary point y_opt.
struct EdgePolynomial {
  double c3, c2, c1, c0, c00;
  double r;      // c2^2 - 3 c1 c3
  double y_opt;  // (-c2 + sqrt(r)) / (3 c3)
};

EdgePolynomial edge_polynomial(double beta, double eta);

/// Edge scalar equation; real only where the inner radicand
/// (y-(beta+eta))^2 + 4 beta eta (y-1) is nonnegative (returns NaN
/// otherwise). Poles at y in {0, 1/2, 1} raise a domain error.
double zeta1(double y, double beta, double eta);
double zeta2(double y, double beta, double eta);
double zeta3(double y, double beta, double eta);
double zeta(double y, double beta, double eta);

/// Radicand of the g_dtilde square root at real y.
double edge_radicand(double y, double beta, double eta);

/// Rank ratio at which the upper spectral edge sits exactly at 1:
/// 1 - 2 sqrt(eta - eta^2).
double spectral_edge_beta(double eta);

}  // namespace cinf
