#include "cinf/fpt.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cinf {

namespace {

constexpr double kPi = std::numbers::pi;

Complex g_dtilde_unchecked(Complex z, double beta, double eta, Branch branch) {
  const Complex shift = z - Complex(beta + eta, 0.0);
  const Complex rad = shift * shift + 4.0 * beta * eta * (z - 1.0);
  const Complex root = std::sqrt(rad);
  const Complex num = branch == Branch::plus ? shift + root : shift - root;
  return num / (2.0 * (z * z - z));
}

}  // namespace

Complex g_dtilde(Complex z, double beta, double eta, Branch branch) {
  if (beta < 0.0 || beta > 1.0 || eta < 0.0 || eta > 1.0)
    throw std::domain_error("g_dtilde: beta, eta must lie in [0, 1]");
  if (std::abs(z) < 1e-14 || std::abs(z - 1.0) < 1e-14)
    throw std::domain_error("g_dtilde: pole at z in {0, 1}");
  return g_dtilde_unchecked(z, beta, eta, branch);
}

double SpectralDensity::continuous_mass() const {
  double m = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    m += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  return m;
}

double SpectralDensity::total_mass() const {
  double m = continuous_mass();
  for (const auto& [loc, mass] : point_masses) m += mass;
  return m;
}

SpectralDensity stieltjes_invert(const std::function<Complex(Complex)>& g,
                                 const std::vector<double>& x_grid,
                                 double epsilon) {
  if (!(epsilon > 0.0)) throw std::domain_error("stieltjes_invert: epsilon > 0");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (!(x_grid[i] > x_grid[i - 1]))
      throw std::domain_error("stieltjes_invert: grid must ascend");

  SpectralDensity out;
  out.grid = x_grid;
  out.density.resize(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    Complex v;
    try {
      v = g(Complex(x_grid[i], epsilon));
    } catch (const std::exception& e) {
      throw std::runtime_error("stieltjes_invert: sampler failed at x = " +
                               std::to_string(x_grid[i]) + ": " + e.what());
    }
    out.density[i] = std::max(0.0, -v.imag() / kPi);
  }
  out.upper_edge = out.grid.empty() ? 0.0 : out.grid.front();
  for (std::size_t i = 0; i < out.grid.size(); ++i)
    if (out.density[i] > 1e-4) out.upper_edge = out.grid[i];
  return out;
}

namespace {

struct SystemEval {
  Complex f;     // defect of the third relation
  Complex y;
  Complex w0, w1;
};

// Evaluate the coupled system at a candidate G. The first relation defines
// y, the second is the closed form for the projector-product transform, the
// third couples them back to G. Only the relative sign of the two square
// roots matters (flipping both leaves y and the product unchanged), so the
// sheet is parametrized by `sign` on the first root.
SystemEval eval_system(Complex z, Complex g, double beta, double eta,
                       Branch branch, double sign) {
  SystemEval ev;
  ev.w1 = sign * std::sqrt(z * g - 1.0);
  ev.w0 = std::sqrt(g);
  ev.y = ev.w1 / (ev.w1 + z * ev.w0);
  const Complex gd = g_dtilde_unchecked(ev.y, beta, eta, branch);
  const Complex lhs =
      (gd - eta / ev.y - (1.0 - (beta + eta)) / (ev.y - 1.0)) / beta;
  const Complex rhs = -(ev.w1 + ev.w0) * (ev.w1 + z * ev.w0);
  ev.f = lhs - rhs;
  return ev;
}

struct NewtonResult {
  Complex g;
  bool ok = false;
  double fabs = std::numeric_limits<double>::infinity();
};

NewtonResult newton_solve(Complex z, Complex g0, double beta, double eta,
                          Branch branch, double sign) {
  NewtonResult res;
  Complex g = g0;
  double f0 = std::abs(eval_system(z, g, beta, eta, branch, sign).f);
  for (int it = 0; it < 200; ++it) {
    if (f0 < 1e-12) break;
    const double h = 1e-7 * (std::abs(g) + 1.0);
    const Complex fp =
        eval_system(z, g + Complex(h, 0), beta, eta, branch, sign).f;
    const Complex fm =
        eval_system(z, g - Complex(h, 0), beta, eta, branch, sign).f;
    const Complex df = (fp - fm) / (2.0 * h);
    if (std::abs(df) < 1e-300) break;
    const Complex full =
        -eval_system(z, g, beta, eta, branch, sign).f / df;
    double damp = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      const Complex cand = g + damp * full;
      const double fc =
          std::abs(eval_system(z, cand, beta, eta, branch, sign).f);
      if (std::isfinite(fc) && fc < f0) {
        g = cand;
        f0 = fc;
        moved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!moved) break;
  }
  res.g = g;
  res.fabs = f0;
  res.ok = f0 < 1e-10;
  return res;
}

double state_residual(Complex z, Complex g, double beta, double eta,
                      Branch branch, double sign) {
  const SystemEval ev = eval_system(z, g, beta, eta, branch, sign);
  // Relation (i) holds by construction from the stored state; relation (ii)
  // is checked through the defining quadratic of the closed-form transform.
  const Complex y = ev.y;
  const Complex gd = g_dtilde_unchecked(y, beta, eta, branch);
  const Complex shift = y - Complex(beta + eta, 0.0);
  const Complex rad = shift * shift + 4.0 * beta * eta * (y - 1.0);
  const Complex quad = 2.0 * (y * y - y) * gd - shift;
  const double r2 = std::abs(quad * quad - rad);
  return std::max(r2, std::abs(ev.f));
}

FptSystemState solve_gq1_impl(double x, double epsilon, double beta,
                              double eta, std::optional<Complex> warm_start,
                              int depth) {
  const Complex z(x, epsilon);
  std::vector<Complex> starts;
  if (warm_start) starts.push_back(*warm_start);
  starts.push_back(1.0 / (z - 0.5));  // support-centered pole guess
  starts.push_back(1.0 / z - Complex(0.0, 0.3));
  starts.push_back(Complex(0.5, -0.5));

  NewtonResult best;
  Branch best_branch = Branch::minus;
  double best_sign = 1.0;
  double best_score = std::numeric_limits<double>::infinity();
  double last_res = std::numeric_limits<double>::infinity();
  // The flipped square-root sheet only enters as a fallback: it hosts
  // spurious fixed points, but near isolated branch-cut crossings it is the
  // only sheet carrying the physical root.
  for (double sign : {1.0, -1.0}) {
    for (Branch branch : {Branch::minus, Branch::plus}) {
      for (const Complex& s : starts) {
        const NewtonResult r = newton_solve(z, s, beta, eta, branch, sign);
        last_res = std::min(last_res, r.fabs);
        if (!r.ok) continue;
        if (r.g.imag() > 1e-8) continue;  // Herglotz: imag(G) <= 0
        // Spurious fixed points near the pole of y carry large defects on
        // the other two relations; the genuine root satisfies all three.
        if (state_residual(z, r.g, beta, eta, branch, sign) > 1e-8) continue;
        // Prefer the warm-started sheet; otherwise the minus branch.
        double score = warm_start ? std::abs(r.g - *warm_start) : r.fabs;
        if (!warm_start && branch == Branch::plus) score += 1.0;
        if (score < best_score) {
          best_score = score;
          best = r;
          best_branch = branch;
          best_sign = sign;
        }
      }
      if (warm_start && best.ok) break;  // warm sheet found, keep it
    }
    if (best.ok) break;
  }
  if (!best.ok && depth < 4) {
    // Continuation in the imaginary offset walks around branch points that
    // pinch the real axis: solve higher up, then descend with warm starts.
    try {
      FptSystemState hi =
          solve_gq1_impl(x, 3.0 * epsilon, beta, eta, warm_start, depth + 1);
      return solve_gq1_impl(x, epsilon, beta, eta, hi.g_q1, depth + 4);
    } catch (const FptSolveError&) {
      // fall through to the original diagnostic
    }
  }
  if (!best.ok)
    throw FptSolveError("solve_gq1: root search failed at x = " +
                            std::to_string(x),
                        last_res);

  FptSystemState st;
  st.g_q1 = best.g;
  const Complex w1 = best_sign * std::sqrt(z * best.g - 1.0);
  const Complex w0 = std::sqrt(best.g);
  st.z1 = -z * best.g - w0 * w1;
  st.y = w1 / (w1 + z * w0);
  st.s_d1 = w1 / w0 + 1.0;
  st.residual = state_residual(z, best.g, beta, eta, best_branch, best_sign);
  return st;
}

}  // namespace

FptSystemState solve_gq1(double x, double epsilon, double beta, double eta,
                         std::optional<Complex> warm_start) {
  if (!(epsilon > 0.0)) throw std::domain_error("solve_gq1: epsilon > 0");
  if (!(beta > 0.0) || !(beta <= eta) || !(eta < 1.0))
    throw std::domain_error("solve_gq1: requires 0 < beta <= eta < 1");
  return solve_gq1_impl(x, epsilon, beta, eta, warm_start, 0);
}

SpectralDensity q1_density(double beta, double eta,
                           const std::vector<double>& x_grid, double epsilon) {
  SpectralDensity out;
  out.grid = x_grid;
  out.density.resize(x_grid.size());
  std::optional<Complex> warm;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    FptSystemState st;
    try {
      st = solve_gq1(x_grid[i], epsilon, beta, eta, warm);
    } catch (const FptSolveError& e) {
      throw FptSolveError("q1_density: grid index " + std::to_string(i) +
                              ": " + e.what(),
                          e.last_residual);
    }
    warm = st.g_q1;
    out.density[i] = std::max(0.0, -st.g_q1.imag() / kPi);
  }
  out.upper_edge = out.grid.empty() ? 0.0 : out.grid.front();
  for (std::size_t i = 0; i < out.grid.size(); ++i)
    if (out.density[i] > 1e-4) out.upper_edge = out.grid[i];
  // Mass deficit goes to the atom at 0.
  const double deficit = 1.0 - out.continuous_mass();
  if (deficit > 1e-6) out.point_masses.emplace_back(0.0, deficit);
  return out;
}

EdgePolynomial edge_polynomial(double beta, double eta) {
  if (beta < 0.0 || beta > 1.0 || eta < 0.0 || eta > 1.0)
    throw std::domain_error("edge_polynomial: beta, eta in [0, 1]");
  EdgePolynomial p;
  p.c3 = beta - 2.0;
  p.c2 = 5.0 - 2.0 * beta - 2.0 * eta;
  p.c1 = beta - 4.0 + 3.0 * eta;
  p.c0 = 1.0 - eta;
  p.c00 = 0.0;
  p.r = p.c2 * p.c2 - 3.0 * p.c1 * p.c3;
  p.y_opt = (-p.c2 + std::sqrt(p.r)) / (3.0 * p.c3);
  return p;
}

double edge_radicand(double y, double beta, double eta) {
  const double s = y - (beta + eta);
  return s * s + 4.0 * beta * eta * (y - 1.0);
}

namespace {

void check_zeta1_poles(double y) {
  if (std::abs(y) < 1e-12 || std::abs(y - 0.5) < 1e-12 ||
      std::abs(y - 1.0) < 1e-12)
    throw std::domain_error("zeta1: pole at y in {0, 1/2, 1}");
}

}  // namespace

double zeta1(double y, double beta, double eta) {
  check_zeta1_poles(y);
  const double rad = edge_radicand(y, beta, eta);
  if (rad < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double gd =
      (y - (beta + eta) - std::sqrt(rad)) / (2.0 * (y * y - y));
  return -1.0 / (2.0 * y - 1.0) +
         (gd - eta / y - (1.0 - (beta + eta)) / (y - 1.0)) / beta;
}

double zeta2(double y, double beta, double eta) {
  const double rad = edge_radicand(y, beta, eta);
  if (rad < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * (beta - 1.0) * y * y + (1.0 - 2.0 * beta + 2.0 * eta) * y +
         beta - eta - (2.0 * y - 1.0) * std::sqrt(rad);
}

double zeta3(double y, double beta, double eta) {
  const EdgePolynomial p = edge_polynomial(beta, eta);
  return ((p.c3 * y + p.c2) * y + p.c1) * y + p.c0;
}

double zeta(double y, double beta, double eta) {
  return 4.0 * beta * y * zeta3(y, beta, eta);
}

double spectral_edge_beta(double eta) {
  if (eta < 0.0 || eta > 1.0)
    throw std::domain_error("spectral_edge_beta: eta in [0, 1]");
  return 1.0 - 2.0 * std::sqrt(eta - eta * eta);
}

}  // namespace cinf
