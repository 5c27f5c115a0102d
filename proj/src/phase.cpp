#include "cinf/phase.hpp"

#include <cmath>
#include <stdexcept>

#include "cinf/fpt.hpp"

namespace cinf {

std::string to_string(PTScenario s) {
  switch (s) {
    case PTScenario::worst_case: return "wc";
    case PTScenario::asymmetric: return "ac";
    case PTScenario::asymmetric_alpha: return "ac-alpha";
  }
  return "?";
}

double beta_wc(double eta) {
  if (eta < 0.0 || eta > 1.0) throw std::domain_error("beta_wc: eta in [0, 1]");
  return 0.5 - std::sqrt(eta - eta * eta);
}

double beta_ac(double eta) {
  // Housed once: the spectral-edge closed form is the transition.
  return spectral_edge_beta(eta);
}

bool beta_ac_valid(double eta) { return beta_ac(eta) <= eta; }

double beta_ac_from_alpha(double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::domain_error("beta_ac_from_alpha: alpha in [0, 1]");
  const double rad = std::sqrt(1.0 - alpha) - 1.0 + alpha;
  if (rad < -1e-12)
    throw std::domain_error("beta_ac_from_alpha: negative radicand");
  return 1.0 - 2.0 * std::sqrt(std::max(0.0, rad));
}

PTCurve pt_curve(PTScenario scenario, const std::vector<double>& grid) {
  PTCurve curve;
  curve.scenario = scenario;
  curve.abscissa_kind =
      scenario == PTScenario::asymmetric_alpha ? "alpha" : "eta";
  curve.samples.reserve(grid.size());
  for (double a : grid) {
    double b = 0.0;
    switch (scenario) {
      case PTScenario::worst_case: b = beta_wc(a); break;
      case PTScenario::asymmetric: b = beta_ac(a); break;
      case PTScenario::asymmetric_alpha: b = beta_ac_from_alpha(a); break;
    }
    curve.samples.emplace_back(a, b);
  }
  return curve;
}

}  // namespace cinf
