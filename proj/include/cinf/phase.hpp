#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cinf {

enum class PTScenario { worst_case, asymmetric, asymmetric_alpha };

std::string to_string(PTScenario s);

struct PTCurve {
  PTScenario scenario;
  std::string abscissa_kind;  // "eta" or "alpha"
  std::vector<std::pair<double, double>> samples;  // (abscissa, beta)
};

/// Worst-case transition: 1/2 - sqrt(eta - eta^2).
double beta_wc(double eta);

/// Asymmetric transition: 1 - 2 sqrt(eta - eta^2). Twice beta_wc.
double beta_ac(double eta);

/// True when beta_ac(eta) <= eta, i.e. the certificate precondition k <= l
/// holds on the transition itself.
bool beta_ac_valid(double eta);

/// Asymmetric transition in observed-fraction coordinates:
/// 1 - 2 sqrt(sqrt(1-alpha) - 1 + alpha).
double beta_ac_from_alpha(double alpha);

PTCurve pt_curve(PTScenario scenario, const std::vector<double>& grid);

}  // namespace cinf
