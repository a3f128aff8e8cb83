#pragma once

#include "thinfilm/energy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace thinfilm {

enum class StepRule { lbfgs, steepest };

struct MinimizeOptions {
  int max_iterations = 500;
  double grad_tol = 1e-12;
  StepRule rule = StepRule::lbfgs;
  int history = 10;
  EnergyVariant variant = EnergyVariant::plain;
  // Stop once the energy falls below this value; negative disables the check.
  double energy_floor = -1.0;
};

enum class MinimizeStatus { converged, iteration_budget, line_search_failure, energy_floor };

struct MinimizeResult {
  Deformation w;
  std::vector<double> trace;  // energy before the first step and after every accepted step
  std::vector<double> grad_norms;
  int iterations = 0;
  MinimizeStatus status = MinimizeStatus::iteration_budget;
};

std::string status_name(MinimizeStatus s);

/// Gradient of e_total with respect to the node positions.
Eigen::Matrix3Xd e_total_gradient(const Deformation& w, const LatticeIndex& lat, const AtomisticModel& model,
                                  const ForceField* f, EnergyVariant variant);

/// Descent on e_total with an Armijo backtracking line search. Every accepted
/// step lowers the energy, so the trace is nonincreasing.
MinimizeResult minimize_atomistic(const Deformation& w0, const LatticeIndex& lat, const AtomisticModel& model,
                                  const ForceField* f, const MinimizeOptions& opt);

/// Identity plus a uniform random displacement of the given amplitude (in units of eps).
Deformation perturbed_identity(const LatticeIndex& lat, double amplitude, std::uint64_t seed);

}  // namespace thinfilm
