#pragma once

#include <span>
#include <vector>

#include "sinoma/linalg.hpp"

namespace sinoma {

struct RefineOptions {
  int max_iters = 10;
  double cost_tol = 1e-10;     ///< relative cost decrease that counts as converged
  double step_damping = 1e-3;  ///< initial Marquardt factor
  bool enabled = true;
};

struct RefineResult {
  std::vector<double> omegas;      ///< refined, wrapped into [0, 2pi)
  std::vector<double> cost_trace;  ///< [0] is the initial cost, then one per accepted step
  int iterations = 0;              ///< accepted steps
  bool converged = false;
};

/// min over Upsilon of ||Y - Phi(omega) Upsilon||_F^2, i.e. the energy of Y
/// outside span(Phi). Throws RankDeficient if Phi(omega) is.
double varpro_cost(std::span<const double> omegas, const ComplexMatrix& Y, double gamma);

/// Gradient of varpro_cost with respect to the frequencies.
std::vector<double> varpro_gradient(std::span<const double> omegas, const ComplexMatrix& Y,
                                    double gamma);

/// Damped Gauss-Newton on the variable-projection cost, Kaufman Jacobian.
/// A step is taken only if it lowers the cost; on failure the damping grows
/// tenfold, at most five times, after which the best point so far is
/// returned with converged = false.
RefineResult refine_ml(std::span<const double> omega_init, const ComplexMatrix& Y, double gamma,
                       const RefineOptions& opts = {});

}  // namespace sinoma
