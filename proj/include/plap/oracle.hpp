#pragma once

#include <functional>
#include <span>
#include <vector>

#include "plap/problem.hpp"
#include "plap/radial_solver.hpp"

namespace plap {

/// Result of the direct discretized-energy minimization. The nodal values
/// carry the Dirichlet conditions u[0] = u[last] = 0, and the objective is
/// the discrete potential energy at the final iterate (sphere-area factor
/// included, so its scale matches primal_energy).
struct DiscreteEnergyState {
  RadialGrid grid;
  std::vector<double> u;
  double objective = 0.0;
  double gradient_norm = 0.0;  // max-norm of the discrete gradient at exit
  int iterations = 0;          // accepted Newton steps
};

/// Discrete potential energy of nodal values on a grid: piecewise-linear
/// trial functions, element-midpoint quadrature for the stored-energy term
/// and trapezoidal quadrature for the load term. This is the objective
/// minimized by minimize_discrete_energy, exposed so convexity and descent
/// can be checked directly.
double discrete_energy(const ProblemSpec& spec, const RadialGrid& grid,
                       std::span<const double> u);

/// Minimizes the discrete potential energy over interior nodal values by
/// damped Newton iteration: exact tridiagonal Hessian of the element
/// integrand, Thomas solve, backtracking line search (Armijo 1e-4, halving).
/// The initial iterate is the p = 2 (linear) solution, which for p = 2 makes
/// the first Newton step exact. Terminates once the gradient max-norm drops
/// below 1e-10 times the load scale, or after 500 iterations. p = 2 is a
/// supported special case here (this module is the deliberate exception).
///
/// Throws a convergence error if the line search stalls; the message carries
/// the last iterate's objective and gradient norm.
DiscreteEnergyState minimize_discrete_energy(const ProblemSpec& spec,
                                             const RadialGrid& grid);

/// Classical radial Poisson solution for p = 2 with a constant source c:
///   n = 2:  u(r) = c * [(R1^2 - r^2)/4 + A * ln(r/R1)]
///   n >= 3: u(r) = c * [(R1^2 - r^2)/(2n) + A * (R1^{2-n} - r^{2-n})]
/// with A fixed by u(R2) = 0. Serves as a hand-checkable anchor for the
/// Newton minimizer. Throws unsupported-oracle unless p = 2 and the source
/// is constant.
std::function<double(double)> poisson_closed_form(const ProblemSpec& spec);

/// Distance between two nodal functions: sup-norm over the common grid and
/// the W^{1,p}-seminorm distance (omega * int |u_a' - u_b'|^p r^{n-1} dr)^{1/p}
/// with piecewise-linear element slopes. If the grids differ, the coarser
/// function is linearly interpolated onto the finer grid and the result is
/// flagged.
struct ProfileDistance {
  double sup = 0.0;
  double seminorm = 0.0;
  bool interpolated = false;
};

ProfileDistance compare(const RadialGrid& grid_a, std::span<const double> u_a,
                        const RadialGrid& grid_b, std::span<const double> u_b,
                        const ProblemSpec& spec);

/// Repackages a minimizer in the solution-profile schema so it shares the
/// CSV writer: du_dr by centered differences, lambda and F recomputed from
/// the nodal derivative.
SolutionProfile to_profile(const ProblemSpec& spec,
                           const DiscreteEnergyState& state);

}  // namespace plap
