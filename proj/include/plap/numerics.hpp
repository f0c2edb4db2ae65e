#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "plap/error.hpp"

namespace plap {

/// Composite Gauss-Legendre quadrature: `order` points per panel,
/// `panels` equal panels over the integration interval.
struct QuadratureRule {
  int order = 5;
  int panels = 1;
};

/// Sign-change interval for root finding: lo < hi and f_lo * f_hi <= 0.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;

  bool valid() const { return lo < hi && f_lo * f_hi <= 0.0; }
};

/// Gauss-Legendre nodes and weights on [-1, 1] for orders 1..10
/// (tabulated to machine precision; avoids runtime eigen-solves).
std::span<const double> gauss_nodes(int order);
std::span<const double> gauss_weights(int order);

/// Signed integral of g over [a, b]; antisymmetric under swapping a and b.
/// Throws numerical-evaluation if g returns a non-finite sample.
double integrate(const std::function<double(double)>& g, double a, double b,
                 QuadratureRule rule = {});

/// Prefix integrals along an increasing radius sequence:
/// result[i] = integral of g from radii[0] to radii[i], result[0] = 0.
/// Additive over adjacent panels by construction.
std::vector<double> cumulative_integral(const std::function<double(double)>& g,
                                        std::span<const double> radii,
                                        QuadratureRule rule = {});

/// Root of a strictly monotone function inside a bracket. Bisection with a
/// secant acceleration step; any secant iterate leaving the bracket falls
/// back to bisection. Stops when |h(x)| <= tol_f or the bracket width
/// drops below tol_x. Negative tolerances select the defaults
/// tol_x = 1e-12*(hi-lo), tol_f = 1e-12*max(|f_lo|,|f_hi|).
/// Throws bracket-error for an invalid bracket and convergence-failure
/// after 200 iterations.
double solve_monotone(const std::function<double(double)>& h, RootBracket bracket,
                      double tol_x = -1.0, double tol_f = -1.0);

/// Expands [seed/2, 2*seed] geometrically (factor 2 per step, at most 64
/// steps) until a sign change is found. `increasing` is the monotonicity
/// direction of h and decides which end moves. Throws bracket-not-found
/// when no sign change appears within the cap (violated monotonicity).
RootBracket expand_bracket(const std::function<double(double)>& h, double seed,
                           bool increasing);

/// Shape-preserving monotone cubic interpolant (Fritsch-Carlson slopes).
/// Knots must be strictly increasing. Evaluation outside the knot range
/// clamps to the boundary cubic.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double min_knot() const { return x_.front(); }
  double max_knot() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, d_;  // knots, values, knot slopes
};

/// Deterministic uniform double in [0, 1) from a 64-bit generator state,
/// identical across platforms (top 53 bits scaled).
inline double uniform_double(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

}  // namespace plap
