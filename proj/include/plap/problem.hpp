#pragma once

#include <memory>
#include <vector>

#include <json.hpp>

#include "plap/error.hpp"
#include "plap/numerics.hpp"

namespace plap {

enum class source_kind { constant, power, table };

/// Radial source term f(r). Three shapes are supported: a constant,
/// a power c*r^k, and a sampled table interpolated by a shape-preserving
/// monotone cubic. The term must be continuous and of one sign on the
/// annulus; sign validation happens in validate().
class SourceTerm {
 public:
  static SourceTerm constant(double c);
  static SourceTerm power(double c, double k);
  static SourceTerm table(std::vector<double> r, std::vector<double> f);

  double operator()(double r) const;

  source_kind kind() const { return kind_; }
  double value() const { return c_; }        // constant kind
  double coefficient() const { return c_; }  // power kind
  double exponent() const { return k_; }     // power kind
  const std::vector<double>& knots_r() const { return knots_r_; }
  const std::vector<double>& knots_f() const { return knots_f_; }

 private:
  SourceTerm() = default;

  source_kind kind_ = source_kind::constant;
  double c_ = 0.0;
  double k_ = 0.0;
  std::vector<double> knots_r_, knots_f_;
  std::shared_ptr<const MonotoneCubic> interp_;
};

/// Problem instance: annulus R1 < |x| < R2 in dimension n, exponent p,
/// regularization epsilon, and radial source term.
/// p = 2 is admitted but routes only to the discrete oracle.
struct ProblemSpec {
  double r_inner = 1.0;
  double r_outer = 2.0;
  int dim = 2;
  double p = 3.0;
  double epsilon = 0.0;
  SourceTerm source = SourceTerm::constant(1.0);
};

/// Ordered sample radii spanning [R1, R2]; endpoints exact.
struct RadialGrid {
  std::vector<double> radii;

  int count() const { return static_cast<int>(radii.size()); }
};

/// Cut-off selecting the regularized branch: 1 on (1,2), 0 on (2,inf).
/// Throws invalid-exponent for p <= 1, p = 2, or non-finite p.
int chi(double p);

/// Surface area of the unit (n-1)-sphere via the classical even/odd Gamma
/// recurrence (area(n) = 2*pi/(n-2) * area(n-2), area(2) = 2*pi,
/// area(3) = 4*pi). Throws invalid-dimension for n < 2.
double sphere_area(int n);

/// Checks every ProblemSpec invariant and returns the source sign
/// sigma in {+1, -1}. Sign constancy is probed on 1000 equispaced radii
/// plus all table knots. Throws degenerate-annulus, invalid-exponent,
/// missing-regularization, or mixed-sign-source.
int validate(const ProblemSpec& spec);

/// True when the spec is only usable by the discrete oracle (p = 2).
bool oracle_only(const ProblemSpec& spec);

/// Grid constructors. Counts are node counts (>= 2); endpoints are exact.
RadialGrid make_uniform_grid(double r1, double r2, int count);
/// Chebyshev-clustered nodes mapped to [r1, r2]; resolves boundary layers
/// and the derivative kink region for p near 2.
RadialGrid make_chebyshev_grid(double r1, double r2, int count);
/// Near-uniform grid with a window of half-width window_frac*(r2-r1)
/// around `center` graded polynomially (exponent `grading`) toward the
/// center. Used to restore clean second-order convergence when the
/// solution has a known interior derivative kink.
RadialGrid make_graded_grid(double r1, double r2, int count, double center,
                            double window_frac = 0.25, double grading = 2.0);

/// Throws grid-error unless radii are strictly increasing with exact
/// endpoints r1 and r2.
void check_grid(const RadialGrid& grid, double r1, double r2);

/// JSON round trip with the fixed field names
/// {r_inner, r_outer, dim, p, epsilon, source:{kind, ...}}.
nlohmann::json to_json(const ProblemSpec& spec);
ProblemSpec spec_from_json(const nlohmann::json& doc);

}  // namespace plap
