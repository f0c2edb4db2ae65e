#include "plap/duality.hpp"

#include <cmath>
#include <string>

#include "plap/numerics.hpp"
#include "plap/problem.hpp"

namespace plap {

namespace {

void require_branch(double p) {
  if (!std::isfinite(p) || p <= 1.0 || p == 2.0) {
    throw error(errc::invalid_exponent,
                "exponent must lie in (1,2)∪(2,inf), got " + std::to_string(p));
  }
}

}  // namespace

double stored_energy_density(double gamma_sq, double p, double eps) {
  require_branch(p);
  if (gamma_sq < 0.0) {
    throw error(errc::domain_error, "squared strain must be non-negative");
  }
  const double shifted = gamma_sq + (p < 2.0 ? eps * eps : 0.0);
  return std::pow(shifted, 0.5 * p) / p;
}

double canonical_energy(double xi, double p) {
  require_branch(p);
  if (xi < 0.0 || (p < 2.0 && xi == 0.0)) {
    throw error(errc::domain_error, "canonical strain outside the admissible range");
  }
  return std::pow(xi, 0.5 * p) / p;
}

double zeta_of_xi(double xi, double p) {
  require_branch(p);
  if (!(xi > 0.0)) {
    throw error(errc::domain_error, "canonical strain must be positive");
  }
  return 0.5 * std::pow(xi, 0.5 * (p - 2.0));
}

double legendre_conjugate(double zeta, double p, double eps) {
  require_branch(p);
  if (p < 2.0) {
    const double cap = 0.5 * lambda_cap(p, eps);
    if (!(zeta > 0.0) || zeta > cap * (1.0 + 1e-12)) {
      throw error(errc::domain_error,
                  "dual variable outside (0, eps^{p-2}/2] for p < 2");
    }
  } else if (zeta < 0.0) {
    throw error(errc::domain_error, "dual variable must be >= 0 for p > 2");
  }
  return (p - 2.0) / (2.0 * p) * std::pow(2.0 * zeta, p / (p - 2.0));
}

double lambda_cap(double p, double eps) {
  require_branch(p);
  if (p > 2.0) {
    throw error(errc::domain_error, "lambda cap exists only for p < 2");
  }
  if (!(eps > 0.0)) {
    throw error(errc::missing_regularization, "p < 2 requires positive epsilon");
  }
  return std::pow(eps, p - 2.0);
}

double dae_forward(double lam, double p, double eps) {
  require_branch(p);
  const double a = (2.0 * p - 2.0) / (p - 2.0);
  if (p > 2.0) {
    if (lam < 0.0) {
      throw error(errc::domain_error, "transport density must be >= 0 for p > 2");
    }
    return lam == 0.0 ? 0.0 : std::pow(lam, a);
  }
  const double cap = lambda_cap(p, eps);
  if (!(lam > 0.0) || lam > cap * (1.0 + 1e-12)) {
    throw error(errc::domain_error,
                "transport density outside (0, eps^{p-2}] for p < 2");
  }
  return std::pow(lam, a) - eps * eps * lam * lam;
}

double dae_invert(double theta_sq, double p, double eps) {
  require_branch(p);
  if (theta_sq < 0.0) {
    throw error(errc::domain_error, "squared flux magnitude must be >= 0");
  }
  if (p > 2.0) {
    return theta_sq == 0.0 ? 0.0
                           : std::pow(theta_sq, (p - 2.0) / (2.0 * p - 2.0));
  }
  const double cap = lambda_cap(p, eps);
  if (theta_sq == 0.0) return cap;  // E(eps^{p-2}) = 0 exactly

  // E decreases from +inf to 0 on (0, cap]; shrink the lower end until the
  // root is bracketed, then hand off to the monotone solver.
  double lo = cap;
  double f_lo = -theta_sq;
  for (int k = 0; k < 4096 && f_lo < 0.0; ++k) {
    lo *= 0.5;
    f_lo = dae_forward(lo, p, eps) - theta_sq;
  }
  if (f_lo < 0.0) {
    throw error(errc::convergence_failure, "failed to bracket the dual algebraic root");
  }
  RootBracket bracket{lo, cap, f_lo, -theta_sq};
  return solve_monotone(
      [&](double lam) { return dae_forward(lam, p, eps) - theta_sq; }, bracket,
      1e-14 * cap, 1e-14 * theta_sq);
}

CanonicalState canonical_state(double xi, double p) {
  CanonicalState s;
  s.xi = xi;
  s.zeta = zeta_of_xi(xi, p);
  s.lambda = 2.0 * s.zeta;
  return s;
}

}  // namespace plap
