#pragma once

#include "plap/error.hpp"

namespace plap {

/// Canonical triple at one point: strain xi = |grad u|^2 + chi(p) eps^2,
/// dual variable zeta = xi^{(p-2)/2} / 2, and transport density
/// lambda = 2 zeta.
struct CanonicalState {
  double xi = 0.0;
  double zeta = 0.0;
  double lambda = 0.0;
};

/// Stored strain energy density (|gamma|^2 + chi(p) eps^2)^{p/2} / p.
double stored_energy_density(double gamma_sq, double p, double eps);

/// Canonical energy Psi(xi) = xi^{p/2} / p.
double canonical_energy(double xi, double p);

/// Dual variable zeta(xi) = xi^{(p-2)/2} / 2 (the derivative of Psi);
/// strictly decreasing in xi for p < 2, strictly increasing for p > 2.
double zeta_of_xi(double xi, double p);

/// Legendre conjugate Psi*(zeta) = (p-2) (2 zeta)^{p/(p-2)} / (2p).
/// zeta must lie in the admissible range for the branch of p:
/// 0 < zeta <= eps^{p-2}/2 when p < 2, zeta >= 0 when p > 2.
double legendre_conjugate(double zeta, double p, double eps);

/// Upper end eps^{p-2} of the admissible transport-density interval
/// for p < 2 (where the forward map E vanishes).
double lambda_cap(double p, double eps);

/// Forward dual algebraic map
/// E(lambda) = lambda^{(2p-2)/(p-2)} - chi(p) eps^2 lambda^2,
/// strictly increasing on [0, inf) for p > 2 and strictly decreasing on
/// (0, eps^{p-2}] for p < 2. Arguments outside the monotone branch throw.
double dae_forward(double lam, double p, double eps);

/// Inverse of the dual algebraic map: the transport density lambda with
/// E(lambda) = theta_sq. Closed form theta_sq^{(p-2)/(2p-2)} for p > 2
/// (finite at theta = 0); monotone bracketed solve on (0, eps^{p-2}]
/// for p < 2. Always satisfies dae_forward(result) = theta_sq within
/// the solver tolerance.
double dae_invert(double theta_sq, double p, double eps);

/// Canonical triple induced by a strain value.
CanonicalState canonical_state(double xi, double p);

}  // namespace plap
