#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "plap/problem.hpp"
#include "plap/radial_solver.hpp"

namespace plap {

/// Certification summary for one solve. gap_rel is |primal - dual|
/// normalized by max(1, |primal|); el_residual_norm is the max-norm
/// finite-difference residual of (r^{n-1} lambda u')' + f r^{n-1}
/// relative to the source scale max |f r^{n-1}|; boundary_residual is
/// |u(R2)|.
struct EnergyReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double gap_rel = 0.0;
  double el_residual_norm = 0.0;
  double boundary_residual = 0.0;
  double c_epsilon = 0.0;
};

nlohmann::json to_json(const EnergyReport& report);

/// Smooth test function vanishing at both radii: a seeded random sine
/// series sum_k a_k sin(k pi t) with t = (r - R1)/(R2 - R1). Derivatives
/// are analytic, so quadrature of variational forms stays exact-grade.
class TestFunction {
 public:
  TestFunction(std::uint64_t seed, double r1, double r2, int modes = 8);

  double operator()(double r) const;
  double derivative(double r) const;

 private:
  double r1_, r2_;
  std::vector<double> amps_;
};

/// One quadrature node along the solution: abscissa, weight (includes the
/// panel jacobian, not the r^{n-1} factor), and the solution fields there.
struct QuadSample {
  double r = 0.0;
  double w = 0.0;
  double u = 0.0;
  double du = 0.0;
  double lam = 0.0;
  double theta = 0.0;
};

/// Samples the analytic solution at composite Gauss nodes over [R1, R2]
/// (rule.panels base panels, kink-aware subdivision for p > 2). With
/// need_u the running integral of du is carried along so that pointwise
/// u values are available to integrands.
std::vector<QuadSample> sample_solution(const ProblemSpec& spec,
                                        const SolutionProfile& profile,
                                        QuadratureRule rule = {5, 1024},
                                        bool need_u = true);

/// Potential energy omega * int [H(u'^2) - f u] r^{n-1} dr of the
/// analytic profile.
double primal_energy(const ProblemSpec& spec, const SolutionProfile& profile,
                     QuadratureRule rule = {5, 1024});

/// Same functional for a foreign nodal function: derivatives by centered
/// differences (one-sided at the ends), trapezoidal accumulation.
double primal_energy_nodal(const ProblemSpec& spec, const RadialGrid& grid,
                           std::span<const double> u);

/// Pure complementary energy
/// -(1/2) omega * int [theta^2/lambda - chi eps^2 lambda
///                     + (p-2)/p lambda^{p/(p-2)}] r^{n-1} dr.
/// At an interior flux zero with p > 2 the integrand limit is 0.
double dual_energy(const ProblemSpec& spec, const SolutionProfile& profile,
                   QuadratureRule rule = {5, 1024});

/// Pointwise dual integrand (pre-weighting); exposed for direct checks.
double dual_integrand(double theta_sq, double lam, double p, double eps);

/// Finite-difference Euler-Lagrange residual of the profile on its own
/// grid, relative to the source scale.
double el_residual_norm(const ProblemSpec& spec, const SolutionProfile& profile);

/// Full certification report: independent primal and dual evaluations,
/// their gap, the EL residual, and the boundary defect.
EnergyReport duality_gap(const ProblemSpec& spec, const SolutionProfile& profile,
                         QuadratureRule rule = {5, 1024});

/// Second variation of the potential energy at the profile in direction
/// phi (vanishing at both ends): must be >= 0 for every admissible p.
double second_variation_primal(const ProblemSpec& spec,
                               std::span<const QuadSample> samples,
                               const TestFunction& phi);
double second_variation_primal(const ProblemSpec& spec,
                               const SolutionProfile& profile,
                               const TestFunction& phi,
                               QuadratureRule rule = {3, 256});

/// Second variation of the complementary energy in direction psi:
/// >= 0 for p < 2 and <= 0 for p > 2. For p > 2 the integrand is singular
/// at the flux zero, so samples within exclusion_radius of r* are skipped
/// (the exclusion is part of the certification record).
double second_variation_dual(const ProblemSpec& spec,
                             std::span<const QuadSample> samples,
                             const TestFunction& psi,
                             std::optional<double> r_star,
                             double exclusion_radius);
double second_variation_dual(const ProblemSpec& spec,
                             const SolutionProfile& profile,
                             const TestFunction& psi, double exclusion_radius,
                             QuadratureRule rule = {3, 256});

struct ProbeSummary {
  int count = 0;
  double worst_margin = 0.0;  // min over probes of the inequality slack
};

/// Minimality probes: primal energy at ū + v for seeded random smooth
/// perturbations v vanishing at the boundary. worst_margin is
/// min(primal(ū+v) - primal(ū)); certification requires it >= -1e-9.
ProbeSummary minimality_probes(const ProblemSpec& spec,
                               const SolutionProfile& profile, int count,
                               std::uint64_t seed,
                               QuadratureRule rule = {5, 512});

/// Dual extremality probes: complementary energy at perturbed admissible
/// transport densities. worst_margin is min(perturbed - base) for p < 2
/// (dual minimum) and min(base - perturbed) for p > 2 (dual maximum).
ProbeSummary dual_extremality_probes(const ProblemSpec& spec,
                                     const SolutionProfile& profile, int count,
                                     std::uint64_t seed,
                                     QuadratureRule rule = {5, 512});

}  // namespace plap
