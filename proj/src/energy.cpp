#include "plap/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "plap/duality.hpp"

namespace plap {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

int chi_of(double p) { return p < 2.0 ? 1 : 0; }

}  // namespace

nlohmann::json to_json(const EnergyReport& report) {
  return {{"primal", report.primal},
          {"dual", report.dual},
          {"gap", report.gap},
          {"gap_rel", report.gap_rel},
          {"el_residual_norm", report.el_residual_norm},
          {"boundary_residual", report.boundary_residual},
          {"c_epsilon", report.c_epsilon}};
}

TestFunction::TestFunction(std::uint64_t seed, double r1, double r2, int modes)
    : r1_(r1), r2_(r2) {
  std::mt19937_64 gen(seed);
  amps_.resize(static_cast<std::size_t>(modes));
  for (auto& a : amps_) a = 2.0 * uniform_double(gen()) - 1.0;
}

double TestFunction::operator()(double r) const {
  const double t = (r - r1_) / (r2_ - r1_);
  double v = 0.0;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    v += amps_[k] * std::sin((static_cast<double>(k) + 1.0) * std::numbers::pi * t);
  }
  return v;
}

double TestFunction::derivative(double r) const {
  const double t = (r - r1_) / (r2_ - r1_);
  const double scale = std::numbers::pi / (r2_ - r1_);
  double v = 0.0;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    const double freq = static_cast<double>(k) + 1.0;
    v += amps_[k] * freq * scale * std::cos(freq * std::numbers::pi * t);
  }
  return v;
}

std::vector<QuadSample> sample_solution(const ProblemSpec& spec,
                                        const SolutionProfile& profile,
                                        QuadratureRule rule, bool need_u) {
  const auto cache = std::make_shared<const SourceCache>(spec);
  FluxField flux{profile.sigma * profile.c_epsilon, cache};
  const std::optional<double> rs = spec.p > 2.0 ? profile.r_star : std::nullopt;
  const auto xs = gauss_nodes(rule.order);
  const auto ws = gauss_weights(rule.order);

  std::vector<QuadSample> samples;
  samples.reserve(static_cast<std::size_t>(rule.panels + 64) * xs.size());
  const double r1 = spec.r_inner, r2 = spec.r_outer;
  double u_run = 0.0;
  for (int k = 0; k < rule.panels; ++k) {
    const double a = r1 + (r2 - r1) * k / rule.panels;
    const double b = (k + 1 == rule.panels) ? r2 : r1 + (r2 - r1) * (k + 1) / rule.panels;
    for (const auto& [lo, hi] : subdivide_panel(a, b, rs)) {
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        QuadSample s;
        s.r = mid + half * xs[i];
        s.w = half * ws[i];
        s.theta = flux.theta(s.r);
        s.lam = dae_invert(s.theta * s.theta, spec.p, spec.epsilon);
        s.du = du_dr_at(s.r, flux, spec.p, spec.epsilon);
        if (need_u) {
          s.u = u_run + integrate_du(flux, spec.p, spec.epsilon, lo, s.r,
                                     std::nullopt, rule.order);
        }
        samples.push_back(s);
      }
      if (need_u) {
        u_run += integrate_du(flux, spec.p, spec.epsilon, lo, hi, std::nullopt,
                              rule.order);
      }
    }
  }
  return samples;
}

double primal_energy(const ProblemSpec& spec, const SolutionProfile& profile,
                     QuadratureRule rule) {
  const auto samples = sample_solution(spec, profile, rule, /*need_u=*/true);
  const double omega = sphere_area(spec.dim);
  const double chi_eps_sq =
      chi_of(spec.p) ? spec.epsilon * spec.epsilon : 0.0;
  double total = 0.0;
  for (const auto& s : samples) {
    const double h = std::pow(s.du * s.du + chi_eps_sq, 0.5 * spec.p) / spec.p;
    total += s.w * (h - spec.source(s.r) * s.u) * ipow(s.r, spec.dim - 1);
  }
  return omega * total;
}

double primal_energy_nodal(const ProblemSpec& spec, const RadialGrid& grid,
                           std::span<const double> u) {
  if (static_cast<std::size_t>(grid.count()) != u.size() || u.size() < 3) {
    throw error(errc::grid_error, "nodal energy needs matching grid and >= 3 nodes");
  }
  const auto& r = grid.radii;
  const std::size_t n = u.size();
  std::vector<double> du(n);
  du[0] = (u[1] - u[0]) / (r[1] - r[0]);
  du[n - 1] = (u[n - 1] - u[n - 2]) / (r[n - 1] - r[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
    du[i] = (u[i + 1] * hm * hm - u[i - 1] * hp * hp + u[i] * (hp * hp - hm * hm)) /
            (hm * hp * (hm + hp));
  }
  const double chi_eps_sq = chi_of(spec.p) ? spec.epsilon * spec.epsilon : 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto node = [&](std::size_t j) {
      const double h = std::pow(du[j] * du[j] + chi_eps_sq, 0.5 * spec.p) / spec.p;
      return (h - spec.source(r[j]) * u[j]) * ipow(r[j], spec.dim - 1);
    };
    total += 0.5 * (r[i + 1] - r[i]) * (node(i) + node(i + 1));
  }
  return sphere_area(spec.dim) * total;
}

double dual_integrand(double theta_sq, double lam, double p, double eps) {
  if (lam <= 0.0) {
    if (p > 2.0 && lam == 0.0 && theta_sq == 0.0) return 0.0;
    throw error(errc::domain_error, "transport density must be positive");
  }
  const double chi_eps_sq = chi_of(p) ? eps * eps : 0.0;
  return -0.5 * (theta_sq / lam - chi_eps_sq * lam +
                 (p - 2.0) / p * std::pow(lam, p / (p - 2.0)));
}

double dual_energy(const ProblemSpec& spec, const SolutionProfile& profile,
                   QuadratureRule rule) {
  const auto samples = sample_solution(spec, profile, rule, /*need_u=*/false);
  const double omega = sphere_area(spec.dim);
  double total = 0.0;
  for (const auto& s : samples) {
    total += s.w * dual_integrand(s.theta * s.theta, s.lam, spec.p, spec.epsilon) *
             ipow(s.r, spec.dim - 1);
  }
  return omega * total;
}

double el_residual_norm(const ProblemSpec& spec, const SolutionProfile& profile) {
  const auto& r = profile.grid.radii;
  const std::size_t n = r.size();
  if (n < 3) throw error(errc::grid_error, "residual needs >= 3 nodes");
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = ipow(r[i], spec.dim - 1) * profile.lam[i] * profile.du_dr[i];
  }
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(spec.source(r[i]) * ipow(r[i], spec.dim - 1)));
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
    const double dq = (q[i + 1] * hm * hm - q[i - 1] * hp * hp +
                       q[i] * (hp * hp - hm * hm)) /
                      (hm * hp * (hm + hp));
    worst = std::max(worst,
                     std::abs(dq + spec.source(r[i]) * ipow(r[i], spec.dim - 1)));
  }
  return worst / scale;
}

EnergyReport duality_gap(const ProblemSpec& spec, const SolutionProfile& profile,
                         QuadratureRule rule) {
  const auto samples = sample_solution(spec, profile, rule, /*need_u=*/true);
  const double omega = sphere_area(spec.dim);
  const double chi_eps_sq = chi_of(spec.p) ? spec.epsilon * spec.epsilon : 0.0;
  double primal = 0.0, dual = 0.0;
  for (const auto& s : samples) {
    const double measure = ipow(s.r, spec.dim - 1);
    const double h = std::pow(s.du * s.du + chi_eps_sq, 0.5 * spec.p) / spec.p;
    primal += s.w * (h - spec.source(s.r) * s.u) * measure;
    dual += s.w * dual_integrand(s.theta * s.theta, s.lam, spec.p, spec.epsilon) *
            measure;
  }
  EnergyReport report;
  report.primal = omega * primal;
  report.dual = omega * dual;
  report.gap = report.primal - report.dual;
  report.gap_rel = std::abs(report.gap) / std::max(1.0, std::abs(report.primal));
  report.el_residual_norm = el_residual_norm(spec, profile);
  report.boundary_residual = std::abs(profile.u.back());
  report.c_epsilon = profile.c_epsilon;
  return report;
}

double second_variation_primal(const ProblemSpec& spec,
                               std::span<const QuadSample> samples,
                               const TestFunction& phi) {
  const double omega = sphere_area(spec.dim);
  const double chi_eps_sq = chi_of(spec.p) ? spec.epsilon * spec.epsilon : 0.0;
  double total = 0.0;
  for (const auto& s : samples) {
    const double xi = s.du * s.du + chi_eps_sq;
    if (xi == 0.0) continue;  // p > 2 flux zero: integrand limit is 0
    const double dphi = phi.derivative(s.r);
    const double cross = s.du * dphi;
    const double value = (spec.p - 2.0) * std::pow(xi, 0.5 * (spec.p - 4.0)) * cross * cross +
                         std::pow(xi, 0.5 * (spec.p - 2.0)) * dphi * dphi;
    total += s.w * value * ipow(s.r, spec.dim - 1);
  }
  return omega * total;
}

double second_variation_primal(const ProblemSpec& spec,
                               const SolutionProfile& profile,
                               const TestFunction& phi, QuadratureRule rule) {
  const auto samples = sample_solution(spec, profile, rule, /*need_u=*/false);
  return second_variation_primal(spec, samples, phi);
}

double second_variation_dual(const ProblemSpec& spec,
                             std::span<const QuadSample> samples,
                             const TestFunction& psi,
                             std::optional<double> r_star,
                             double exclusion_radius) {
  const double omega = sphere_area(spec.dim);
  double total = 0.0;
  for (const auto& s : samples) {
    if (r_star && std::abs(s.r - *r_star) <= exclusion_radius) continue;
    if (s.lam <= 0.0) continue;
    const double v = psi(s.r);
    const double bracket =
        s.theta * s.theta / (s.lam * s.lam * s.lam) +
        std::pow(s.lam, (4.0 - spec.p) / (spec.p - 2.0)) / (spec.p - 2.0);
    total += s.w * (-4.0) * bracket * v * v * ipow(s.r, spec.dim - 1);
  }
  return omega * total;
}

double second_variation_dual(const ProblemSpec& spec,
                             const SolutionProfile& profile,
                             const TestFunction& psi, double exclusion_radius,
                             QuadratureRule rule) {
  const auto samples = sample_solution(spec, profile, rule, /*need_u=*/false);
  return second_variation_dual(spec, samples, psi, profile.r_star,
                               exclusion_radius);
}

ProbeSummary minimality_probes(const ProblemSpec& spec,
                               const SolutionProfile& profile, int count,
                               std::uint64_t seed, QuadratureRule rule) {
  const auto samples = sample_solution(spec, profile, rule, /*need_u=*/true);
  const double omega = sphere_area(spec.dim);
  const double chi_eps_sq = chi_of(spec.p) ? spec.epsilon * spec.epsilon : 0.0;
  double u_scale = 0.0;
  for (double v : profile.u) u_scale = std::max(u_scale, std::abs(v));
  const double amp = 1e-2 * std::max(u_scale, 1e-6);

  const auto energy_shifted = [&](const TestFunction& v, double factor) {
    double total = 0.0;
    for (const auto& s : samples) {
      const double du = s.du + factor * v.derivative(s.r);
      const double uu = s.u + factor * v(s.r);
      const double h = std::pow(du * du + chi_eps_sq, 0.5 * spec.p) / spec.p;
      total += s.w * (h - spec.source(s.r) * uu) * ipow(s.r, spec.dim - 1);
    }
    return omega * total;
  };

  double base = 0.0;
  for (const auto& s : samples) {
    const double h = std::pow(s.du * s.du + chi_eps_sq, 0.5 * spec.p) / spec.p;
    base += s.w * (h - spec.source(s.r) * s.u) * ipow(s.r, spec.dim - 1);
  }
  base *= omega;

  ProbeSummary summary;
  summary.count = count;
  summary.worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    TestFunction raw(seed + static_cast<std::uint64_t>(k), spec.r_inner, spec.r_outer);
    double peak = 0.0;
    for (int j = 0; j <= 64; ++j) {
      const double r = spec.r_inner + (spec.r_outer - spec.r_inner) * j / 64.0;
      peak = std::max(peak, std::abs(raw(r)));
    }
    const double factor = peak > 0.0 ? amp / peak : 0.0;
    const double perturbed = energy_shifted(raw, factor);
    summary.worst_margin = std::min(summary.worst_margin, perturbed - base);
  }
  return summary;
}

ProbeSummary dual_extremality_probes(const ProblemSpec& spec,
                                     const SolutionProfile& profile, int count,
                                     std::uint64_t seed, QuadratureRule rule) {
  const auto samples = sample_solution(spec, profile, rule, /*need_u=*/false);
  const double omega = sphere_area(spec.dim);
  double lam_max = 0.0;
  for (const auto& s : samples) lam_max = std::max(lam_max, s.lam);
  const double amp = 0.05 * lam_max;
  const bool lower_branch = spec.p < 2.0;
  const double cap = lower_branch ? lambda_cap(spec.p, spec.epsilon) : 0.0;
  const double floor = lower_branch ? 1e-6 * cap : 1e-8 * lam_max;

  const auto dual_with = [&](const TestFunction* psi) {
    double total = 0.0;
    for (const auto& s : samples) {
      double lam = s.lam;
      if (psi) {
        lam += amp * (*psi)(s.r);
        lam = std::max(lam, floor);
        if (lower_branch) lam = std::min(lam, cap);
      }
      if (lam <= 0.0) continue;  // flux zero with zero perturbation (p > 2)
      total += s.w * dual_integrand(s.theta * s.theta, lam, spec.p, spec.epsilon) *
               ipow(s.r, spec.dim - 1);
    }
    return omega * total;
  };

  // Base value must use the same guarded evaluation for consistency.
  double base = 0.0;
  {
    double total = 0.0;
    for (const auto& s : samples) {
      if (s.lam <= 0.0) continue;
      total += s.w * dual_integrand(s.theta * s.theta, s.lam, spec.p, spec.epsilon) *
               ipow(s.r, spec.dim - 1);
    }
    base = omega * total;
  }

  ProbeSummary summary;
  summary.count = count;
  summary.worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count; ++k) {
    TestFunction psi(seed + 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(k),
                     spec.r_inner, spec.r_outer);
    const double perturbed = dual_with(&psi);
    const double margin = lower_branch ? perturbed - base : base - perturbed;
    summary.worst_margin = std::min(summary.worst_margin, margin);
  }
  return summary;
}

}  // namespace plap
