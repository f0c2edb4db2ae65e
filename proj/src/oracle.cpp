#include "plap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

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

// Element data shared by the energy, gradient, and Hessian assembly.
struct ElementMesh {
  std::vector<double> h;     // element widths
  std::vector<double> mw;    // omega * h * midpoint^{n-1}
  std::vector<double> mpow;  // omega * midpoint^{n-1}
  std::vector<double> load;  // omega * f(r_j) r_j^{n-1} (h_{j-1}+h_j)/2
};

ElementMesh build_mesh(const ProblemSpec& spec, const RadialGrid& grid) {
  const auto& r = grid.radii;
  const std::size_t n = r.size();
  const double omega = sphere_area(spec.dim);
  ElementMesh mesh;
  mesh.h.resize(n - 1);
  mesh.mw.resize(n - 1);
  mesh.mpow.resize(n - 1);
  mesh.load.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mesh.h[i] = r[i + 1] - r[i];
    const double mid = 0.5 * (r[i] + r[i + 1]);
    mesh.mpow[i] = omega * ipow(mid, spec.dim - 1);
    mesh.mw[i] = mesh.h[i] * mesh.mpow[i];
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    mesh.load[j] = omega * spec.source(r[j]) * ipow(r[j], spec.dim - 1) *
                   0.5 * (mesh.h[j - 1] + mesh.h[j]);
  }
  return mesh;
}

// Stored energy H(s^2), its derivative in s, and the exact second
// derivative used as the Newton Hessian weight. p = 2 is handled by its
// closed forms so the power expressions never see 0^negative.
struct StoredEnergy {
  double p;
  double chi_eps_sq;

  double value(double s) const {
    if (p == 2.0) return 0.5 * s * s;
    return std::pow(s * s + chi_eps_sq, 0.5 * p) / p;
  }
  double slope(double s) const {
    if (p == 2.0) return s;
    return s * std::pow(s * s + chi_eps_sq, 0.5 * (p - 2.0));
  }
  double curvature(double s) const {
    double a;
    if (p == 2.0) {
      a = 1.0;
    } else if (p < 2.0) {
      const double xi = s * s + chi_eps_sq;
      a = std::pow(xi, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + chi_eps_sq);
    } else {
      a = (p - 1.0) * std::pow(s * s, 0.5 * (p - 2.0));
    }
    return std::max(a, 1e-12);
  }
};

double energy_of(const ElementMesh& mesh, const StoredEnergy& store,
                 std::span<const double> u) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double s = (u[i + 1] - u[i]) / mesh.h[i];
    total += mesh.mw[i] * store.value(s);
  }
  for (std::size_t j = 1; j + 1 < u.size(); ++j) total -= mesh.load[j] * u[j];
  return total;
}

// Solves the symmetric positive-definite tridiagonal system in place.
// diag/off are consumed; rhs becomes the solution.
void thomas_solve(std::vector<double>& diag, std::vector<double>& off,
                  std::vector<double>& rhs) {
  const std::size_t m = rhs.size();
  for (std::size_t i = 1; i < m; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[m - 1] /= diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
  }
}

}  // namespace

double discrete_energy(const ProblemSpec& spec, const RadialGrid& grid,
                       std::span<const double> u) {
  if (grid.count() < 3 || u.size() != static_cast<std::size_t>(grid.count())) {
    throw error(errc::grid_error,
                "discrete energy needs >= 3 nodes and matching value count");
  }
  const int chi = spec.p < 2.0 ? 1 : 0;
  const StoredEnergy store{spec.p, chi ? spec.epsilon * spec.epsilon : 0.0};
  return energy_of(build_mesh(spec, grid), store, u);
}

DiscreteEnergyState minimize_discrete_energy(const ProblemSpec& spec,
                                             const RadialGrid& grid) {
  validate(spec);
  if (grid.count() < 3) {
    throw error(errc::grid_error, "minimization needs at least one interior node");
  }
  check_grid(grid, spec.r_inner, spec.r_outer);

  const std::size_t n = grid.radii.size();
  const std::size_t m = n - 2;  // interior unknowns
  const int chi = spec.p < 2.0 ? 1 : 0;
  const StoredEnergy store{spec.p, chi ? spec.epsilon * spec.epsilon : 0.0};
  const ElementMesh mesh = build_mesh(spec, grid);

  double load_scale = 0.0;
  for (double l : mesh.load) load_scale = std::max(load_scale, std::abs(l));
  const double grad_tol = 1e-10 * load_scale;

  std::vector<double> u(n, 0.0);
  std::vector<double> slopes(n - 1), grad(m), diag(m), off(m > 0 ? m - 1 : 0);

  const auto fill_slopes = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      slopes[i] = (v[i + 1] - v[i]) / mesh.h[i];
    }
  };
  const auto fill_gradient = [&]() {
    for (std::size_t j = 0; j < m; ++j) {
      const double flux_left = mesh.mpow[j] * store.slope(slopes[j]);
      const double flux_right = mesh.mpow[j + 1] * store.slope(slopes[j + 1]);
      grad[j] = flux_left - flux_right - mesh.load[j + 1];
    }
  };
  const auto fill_hessian = [&]() {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      // reuse slopes[] as curvature weights w_i = omega m^{n-1} A(s_i)/h_i
      slopes[i] = mesh.mpow[i] * store.curvature(slopes[i]) / mesh.h[i];
    }
    for (std::size_t j = 0; j < m; ++j) diag[j] = slopes[j] + slopes[j + 1];
    for (std::size_t j = 0; j + 1 < m; ++j) off[j] = -slopes[j + 1];
  };

  // Initial iterate: the p = 2 minimizer, a single linear solve. For p = 2
  // this already is the answer and Newton merely certifies the gradient.
  {
    std::vector<double> w(n - 1), rhs(m);
    for (std::size_t i = 0; i + 1 < n; ++i) w[i] = mesh.mpow[i] / mesh.h[i];
    for (std::size_t j = 0; j < m; ++j) {
      diag[j] = w[j] + w[j + 1];
      rhs[j] = mesh.load[j + 1];
    }
    for (std::size_t j = 0; j + 1 < m; ++j) off[j] = -w[j + 1];
    thomas_solve(diag, off, rhs);
    for (std::size_t j = 0; j < m; ++j) u[j + 1] = rhs[j];
  }

  DiscreteEnergyState state;
  state.grid = grid;
  double objective = energy_of(mesh, store, u);
  double grad_norm = 0.0;
  int iterations = 0;

  for (int it = 0; it <= 500; ++it) {
    fill_slopes(u);
    fill_gradient();
    grad_norm = 0.0;
    for (double g : grad) grad_norm = std::max(grad_norm, std::abs(g));
    if (grad_norm <= grad_tol || it == 500) {
      iterations = it;
      break;
    }

    fill_hessian();
    std::vector<double> step(grad);
    for (double& g : step) g = -g;
    thomas_solve(diag, off, step);

    double directional = 0.0;
    for (std::size_t j = 0; j < m; ++j) directional += grad[j] * step[j];

    double t = 1.0;
    std::vector<double> trial(u);
    for (;;) {
      for (std::size_t j = 0; j < m; ++j) trial[j + 1] = u[j + 1] + t * step[j];
      const double trial_objective = energy_of(mesh, store, trial);
      if (trial_objective <= objective + 1e-4 * t * directional) {
        u.swap(trial);
        objective = trial_objective;
        break;
      }
      t *= 0.5;
      if (t < 1e-14) {
        throw error(errc::convergence_failure,
                    "line search stalled at iteration " + std::to_string(it) +
                        " (objective " + std::to_string(objective) +
                        ", gradient max-norm " + std::to_string(grad_norm) + ")");
      }
    }
  }

  state.u = std::move(u);
  state.objective = objective;
  state.gradient_norm = grad_norm;
  state.iterations = iterations;
  return state;
}

std::function<double(double)> poisson_closed_form(const ProblemSpec& spec) {
  if (spec.p != 2.0) {
    throw error(errc::unsupported_oracle,
                "closed form exists only for p = 2, got p = " +
                    std::to_string(spec.p));
  }
  if (spec.source.kind() != source_kind::constant) {
    throw error(errc::unsupported_oracle,
                "closed form requires a constant source term");
  }
  const double c = spec.source.value();
  const double r1 = spec.r_inner, r2 = spec.r_outer;
  const int n = spec.dim;
  if (n == 2) {
    const double a = (r2 * r2 - r1 * r1) / (4.0 * std::log(r2 / r1));
    return [c, r1, a](double r) {
      return c * ((r1 * r1 - r * r) / 4.0 + a * std::log(r / r1));
    };
  }
  const double g_outer = std::pow(r1, 2.0 - n) - std::pow(r2, 2.0 - n);
  const double a = (r2 * r2 - r1 * r1) / (2.0 * n) / g_outer;
  return [c, r1, n, a](double r) {
    return c * ((r1 * r1 - r * r) / (2.0 * n) +
                a * (std::pow(r1, 2.0 - n) - std::pow(r, 2.0 - n)));
  };
}

ProfileDistance compare(const RadialGrid& grid_a, std::span<const double> u_a,
                        const RadialGrid& grid_b, std::span<const double> u_b,
                        const ProblemSpec& spec) {
  if (u_a.size() != grid_a.radii.size() || u_b.size() != grid_b.radii.size() ||
      u_a.size() < 2 || u_b.size() < 2) {
    throw error(errc::grid_error, "compare needs grids matching their values");
  }

  ProfileDistance result;
  const RadialGrid* common = &grid_a;
  std::vector<double> va(u_a.begin(), u_a.end());
  std::vector<double> vb(u_b.begin(), u_b.end());

  if (grid_a.radii != grid_b.radii) {
    result.interpolated = true;
    const bool a_finer = grid_a.radii.size() >= grid_b.radii.size();
    common = a_finer ? &grid_a : &grid_b;
    const RadialGrid& coarse = a_finer ? grid_b : grid_a;
    const std::vector<double>& cv = a_finer ? vb : va;
    std::vector<double> mapped(common->radii.size());
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      const double r = common->radii[i];
      auto it = std::upper_bound(coarse.radii.begin(), coarse.radii.end(), r);
      std::size_t k = static_cast<std::size_t>(it - coarse.radii.begin());
      if (k == 0) k = 1;
      if (k >= coarse.radii.size()) k = coarse.radii.size() - 1;
      const double t =
          (r - coarse.radii[k - 1]) / (coarse.radii[k] - coarse.radii[k - 1]);
      mapped[i] = cv[k - 1] + t * (cv[k] - cv[k - 1]);
    }
    if (a_finer) {
      vb = std::move(mapped);
    } else {
      va = std::move(mapped);
    }
  }

  const auto& r = common->radii;
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    result.sup = std::max(result.sup, std::abs(va[i] - vb[i]));
  }
  const double omega = sphere_area(spec.dim);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = r[i + 1] - r[i];
    const double ds = (va[i + 1] - va[i]) / h - (vb[i + 1] - vb[i]) / h;
    const double mid = 0.5 * (r[i] + r[i + 1]);
    total += omega * h * ipow(mid, spec.dim - 1) *
             std::pow(std::abs(ds), spec.p);
  }
  result.seminorm = std::pow(total, 1.0 / spec.p);
  return result;
}

SolutionProfile to_profile(const ProblemSpec& spec,
                           const DiscreteEnergyState& state) {
  const auto& r = state.grid.radii;
  const std::size_t n = r.size();
  SolutionProfile profile;
  profile.grid = state.grid;
  profile.u = state.u;
  profile.du_dr.resize(n);
  profile.lam.resize(n);
  profile.F_vals.resize(n);
  profile.theta_abs.resize(n);
  profile.sigma = validate(spec);

  const auto& u = state.u;
  profile.du_dr[0] = (u[1] - u[0]) / (r[1] - r[0]);
  profile.du_dr[n - 1] = (u[n - 1] - u[n - 2]) / (r[n - 1] - r[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
    profile.du_dr[i] =
        (u[i + 1] * hm * hm - u[i - 1] * hp * hp + u[i] * (hp * hp - hm * hm)) /
        (hm * hp * (hm + hp));
  }
  const double chi_eps_sq =
      spec.p < 2.0 ? spec.epsilon * spec.epsilon : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double du = profile.du_dr[i];
    const double lam =
        spec.p == 2.0 ? 1.0
                      : std::pow(du * du + chi_eps_sq, 0.5 * (spec.p - 2.0));
    profile.lam[i] = lam;
    const double theta = lam * du;
    profile.F_vals[i] = theta / r[i];
    profile.theta_abs[i] = std::abs(theta);
  }
  return profile;
}

}  // namespace plap
