#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "plap/radial_solver.hpp"

using namespace plap;

namespace {

ProblemSpec constant_spec(double p, int n, double eps, double f_val) {
  ProblemSpec spec;
  spec.p = p;
  spec.dim = n;
  spec.epsilon = eps;
  spec.source = SourceTerm::constant(f_val);
  return spec;
}

// -(1 + r^2) sampled densely enough that the interpolant is transparent
// at the tolerances used below.
ProblemSpec table_spec(int n, int knots = 4097, double flip = 1.0) {
  std::vector<double> r(static_cast<std::size_t>(knots)), f(r.size());
  for (int i = 0; i < knots; ++i) {
    r[static_cast<std::size_t>(i)] = 1.0 + static_cast<double>(i) / (knots - 1);
    f[static_cast<std::size_t>(i)] =
        flip * -(1.0 + r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)]);
  }
  ProblemSpec spec;
  spec.p = 3.0;
  spec.dim = n;
  spec.source = SourceTerm::table(std::move(r), std::move(f));
  return spec;
}

// Grid with one interior node moved onto a target radius, so nodal values
// can be compared against pointwise reference data.
RadialGrid grid_through(double target, int count) {
  RadialGrid grid = make_uniform_grid(1.0, 2.0, count);
  std::size_t best = 1;
  for (std::size_t i = 1; i + 1 < grid.radii.size(); ++i) {
    if (std::abs(grid.radii[i] - target) < std::abs(grid.radii[best] - target)) {
      best = i;
    }
  }
  grid.radii[best] = target;
  return grid;
}

}  // namespace

TEST_SUITE("radial_solver") {

TEST_CASE("source cache integrates the weighted source") {
  SourceCache cache(constant_spec(3.0, 2, 0.0, 1.0));
  CHECK(cache.g(1.0) == 0.0);
  for (double r : {1.1, 1.37, 1.5, 1.80001, 2.0}) {
    CHECK(cache.g(r) == doctest::Approx((r * r - 1.0) / 2.0).epsilon(1e-13));
  }
  CHECK(cache.g_total() == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(cache.source(1.7) == 1.0);
  CHECK(cache.r1() == 1.0);
  CHECK(cache.r2() == 2.0);
  CHECK(cache.dim() == 2);

  // table source: G(r) = -[(r^3-1)/3 + (r^5-1)/5] for f = -(1+r^2), n = 3
  SourceCache tab(table_spec(3));
  for (double r : {1.25, 1.5, 1.75, 2.0}) {
    const double exact =
        -((r * r * r - 1.0) / 3.0 + (std::pow(r, 5.0) - 1.0) / 5.0);
    CHECK(tab.g(r) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("flux satisfies its defining algebraic identity") {
  const ProblemSpec spec = constant_spec(3.0, 2, 0.0, 1.0);
  const FluxField flux = build_flux(spec, 0.7);
  for (double r : {1.0, 1.2, 1.482, 1.9, 2.0}) {
    CHECK(flux.f_at(r) * r * r + flux.g(r) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(flux.theta(r) == doctest::Approx(flux.f_at(r) * r).epsilon(1e-15));
  }

  // zero source: F = c / r^n exactly
  const FluxField free_flux = build_flux(constant_spec(3.0, 2, 0.0, 0.0), 1.0);
  for (double r : {1.0, 1.5, 2.0}) {
    CHECK(free_flux.f_at(r) == doctest::Approx(1.0 / (r * r)).epsilon(1e-15));
  }
}

TEST_CASE("flux coefficient solves the transport balance") {
  // F' + n F / r + f / r = 0, checked with centered differences
  const FluxField flux = build_flux(constant_spec(3.0, 2, 0.0, 1.0), 0.9);
  const double h = 5e-4;
  for (double r : {1.1, 1.4826, 1.77}) {
    const double dF = (flux.f_at(r + h) - flux.f_at(r - h)) / (2.0 * h);
    CHECK(std::abs(dF + 2.0 * flux.f_at(r) / r + 1.0 / r) <= 1e-5);
  }
}

TEST_CASE("radial derivative through the dual map") {
  const ProblemSpec free3 = constant_spec(3.0, 2, 0.0, 0.0);
  const FluxField zero = build_flux(free3, 0.0);
  CHECK(du_dr_at(1.5, zero, 3.0, 0.0) == 0.0);

  const FluxField four = build_flux(free3, 4.0);  // theta(1) = 4
  CHECK(du_dr_at(1.0, four, 3.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(du_dr_at(1.0, four, 3.0, 0.0) ==
        -du_dr_at(1.0, build_flux(free3, -4.0), 3.0, 0.0));

  // p < 2: theta(1)^2 = 0.99 puts lambda exactly at 1
  const FluxField sub = build_flux(free3, std::sqrt(0.99));
  CHECK(lambda_at(1.0, sub, 1.5, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(du_dr_at(1.0, sub, 1.5, 0.1) ==
        doctest::Approx(std::sqrt(0.99)).epsilon(1e-12));
}

TEST_CASE("interior flux zero") {
  const ProblemSpec spec = constant_spec(3.0, 2, 0.0, 1.0);

  // c - (r^2 - 1)/2 vanishes at r = sqrt(2c + 1)
  const FluxField flux = build_flux(spec, 0.6);
  const auto rs = flux_zero(flux);
  REQUIRE(rs.has_value());
  CHECK(*rs == doctest::Approx(std::sqrt(2.2)).epsilon(1e-12));

  CHECK_FALSE(flux_zero(build_flux(spec, 2.0)).has_value());  // F > 0 throughout

  // exact boundary zero: f = 0 and c = 0 make F vanish identically
  const auto edge = flux_zero(build_flux(constant_spec(3.0, 2, 0.0, 0.0), 0.0));
  REQUIRE(edge.has_value());
  CHECK(*edge == 1.0);
}

TEST_CASE("panel subdivision around a kink") {
  using Panels = std::vector<std::pair<double, double>>;
  const Panels plain = subdivide_panel(1.0, 1.5, std::nullopt);
  REQUIRE(plain.size() == 1);
  CHECK(plain[0] == std::pair{1.0, 1.5});
  CHECK(subdivide_panel(1.0, 1.5, 2.1).size() == 1);  // kink a full length away
  // a kink just beyond an edge still dominates the integrand's derivatives
  // inside the panel, so the decomposition contracts toward that edge
  const Panels near_right = subdivide_panel(1.0, 1.5, 1.7);
  CHECK(near_right.size() > 10);
  CHECK(near_right.front().first == 1.0);
  CHECK(near_right.back().second == 1.5);
  CHECK(near_right.back().second - near_right.back().first <
        near_right.front().second - near_right.front().first);

  const Panels split = subdivide_panel(1.0, 1.5, 1.25);
  REQUIRE(split.size() > 10);
  CHECK(split.front().first == 1.0);
  CHECK(split.back().second == 1.5);
  double sum = 0.0;
  bool kink_is_edge = false;
  for (std::size_t i = 0; i < split.size(); ++i) {
    CHECK(split[i].second > split[i].first);
    if (i > 0) CHECK(split[i].first == split[i - 1].second);
    if (split[i].first == 1.25) kink_is_edge = true;
    sum += split[i].second - split[i].first;
  }
  CHECK(kink_is_edge);
  CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));

  // kink at the boundary: graded on one side only
  const Panels left = subdivide_panel(1.0, 1.5, 1.0);
  CHECK(left.size() > 10);
  CHECK(left.front().first == 1.0);
  CHECK(left.back().second == 1.5);
}

TEST_CASE("derivative integration matches a closed form") {
  // f = 0, p = 3, c = 4: du/dr = (4/r)^{1/2}, integral = 4(sqrt 2 - 1)
  const FluxField flux = build_flux(constant_spec(3.0, 2, 0.0, 0.0), 4.0);
  double total = 0.0;
  for (int k = 0; k < 8; ++k) {
    total += integrate_du(flux, 3.0, 0.0, 1.0 + k / 8.0, 1.0 + (k + 1) / 8.0,
                          std::nullopt);
  }
  CHECK(total == doctest::Approx(4.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-10));
}

TEST_CASE("boundary mismatch brackets and orders the shooting constant") {
  const ProblemSpec spec = constant_spec(3.0, 2, 0.0, 1.0);
  CHECK(shooting_mismatch(spec, 1e-6) < 0.0);
  CHECK(shooting_mismatch(spec, 10.0) > 0.0);
  const double m4 = shooting_mismatch(spec, 0.4);
  const double m6 = shooting_mismatch(spec, 0.6);
  const double m8 = shooting_mismatch(spec, 0.8);
  CHECK(m4 < m6);
  CHECK(m6 < m8);
  CHECK_THROWS_AS(shooting_mismatch(spec, 0.0), const error&);
  CHECK_THROWS_AS(shooting_mismatch(spec, -1.0), const error&);
}

TEST_CASE("shooting constants against the reference solver") {
  // reference values from a high-precision independent solve
  const ShootingSolve s3 = solve_constant_detail(constant_spec(3.0, 2, 0.0, 1.0));
  CHECK(s3.c_epsilon == doctest::Approx(0.5991619355601259).epsilon(1e-9));
  CHECK_FALSE(s3.fallback_scan_used);
  CHECK(s3.tol_f > 0.0);

  CHECK(solve_constant(constant_spec(1.5, 2, 0.1, 1.0)) ==
        doctest::Approx(0.567830789537545).epsilon(1e-9));
  CHECK(solve_constant(constant_spec(1.2, 2, 0.05, 1.0)) ==
        doctest::Approx(0.5662857338586742).epsilon(1e-9));
  CHECK(solve_constant(constant_spec(8.0, 2, 0.0, 1.0)) ==
        doctest::Approx(0.6163813966619595).epsilon(1e-8));
  CHECK(solve_constant(table_spec(3)) ==
        doctest::Approx(2.0236592304341791).epsilon(1e-8));

  CHECK_THROWS_AS(solve_constant(constant_spec(2.0, 2, 0.0, 1.0)), const error&);
}

TEST_CASE("sampled solution satisfies the boundary and sign structure") {
  const ProblemSpec spec = constant_spec(3.0, 2, 0.0, 1.0);
  const SolutionProfile profile =
      evaluate_solution(spec, make_chebyshev_grid(1.0, 2.0, 257));

  CHECK(profile.u.front() == 0.0);
  // The outer defect combines the shooting tolerance with the difference
  // between the solve-time and grid-time quadratures; the wide mid-annulus
  // Chebyshev intervals put it near 1e-9 here, inside the certification
  // bound of 1e-8 relative to the solution scale (~0.24).
  CHECK(std::abs(profile.u.back()) <= 1e-8 * 0.24);
  CHECK(profile.sigma == 1);
  REQUIRE(profile.r_star.has_value());
  CHECK(*profile.r_star == doctest::Approx(1.4826745668285579).epsilon(1e-9));
  CHECK(profile.c_epsilon == doctest::Approx(0.5991619355601259).epsilon(1e-9));

  double max_u = 0.0;
  for (std::size_t i = 0; i < profile.u.size(); ++i) {
    CHECK(profile.sigma * profile.u[i] >= -1e-12);
    max_u = std::max(max_u, std::abs(profile.u[i]));
    // du * lambda = theta for p > 2 wherever both are sampled
    const double th = profile.F_vals[i] * profile.grid.radii[i];
    CHECK(std::abs(profile.du_dr[i] * profile.lam[i] - th) <= 1e-12);
    CHECK(profile.theta_abs[i] == doctest::Approx(std::abs(th)).epsilon(1e-15));
  }
  CHECK(max_u > 0.1);
}

TEST_CASE("solution maxima at the flux zero match the reference solver") {
  struct Case {
    ProblemSpec spec;
    double u_peak;
    double tol;
  };
  const Case cases[] = {
      {constant_spec(3.0, 2, 0.0, 1.0), 0.237361212799, 1e-8},
      {constant_spec(1.5, 2, 0.1, 1.0), 0.0541863830588, 1e-8},
      {constant_spec(1.2, 2, 0.05, 1.0), 0.01434638017, 1e-7},
      {constant_spec(8.0, 2, 0.0, 1.0), 0.397074731309, 1e-8},
      {table_spec(3), 0.433388514215, 1e-7},
  };
  for (const auto& c : cases) {
    CAPTURE(c.spec.p);
    const double C = solve_constant(c.spec);
    const int sigma = validate(c.spec);
    const auto rs = flux_zero(build_flux(c.spec, sigma * C));
    REQUIRE(rs.has_value());

    const RadialGrid grid = grid_through(*rs, 257);
    const SolutionProfile profile = evaluate_solution(c.spec, grid);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < profile.u.size(); ++i) {
      if (sigma * profile.u[i] > sigma * profile.u[arg]) arg = i;
    }
    CHECK(profile.grid.radii[arg] == *rs);
    CHECK(std::abs(profile.u[arg]) ==
          doctest::Approx(c.u_peak).epsilon(c.tol));
  }
}

TEST_CASE("negating the source mirrors the solution") {
  struct Pair {
    ProblemSpec plus, minus;
  };
  const Pair pairs[] = {
      {constant_spec(3.0, 2, 0.0, 1.0), constant_spec(3.0, 2, 0.0, -1.0)},
      {constant_spec(1.5, 2, 0.1, 1.0), constant_spec(1.5, 2, 0.1, -1.0)},
      {table_spec(3, 4097, 1.0), table_spec(3, 4097, -1.0)},
  };
  const RadialGrid grid = make_uniform_grid(1.0, 2.0, 129);
  for (const auto& pr : pairs) {
    CAPTURE(pr.plus.p);
    const SolutionProfile a = evaluate_solution(pr.plus, grid);
    const SolutionProfile b = evaluate_solution(pr.minus, grid);
    CHECK(a.sigma == -b.sigma);
    double scale = 0.0;
    for (double v : a.u) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      CHECK(std::abs(a.u[i] + b.u[i]) <= 1e-12 * scale);
      CHECK(std::abs(a.du_dr[i] + b.du_dr[i]) <= 1e-12);
    }
  }
}

TEST_CASE("profile CSV writes and reads losslessly") {
  const SolutionProfile profile = evaluate_solution(
      constant_spec(3.0, 2, 0.0, 1.0), make_uniform_grid(1.0, 2.0, 17));
  std::stringstream io;
  write_profile_csv(profile, io);
  const SolutionProfile back = read_profile_csv(io);
  REQUIRE(back.grid.count() == profile.grid.count());
  for (std::size_t i = 0; i < profile.u.size(); ++i) {
    CHECK(back.grid.radii[i] == profile.grid.radii[i]);
    CHECK(back.u[i] == profile.u[i]);
    CHECK(back.du_dr[i] == profile.du_dr[i]);
    CHECK(back.lam[i] == profile.lam[i]);
    CHECK(back.F_vals[i] == profile.F_vals[i]);
    CHECK(back.theta_abs[i] == profile.theta_abs[i]);
  }

  std::stringstream bad_header("radius,u\n1,0\n2,0\n");
  CHECK_THROWS_AS(read_profile_csv(bad_header), const error&);
  std::stringstream one_row("r,u,du_dr,lambda,F,theta_abs\n1,0,0,0,0,0\n");
  CHECK_THROWS_AS(read_profile_csv(one_row), const error&);
  std::stringstream broken("r,u,du_dr,lambda,F,theta_abs\n1,0,oops\n2,0,0,0,0,0\n");
  CHECK_THROWS_AS(read_profile_csv(broken), const error&);
}

TEST_CASE("grid problems are rejected before any work happens") {
  const ProblemSpec spec = constant_spec(3.0, 2, 0.0, 1.0);
  RadialGrid off = make_uniform_grid(1.0, 1.9, 65);
  CHECK_THROWS_AS(evaluate_solution(spec, off), const error&);
  RadialGrid swapped = make_uniform_grid(1.0, 2.0, 65);
  std::swap(swapped.radii[10], swapped.radii[11]);
  CHECK_THROWS_AS(evaluate_solution(spec, swapped), const error&);
}

}  // TEST_SUITE
