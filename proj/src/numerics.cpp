#include "plap/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace plap {

namespace {

struct GaussTable {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes/weights on [-1, 1], orders 1..10, full double precision.
const std::array<GaussTable, 10>& gauss_tables() {
  static const std::array<GaussTable, 10> tables = {{
      {{0}, {2}},
      {{-0.57735026918962573, 0.57735026918962573}, {1, 1}},
      {{-0.7745966692414834, 0, 0.7745966692414834},
       {0.55555555555555569, 0.88888888888888884, 0.55555555555555569}},
      {{-0.86113631159405257, -0.33998104358485626, 0.33998104358485626,
        0.86113631159405257},
       {0.34785484513745368, 0.65214515486254621, 0.65214515486254621,
        0.34785484513745368}},
      {{-0.90617984593866396, -0.53846931010568311, 0, 0.53846931010568311,
        0.90617984593866396},
       {0.23692688505618942, 0.47862867049936619, 0.568888888888889,
        0.47862867049936619, 0.23692688505618942}},
      {{-0.93246951420315205, -0.66120938646626448, -0.23861918608319693,
        0.23861918608319693, 0.66120938646626448, 0.93246951420315205},
       {0.17132449237916975, 0.36076157304813894, 0.46791393457269137,
        0.46791393457269137, 0.36076157304813894, 0.17132449237916975}},
      {{-0.94910791234275849, -0.74153118559939446, -0.40584515137739718, 0,
        0.40584515137739718, 0.74153118559939446, 0.94910791234275849},
       {0.12948496616887065, 0.27970539148927659, 0.38183005050511831,
        0.41795918367346896, 0.38183005050511831, 0.27970539148927659,
        0.12948496616887065}},
      {{-0.96028985649753618, -0.79666647741362673, -0.52553240991632899,
        -0.18343464249564978, 0.18343464249564978, 0.52553240991632899,
        0.79666647741362673, 0.96028985649753618},
       {0.10122853629037669, 0.22238103445337434, 0.31370664587788705,
        0.36268378337836177, 0.36268378337836177, 0.31370664587788705,
        0.22238103445337434, 0.10122853629037669}},
      {{-0.96816023950762609, -0.83603110732663577, -0.61337143270059036,
        -0.32425342340380892, 0, 0.32425342340380892, 0.61337143270059036,
        0.83603110732663577, 0.96816023950762609},
       {0.081274388361574718, 0.18064816069485712, 0.26061069640293566,
        0.31234707704000281, 0.33023935500125967, 0.31234707704000281,
        0.26061069640293566, 0.18064816069485712, 0.081274388361574718}},
      {{-0.97390652851717174, -0.86506336668898454, -0.67940956829902444,
        -0.43339539412924721, -0.14887433898163122, 0.14887433898163122,
        0.43339539412924721, 0.67940956829902444, 0.86506336668898454,
        0.97390652851717174},
       {0.066671344308688069, 0.14945134915058036, 0.21908636251598201,
        0.26926671930999652, 0.29552422471475298, 0.29552422471475298,
        0.26926671930999652, 0.21908636251598201, 0.14945134915058036,
        0.066671344308688069}},
  }};
  return tables;
}

void check_order(int order) {
  if (order < 1 || order > 10) {
    throw error(errc::domain_error,
                "quadrature order must be in [1, 10], got " + std::to_string(order));
  }
}

}  // namespace

std::span<const double> gauss_nodes(int order) {
  check_order(order);
  return gauss_tables()[static_cast<std::size_t>(order - 1)].nodes;
}

std::span<const double> gauss_weights(int order) {
  check_order(order);
  return gauss_tables()[static_cast<std::size_t>(order - 1)].weights;
}

double integrate(const std::function<double(double)>& g, double a, double b,
                 QuadratureRule rule) {
  if (rule.panels < 1) {
    throw error(errc::domain_error, "quadrature needs at least one panel");
  }
  const auto xs = gauss_nodes(rule.order);
  const auto ws = gauss_weights(rule.order);
  const double width = (b - a) / rule.panels;
  double total = 0.0;
  for (int k = 0; k < rule.panels; ++k) {
    const double lo = a + k * width;
    const double mid = lo + 0.5 * width;
    const double half = 0.5 * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = g(mid + half * xs[i]);
      if (!std::isfinite(v)) {
        throw error(errc::numerical_evaluation,
                    "integrand returned a non-finite value near r = " +
                        std::to_string(mid + half * xs[i]));
      }
      panel += ws[i] * v;
    }
    total += half * panel;
  }
  return total;
}

std::vector<double> cumulative_integral(const std::function<double(double)>& g,
                                        std::span<const double> radii,
                                        QuadratureRule rule) {
  if (radii.size() < 2) {
    throw error(errc::grid_error, "cumulative integral needs at least two radii");
  }
  std::vector<double> out(radii.size(), 0.0);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    if (!(radii[i] < radii[i + 1])) {
      throw error(errc::grid_error, "radii must be strictly increasing");
    }
    out[i + 1] = out[i] + integrate(g, radii[i], radii[i + 1], rule);
  }
  return out;
}

double solve_monotone(const std::function<double(double)>& h, RootBracket bracket,
                      double tol_x, double tol_f) {
  if (!bracket.valid()) {
    throw error(errc::bracket_error, "invalid root bracket");
  }
  double lo = bracket.lo, hi = bracket.hi;
  double f_lo = bracket.f_lo, f_hi = bracket.f_hi;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (tol_x < 0.0) tol_x = 1e-12 * (hi - lo);
  if (tol_f < 0.0) tol_f = 1e-12 * std::max(std::abs(f_lo), std::abs(f_hi));

  int last_kept = 0;  // which end survived the previous update: -1 lo, +1 hi
  for (int iter = 0; iter < 200; ++iter) {
    // False-position proposal from the bracket ends; bisection when it
    // escapes. The Illinois weighting below halves the stored value at an
    // end that survives twice in a row, otherwise convex functions pin one
    // end forever and the bracket never contracts.
    double x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = h(x);
    if (!std::isfinite(fx)) {
      throw error(errc::numerical_evaluation, "root function returned non-finite value");
    }
    if (std::abs(fx) <= tol_f) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
      if (last_kept == +1) f_hi *= 0.5;
      last_kept = +1;
    } else {
      hi = x;
      f_hi = fx;
      if (last_kept == -1) f_lo *= 0.5;
      last_kept = -1;
    }
    if (hi - lo <= tol_x) return 0.5 * (lo + hi);
  }
  throw error(errc::convergence_failure, "root finder exceeded 200 iterations");
}

RootBracket expand_bracket(const std::function<double(double)>& h, double seed,
                           bool increasing) {
  if (!(seed > 0.0)) {
    throw error(errc::bracket_error, "bracket seed must be positive");
  }
  double lo = 0.5 * seed, hi = 2.0 * seed;
  double f_lo = h(lo), f_hi = h(hi);
  for (int step = 0; step < 64; ++step) {
    if (f_lo * f_hi <= 0.0) return {lo, hi, f_lo, f_hi};
    // Move the end whose sign says the root lies beyond it.
    const bool root_above = increasing ? (f_hi < 0.0) : (f_hi > 0.0);
    if (root_above) {
      lo = hi;
      f_lo = f_hi;
      hi *= 2.0;
      f_hi = h(hi);
    } else {
      hi = lo;
      f_hi = f_lo;
      lo *= 0.5;
      f_lo = h(lo);
    }
  }
  throw error(errc::bracket_not_found,
              "no sign change within expansion cap; monotonicity assumption violated?");
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw error(errc::domain_error, "monotone cubic needs >= 2 matching knots");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i] < x_[i + 1])) {
      throw error(errc::domain_error, "monotone cubic knots must be strictly increasing");
    }
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  d_[0] = delta[0];
  d_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;  // local extremum: flat slope preserves shape
    } else {
      // Fritsch-Carlson weighted harmonic mean of neighboring secants.
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
}

double MonotoneCubic::operator()(double t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  i = std::min(i, x_.size() - 2);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

const char* errc_name(errc kind) noexcept {
  switch (kind) {
    case errc::invalid_exponent: return "invalid-exponent";
    case errc::invalid_dimension: return "invalid-dimension";
    case errc::degenerate_annulus: return "degenerate-annulus";
    case errc::mixed_sign_source: return "mixed-sign-source";
    case errc::missing_regularization: return "missing-regularization";
    case errc::domain_error: return "domain-error";
    case errc::numerical_evaluation: return "numerical-evaluation";
    case errc::bracket_error: return "bracket-error";
    case errc::bracket_not_found: return "bracket-not-found";
    case errc::convergence_failure: return "convergence-failure";
    case errc::grid_error: return "grid-error";
    case errc::config_error: return "config-error";
    case errc::io_error: return "io-error";
    case errc::unsupported_oracle: return "unsupported-oracle";
  }
  return "unknown";
}

}  // namespace plap
