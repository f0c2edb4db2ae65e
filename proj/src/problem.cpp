#include "plap/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace plap {

SourceTerm SourceTerm::constant(double c) {
  SourceTerm s;
  s.kind_ = source_kind::constant;
  s.c_ = c;
  return s;
}

SourceTerm SourceTerm::power(double c, double k) {
  SourceTerm s;
  s.kind_ = source_kind::power;
  s.c_ = c;
  s.k_ = k;
  return s;
}

SourceTerm SourceTerm::table(std::vector<double> r, std::vector<double> f) {
  SourceTerm s;
  s.kind_ = source_kind::table;
  s.interp_ = std::make_shared<MonotoneCubic>(r, f);
  s.knots_r_ = std::move(r);
  s.knots_f_ = std::move(f);
  return s;
}

double SourceTerm::operator()(double r) const {
  switch (kind_) {
    case source_kind::constant: return c_;
    case source_kind::power: return c_ * std::pow(r, k_);
    case source_kind::table: return (*interp_)(r);
  }
  return 0.0;
}

int chi(double p) {
  if (!std::isfinite(p) || p <= 1.0 || p == 2.0) {
    throw error(errc::invalid_exponent,
                "exponent must lie in (1,2) or (2,inf), got " + std::to_string(p));
  }
  return p < 2.0 ? 1 : 0;
}

double sphere_area(int n) {
  if (n < 2) {
    throw error(errc::invalid_dimension,
                "dimension must be >= 2, got " + std::to_string(n));
  }
  double a = (n % 2 == 0) ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
  for (int m = (n % 2 == 0) ? 4 : 5; m <= n; m += 2) {
    a *= 2.0 * std::numbers::pi / (m - 2);
  }
  return a;
}

int validate(const ProblemSpec& spec) {
  if (!(spec.r_inner > 0.0)) {
    throw error(errc::degenerate_annulus,
                "inner radius must be positive (R1 = 0 is not an annulus)");
  }
  if (!(spec.r_outer > spec.r_inner)) {
    throw error(errc::degenerate_annulus, "outer radius must exceed inner radius");
  }
  if (spec.dim < 2) {
    throw error(errc::invalid_dimension,
                "dimension must be >= 2, got " + std::to_string(spec.dim));
  }
  if (!std::isfinite(spec.p) || spec.p <= 1.0) {
    throw error(errc::invalid_exponent,
                "exponent must lie in (1,2)∪(2,inf), got " + std::to_string(spec.p));
  }
  if (!std::isfinite(spec.epsilon) || spec.epsilon < 0.0) {
    throw error(errc::domain_error, "epsilon must be finite and >= 0");
  }
  if (spec.p < 2.0 && !(spec.epsilon > 0.0)) {
    throw error(errc::missing_regularization,
                "p < 2 requires a positive regularization epsilon");
  }

  // Sign constancy: 1000 equispaced radii plus all table knots.
  std::vector<double> samples;
  samples.reserve(1000 + spec.source.knots_r().size());
  for (int i = 0; i < 1000; ++i) {
    samples.push_back(spec.r_inner +
                      (spec.r_outer - spec.r_inner) * i / 999.0);
  }
  for (double knot : spec.source.knots_r()) {
    if (knot >= spec.r_inner && knot <= spec.r_outer) samples.push_back(knot);
  }
  int sigma = 0;
  for (double r : samples) {
    const double v = spec.source(r);
    if (!std::isfinite(v)) {
      throw error(errc::numerical_evaluation,
                  "source term non-finite at r = " + std::to_string(r));
    }
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0 || (sigma != 0 && s != sigma)) {
      throw error(errc::mixed_sign_source,
                  "source term must have one strict sign on [R1, R2]; offending r = " +
                      std::to_string(r));
    }
    sigma = s;
  }
  return sigma;
}

bool oracle_only(const ProblemSpec& spec) { return spec.p == 2.0; }

RadialGrid make_uniform_grid(double r1, double r2, int count) {
  if (count < 2) throw error(errc::grid_error, "grid needs at least two nodes");
  RadialGrid g;
  g.radii.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    g.radii[static_cast<std::size_t>(i)] =
        r1 + (r2 - r1) * static_cast<double>(i) / (count - 1);
  }
  g.radii.front() = r1;
  g.radii.back() = r2;
  return g;
}

RadialGrid make_chebyshev_grid(double r1, double r2, int count) {
  if (count < 2) throw error(errc::grid_error, "grid needs at least two nodes");
  RadialGrid g;
  g.radii.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t =
        0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / (count - 1)));
    g.radii[static_cast<std::size_t>(i)] = r1 + (r2 - r1) * t;
  }
  g.radii.front() = r1;
  g.radii.back() = r2;
  return g;
}

RadialGrid make_graded_grid(double r1, double r2, int count, double center,
                            double window_frac, double grading) {
  if (count < 8) throw error(errc::grid_error, "graded grid needs at least 8 nodes");
  if (!(center > r1 && center < r2)) {
    throw error(errc::grid_error, "grading center must be interior");
  }
  const double span = r2 - r1;
  double w = window_frac * span;
  w = std::min({w, 0.9 * (center - r1), 0.9 * (r2 - center)});

  const double a = center - w, b = center + w;
  const int intervals = count - 1;
  int inside = std::max(4, static_cast<int>(std::lround(intervals * (2.0 * w / span))));
  if (inside % 2 != 0) ++inside;
  inside = std::min(inside, intervals - 2);
  const int outside = intervals - inside;
  int left = std::max(1, static_cast<int>(std::lround(outside * (a - r1) / (span - 2.0 * w))));
  left = std::min(left, outside - 1);
  const int right = outside - left;

  RadialGrid g;
  g.radii.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < left; ++i) {
    g.radii.push_back(r1 + (a - r1) * static_cast<double>(i) / left);
  }
  for (int i = 0; i <= inside; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / inside;
    const double mapped = t >= 0.0 ? std::pow(t, grading) : -std::pow(-t, grading);
    g.radii.push_back(center + w * mapped);
  }
  for (int i = 1; i <= right; ++i) {
    g.radii.push_back(b + (r2 - b) * static_cast<double>(i) / right);
  }
  g.radii.front() = r1;
  g.radii.back() = r2;
  check_grid(g, r1, r2);
  return g;
}

void check_grid(const RadialGrid& grid, double r1, double r2) {
  if (grid.count() < 2) throw error(errc::grid_error, "grid needs at least two nodes");
  if (grid.radii.front() != r1 || grid.radii.back() != r2) {
    throw error(errc::grid_error, "grid endpoints must equal the annulus radii exactly");
  }
  for (std::size_t i = 0; i + 1 < grid.radii.size(); ++i) {
    if (!(grid.radii[i] < grid.radii[i + 1])) {
      throw error(errc::grid_error, "grid radii must be strictly increasing");
    }
  }
}

nlohmann::json to_json(const ProblemSpec& spec) {
  nlohmann::json src;
  switch (spec.source.kind()) {
    case source_kind::constant:
      src = {{"kind", "constant"}, {"value", spec.source.value()}};
      break;
    case source_kind::power:
      src = {{"kind", "power"},
             {"coefficient", spec.source.coefficient()},
             {"exponent", spec.source.exponent()}};
      break;
    case source_kind::table:
      src = {{"kind", "table"},
             {"r", spec.source.knots_r()},
             {"f", spec.source.knots_f()}};
      break;
  }
  return {{"r_inner", spec.r_inner}, {"r_outer", spec.r_outer},
          {"dim", spec.dim},         {"p", spec.p},
          {"epsilon", spec.epsilon}, {"source", src}};
}

ProblemSpec spec_from_json(const nlohmann::json& doc) {
  try {
    ProblemSpec spec;
    spec.r_inner = doc.at("r_inner").get<double>();
    spec.r_outer = doc.at("r_outer").get<double>();
    spec.dim = doc.at("dim").get<int>();
    spec.p = doc.at("p").get<double>();
    spec.epsilon = doc.at("epsilon").get<double>();
    const auto& src = doc.at("source");
    const std::string kind = src.at("kind").get<std::string>();
    if (kind == "constant") {
      spec.source = SourceTerm::constant(src.at("value").get<double>());
    } else if (kind == "power") {
      spec.source = SourceTerm::power(src.at("coefficient").get<double>(),
                                      src.at("exponent").get<double>());
    } else if (kind == "table") {
      spec.source = SourceTerm::table(src.at("r").get<std::vector<double>>(),
                                      src.at("f").get<std::vector<double>>());
    } else {
      throw error(errc::config_error, "unknown source kind '" + kind + "'");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::config_error, std::string("malformed problem spec: ") + e.what());
  }
}

}  // namespace plap
