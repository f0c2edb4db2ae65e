// Acceptance gate for the radial solver pipeline.
//
// Runs ten end-to-end criteria against the standing test matrix (seven
// exponents, two dimensions, four source shapes, three regularization
// levels on the singular branch) and prints exactly one line per
// criterion:
//
//   [PASS] criterion 3: balance-law residual ... (detail)
//
// The exit code is the number of failed criteria, so the test harness
// can gate on it directly. Every tolerance is written literally next to
// the check it guards; nothing is configurable from the outside.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plap/cli.hpp"
#include "plap/duality.hpp"
#include "plap/energy.hpp"
#include "plap/error.hpp"
#include "plap/numerics.hpp"
#include "plap/oracle.hpp"
#include "plap/problem.hpp"
#include "plap/radial_solver.hpp"

namespace {

using plap::ProblemSpec;
using plap::SourceTerm;

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fixed1(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// ---------------------------------------------------------------------
// Test matrix: every case lives on the annulus [1, 2].

SourceTerm parabola_table(double sign, int knots = 4097) {
  std::vector<double> r(knots), f(knots);
  for (int i = 0; i < knots; ++i) {
    const double x = 1.0 + static_cast<double>(i) / (knots - 1);
    r[i] = x;
    f[i] = sign * (1.0 + x * x);
  }
  return SourceTerm::table(std::move(r), std::move(f));
}

struct SourceShape {
  const char* label;
  SourceTerm term;
};

std::vector<SourceShape> source_shapes() {
  return {
      {"const(+1)", SourceTerm::constant(1.0)},
      {"const(-1)", SourceTerm::constant(-1.0)},
      {"power(r)", SourceTerm::power(1.0, 1.0)},
      {"table(-(1+r^2))", parabola_table(-1.0)},
  };
}

struct MatrixCase {
  ProblemSpec spec;
  std::string label;
};

MatrixCase make_case(double p, int n, double eps, const SourceShape& shape) {
  ProblemSpec spec;
  spec.r_inner = 1.0;
  spec.r_outer = 2.0;
  spec.dim = n;
  spec.p = p;
  spec.epsilon = eps;
  spec.source = shape.term;
  std::ostringstream label;
  label << "p=" << p << " n=" << n;
  if (eps > 0.0) label << " eps=" << eps;
  label << " f=" << shape.label;
  return {spec, label.str()};
}

std::vector<MatrixCase> build_matrix() {
  const std::vector<double> p_singular = {1.2, 1.5, 1.8};
  const std::vector<double> p_degenerate = {2.5, 3.0, 4.0, 8.0};
  const std::vector<double> eps_ladder = {0.2, 0.1, 0.05};
  const auto shapes = source_shapes();

  std::vector<MatrixCase> matrix;
  for (int n : {2, 3}) {
    for (const auto& shape : shapes) {
      for (double p : p_singular)
        for (double eps : eps_ladder) matrix.push_back(make_case(p, n, eps, shape));
      for (double p : p_degenerate) matrix.push_back(make_case(p, n, 0.0, shape));
    }
  }
  return matrix;
}

struct SolvedCase {
  MatrixCase def;
  plap::SolutionProfile profile;  // uniform grid, 1025 nodes
  plap::EnergyReport report;
};

// ---------------------------------------------------------------------
// Criterion bodies. Each fills `note` and returns pass/fail.

bool full_matrix_gap(const std::vector<MatrixCase>& matrix,
                     std::vector<SolvedCase>& solved, std::string& note) {
  const double kGapTol = 1e-6;       // relative duality gap, every case
  const double kTimeBudget = 60.0;   // seconds, whole matrix
  const auto t0 = std::chrono::steady_clock::now();
  const plap::RadialGrid grid = plap::make_uniform_grid(1.0, 2.0, 1025);

  double worst = -1.0;
  std::string worst_label = "-";
  for (const auto& mc : matrix) {
    plap::SolutionProfile profile = plap::evaluate_solution(mc.spec, grid);
    plap::EnergyReport report = plap::duality_gap(mc.spec, profile);
    if (report.gap_rel > worst) {
      worst = report.gap_rel;
      worst_label = mc.label;
    }
    solved.push_back({mc, std::move(profile), report});
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  note = std::to_string(matrix.size()) + " cases at grid 1025, worst gap_rel " +
         sci(worst) + " [" + worst_label + "], " + fixed1(elapsed) + " s";
  return worst <= kGapTol && elapsed <= kTimeBudget;
}

bool oracle_equivalence(const std::vector<SolvedCase>& solved, std::string& note) {
  // Pinned case p = 3, n = 2, f = +1: the discrete energy minimizer must
  // contract toward the analytic profile at second order on grids graded
  // around the derivative kink, and land within 1e-6 of it (relative to
  // the solution scale) on the finest grid.
  const double kRatioLo = 3.5, kRatioHi = 4.5;
  const double kFinalRelTol = 1e-6;
  const std::vector<int> sizes = {129, 257, 513, 1025};

  const SolvedCase* pinned = nullptr;
  for (const auto& sc : solved)
    if (sc.def.spec.p == 3.0 && sc.def.spec.dim == 2 &&
        sc.def.label.find("const(+1)") != std::string::npos)
      pinned = &sc;
  if (pinned == nullptr || !pinned->profile.r_star) {
    note = "pinned matrix case unavailable";
    return false;
  }
  const ProblemSpec& spec = pinned->def.spec;
  const double r_star = *pinned->profile.r_star;

  std::vector<double> errs;
  double scale = 0.0;
  for (int size : sizes) {
    const plap::RadialGrid grid = plap::make_graded_grid(1.0, 2.0, size, r_star);
    const plap::SolutionProfile analytic = plap::evaluate_solution(spec, grid);
    const plap::DiscreteEnergyState state = plap::minimize_discrete_energy(spec, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < analytic.u.size(); ++i) {
      err = std::max(err, std::abs(analytic.u[i] - state.u[i]));
      scale = std::max(scale, std::abs(analytic.u[i]));
    }
    errs.push_back(err);
  }

  bool ratios_ok = true;
  std::string ratio_text;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double ratio = errs[i] / errs[i + 1];
    ratios_ok = ratios_ok && ratio >= kRatioLo && ratio <= kRatioHi;
    if (!ratio_text.empty()) ratio_text += ", ";
    ratio_text += sci(ratio);
  }
  const double final_rel = errs.back() / scale;
  note = "sup-error ratios " + ratio_text + ", final " + sci(final_rel) +
         " of scale";
  return ratios_ok && final_rel <= kFinalRelTol;
}

bool balance_law_residual(const std::vector<SolvedCase>& solved, std::string& note) {
  // (a) the finite-difference flux-balance residual stays below 1e-6 on
  //     every 1025-node matrix profile; (b) it contracts at second order
  //     on representative cases whose source makes the residual's leading
  //     term nonzero (for f r^{n-1} with zero second derivative the
  //     centered stencil is exact and only roundoff remains).
  const double kFinalTol = 1e-6;
  const double kRatioLo = 3.0, kRatioHi = 5.0;

  double worst = 0.0;
  std::string worst_label = "-";
  for (const auto& sc : solved) {
    if (sc.report.el_residual_norm > worst) {
      worst = sc.report.el_residual_norm;
      worst_label = sc.def.label;
    }
  }

  const auto shapes = source_shapes();
  const std::vector<MatrixCase> rate_cases = {
      make_case(1.5, 2, 0.1, shapes[2]),  // power(r)
      make_case(3.0, 2, 0.0, shapes[2]),
      make_case(8.0, 2, 0.0, shapes[3]),  // table
      make_case(3.0, 3, 0.0, shapes[0]),  // const(+1), n = 3
  };
  bool rates_ok = true;
  double worst_ratio_lo = 1e300, worst_ratio_hi = 0.0;
  for (const auto& mc : rate_cases) {
    std::vector<double> norms;
    for (int size : {257, 513, 1025}) {
      const plap::RadialGrid grid = plap::make_uniform_grid(1.0, 2.0, size);
      const plap::SolutionProfile profile = plap::evaluate_solution(mc.spec, grid);
      norms.push_back(plap::el_residual_norm(mc.spec, profile));
    }
    for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
      const double ratio = norms[i] / norms[i + 1];
      worst_ratio_lo = std::min(worst_ratio_lo, ratio);
      worst_ratio_hi = std::max(worst_ratio_hi, ratio);
      rates_ok = rates_ok && ratio >= kRatioLo && ratio <= kRatioHi;
    }
  }

  note = "worst norm " + sci(worst) + " [" + worst_label + "], rate ratios in [" +
         sci(worst_ratio_lo) + ", " + sci(worst_ratio_hi) + "]";
  return worst <= kFinalTol && rates_ok;
}

bool sign_and_symmetry(const std::vector<SolvedCase>& solved, std::string& note) {
  const double kSignTol = 1e-10;  // sigma * u at every node
  const double kSymTol = 1e-10;   // |u[f] + u[-f]| at every node
  double worst_sign = 0.0;        // most negative sigma * u
  for (const auto& sc : solved) {
    const double sigma = static_cast<double>(sc.profile.sigma);
    for (double u : sc.profile.u) worst_sign = std::min(worst_sign, sigma * u);
  }

  // Mirrored solves: flipping the source must flip the solution exactly.
  const plap::RadialGrid grid = plap::make_uniform_grid(1.0, 2.0, 257);
  double worst_sym = 0.0;
  for (int n : {2, 3}) {
    for (auto [p, eps] : {std::pair{1.5, 0.1}, std::pair{3.0, 0.0}}) {
      const std::vector<std::pair<SourceTerm, SourceTerm>> pairs = {
          {SourceTerm::constant(1.0), SourceTerm::constant(-1.0)},
          {SourceTerm::power(1.0, 1.0), SourceTerm::power(-1.0, 1.0)},
          {parabola_table(-1.0), parabola_table(1.0)},
      };
      for (const auto& [f_plus, f_minus] : pairs) {
        MatrixCase a = make_case(p, n, eps, {"", f_plus});
        MatrixCase b = make_case(p, n, eps, {"", f_minus});
        const plap::SolutionProfile ua = plap::evaluate_solution(a.spec, grid);
        const plap::SolutionProfile ub = plap::evaluate_solution(b.spec, grid);
        for (std::size_t i = 0; i < ua.u.size(); ++i)
          worst_sym = std::max(worst_sym, std::abs(ua.u[i] + ub.u[i]));
      }
    }
  }

  note = "min sigma*u " + sci(worst_sign) + ", worst mirror defect " + sci(worst_sym) +
         " over 12 pairs";
  return worst_sign >= -kSignTol && worst_sym <= kSymTol;
}

bool regularization_limit(std::string& note) {
  // Singular-branch solutions must approach the eps -> 0 limit
  // monotonically in the gradient seminorm as the regularization shrinks.
  const std::vector<double> ladder = {0.2, 0.1, 0.05, 0.025};
  const double kReferenceEps = 1e-4;
  const plap::RadialGrid grid = plap::make_uniform_grid(1.0, 2.0, 1025);

  bool ok = true;
  std::string detail;
  for (double p : {1.2, 1.5, 1.8}) {
    MatrixCase ref_case = make_case(p, 2, kReferenceEps, {"const(+1)", SourceTerm::constant(1.0)});
    const plap::SolutionProfile ref = plap::evaluate_solution(ref_case.spec, grid);
    std::vector<double> dist;
    for (double eps : ladder) {
      MatrixCase mc = make_case(p, 2, eps, {"const(+1)", SourceTerm::constant(1.0)});
      const plap::SolutionProfile prof = plap::evaluate_solution(mc.spec, grid);
      dist.push_back(plap::compare(grid, prof.u, grid, ref.u, ref_case.spec).seminorm);
    }
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) ok = ok && dist[i + 1] < dist[i];
    if (!detail.empty()) detail += "; ";
    detail += "p=" + fixed1(p) + ": " + sci(dist.front()) + " -> " + sci(dist.back());
  }
  note = "seminorm distance to eps=1e-4 reference strictly decreasing (" + detail + ")";
  return ok;
}

bool second_variation_signs(const std::vector<SolvedCase>& solved, std::string& note) {
  const double kTol = 1e-12;
  const int kDraws = 100;
  const double kExclusionFrac = 0.02;  // of the annulus width, around theta = 0

  double worst_primal = 1e300;
  double worst_dual_singular = 1e300;   // p < 2: form must stay >= -tol
  double worst_dual_degenerate = -1e300;  // p > 2: form must stay <= +tol
  std::uint64_t seed = 0;
  for (const auto& sc : solved) {
    const ProblemSpec& spec = sc.def.spec;
    const auto samples = plap::sample_solution(spec, sc.profile, {3, 256}, false);
    const double exclusion = kExclusionFrac * (spec.r_outer - spec.r_inner);
    for (int k = 0; k < kDraws; ++k) {
      const plap::TestFunction phi(++seed, spec.r_inner, spec.r_outer);
      worst_primal =
          std::min(worst_primal, plap::second_variation_primal(spec, samples, phi));
      const double dual = plap::second_variation_dual(spec, samples, phi,
                                                      sc.profile.r_star, exclusion);
      if (spec.p < 2.0)
        worst_dual_singular = std::min(worst_dual_singular, dual);
      else
        worst_dual_degenerate = std::max(worst_dual_degenerate, dual);
    }
  }

  note = "100 draws/case: min primal " + sci(worst_primal) + ", min dual(p<2) " +
         sci(worst_dual_singular) + ", max dual(p>2) " + sci(worst_dual_degenerate);
  return worst_primal >= -kTol && worst_dual_singular >= -kTol &&
         worst_dual_degenerate <= kTol;
}

bool dual_map_roundtrip(std::string& note) {
  const int kCount = 10000;          // per branch, per identity
  const double kRoundTol = 1e-10;    // relative, invert(forward(lam)) vs lam
  const double kFenchelTol = 1e-12;  // absolute, Psi + Psi* - xi zeta
  std::mt19937_64 rng(20260815ULL);
  auto unit = [&rng]() { return plap::uniform_double(rng()); };

  double worst_round = 0.0;
  const double eps_ladder[] = {0.2, 0.1, 0.05};
  for (int i = 0; i < kCount; ++i) {  // singular branch
    const double p = 1.05 + 0.90 * unit();
    const double eps = eps_ladder[i % 3];
    const double cap = plap::lambda_cap(p, eps);
    const double lam = cap * std::pow(10.0, -3.0 * unit());
    const double back = plap::dae_invert(plap::dae_forward(lam, p, eps), p, eps);
    worst_round = std::max(worst_round, std::abs(back - lam) / lam);
  }
  for (int i = 0; i < kCount; ++i) {  // degenerate branch
    const double p = 2.05 + 5.95 * unit();
    const double lam = std::pow(10.0, -3.0 + 5.0 * unit());
    const double back = plap::dae_invert(plap::dae_forward(lam, p, 0.0), p, 0.0);
    worst_round = std::max(worst_round, std::abs(back - lam) / lam);
  }

  double worst_fenchel = 0.0;
  auto fenchel_defect = [](double xi, double p, double eps) {
    const double zeta = plap::zeta_of_xi(xi, p);
    return std::abs(plap::canonical_energy(xi, p) +
                    plap::legendre_conjugate(zeta, p, eps) - xi * zeta);
  };
  for (int i = 0; i < kCount; ++i) {
    const double xi = std::pow(10.0, -2.0 + 3.0 * unit());
    // Singular branch with eps = 0.05 keeps xi >= eps^2 admissible; the
    // degenerate branch stays below p = 5 so the conjugate's magnitude
    // leaves the absolute 1e-12 gate meaningful.
    worst_fenchel = std::max(worst_fenchel, fenchel_defect(xi, 1.05 + 0.90 * unit(), 0.05));
    worst_fenchel = std::max(worst_fenchel, fenchel_defect(xi, 2.05 + 2.95 * unit(), 0.0));
  }

  note = "worst round-trip " + sci(worst_round) + " rel, worst conjugacy defect " +
         sci(worst_fenchel);
  return worst_round <= kRoundTol && worst_fenchel <= kFenchelTol;
}

bool shooting_monotone(const std::vector<SolvedCase>& solved, std::string& note) {
  const int kTrials = 20;  // ordered trial constants per case
  bool monotone_ok = true;
  bool root_ok = true;
  double worst_residual_ratio = 0.0;
  std::string worst_label = "-";

  for (const auto& sc : solved) {
    const ProblemSpec& spec = sc.def.spec;
    const double c = sc.profile.c_epsilon;
    const double sigma = static_cast<double>(sc.profile.sigma);
    std::vector<double> mismatch(kTrials);
    double scale = 0.0;
    for (int k = 0; k < kTrials; ++k) {
      const double y = c * (0.25 + 1.5 * k / (kTrials - 1));
      mismatch[k] = plap::shooting_mismatch(spec, y, {5, 128});
      scale = std::max(scale, std::abs(mismatch[k]));
    }
    for (int k = 0; k + 1 < kTrials; ++k)
      monotone_ok = monotone_ok && sigma * (mismatch[k + 1] - mismatch[k]) > 0.0;

    const double residual = std::abs(plap::shooting_mismatch(spec, c));
    const double allowed = std::max(sc.profile.shooting_tol, 1e-11 * scale);
    if (allowed > 0.0 && residual / allowed > worst_residual_ratio) {
      worst_residual_ratio = residual / allowed;
      worst_label = sc.def.label;
    }
    root_ok = root_ok && residual <= allowed;
  }

  note = "20-point fans all strictly monotone: " +
         std::string(monotone_ok ? "yes" : "NO") + ", worst |M(C)| at " +
         sci(worst_residual_ratio) + " of tolerance [" + worst_label + "]";
  return monotone_ok && root_ok;
}

bool linear_anchor(std::string& note) {
  // p = 2, f = +1, n = 2: the energy minimizer must match the classical
  // annular Poisson solution (log-term coefficient 3 / (4 ln 2)) at
  // second order; the constant in front of h^2 is estimated and logged.
  const double kRatioLo = 3.0, kRatioHi = 5.0;
  MatrixCase mc = make_case(2.0, 2, 0.0, {"const(+1)", SourceTerm::constant(1.0)});
  const auto exact = plap::poisson_closed_form(mc.spec);

  std::vector<double> errs, hs;
  for (int size : {65, 129, 257, 513}) {
    const plap::RadialGrid grid = plap::make_uniform_grid(1.0, 2.0, size);
    const plap::DiscreteEnergyState state = plap::minimize_discrete_energy(mc.spec, grid);
    double err = 0.0;
    for (int i = 0; i < grid.count(); ++i)
      err = std::max(err, std::abs(state.u[i] - exact(grid.radii[i])));
    errs.push_back(err);
    hs.push_back(1.0 / (size - 1));
  }
  bool ratios_ok = true;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double ratio = errs[i] / errs[i + 1];
    ratios_ok = ratios_ok && ratio >= kRatioLo && ratio <= kRatioHi;
  }
  double c_estimate = 0.0;
  for (std::size_t i = 0; i < errs.size(); ++i)
    c_estimate = std::max(c_estimate, errs[i] / (hs[i] * hs[i]));

  note = "sup errors " + sci(errs.front()) + " -> " + sci(errs.back()) +
         " over 65..513, C_h2 = " + sci(c_estimate);
  return ratios_ok;
}

struct CapturedRun {
  int exit_code = 0;
  std::string stdout_text;
};

CapturedRun run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("plap");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream captured;
  std::streambuf* saved = std::cout.rdbuf(captured.rdbuf());
  int code = 2;
  try {
    code = plap::cli_main(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(saved);
    throw;
  }
  std::cout.rdbuf(saved);
  return {code, captured.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool sweep_determinism(std::string& note) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "plap-acceptance-sweep";
  fs::remove_all(base);
  fs::create_directories(base / "a");
  fs::create_directories(base / "b");

  const nlohmann::json config = {
      {"spec",
       {{"r_inner", 1.0},
        {"r_outer", 2.0},
        {"dim", 2},
        {"p", 1.5},
        {"epsilon", 0.1},
        {"source", {{"kind", "constant"}, {"value", 1.0}}}}},
      {"p_list", {1.5, 3.0}},
      {"f_list", {1.0, -1.0}},
      {"grid_size", 257},
      {"seed", 777},
  };
  const fs::path cfg = base / "sweep.json";
  {
    std::ofstream out(cfg);
    out << config.dump(2) << '\n';
  }

  const CapturedRun run_a =
      run_cli({"sweep", "--config", cfg.string(), "--out", (base / "a").string()});
  const CapturedRun run_b =
      run_cli({"sweep", "--config", cfg.string(), "--out", (base / "b").string()});
  if (run_a.exit_code != 0 || run_b.exit_code != 0) {
    note = "sweep exit codes " + std::to_string(run_a.exit_code) + "/" +
           std::to_string(run_b.exit_code);
    return false;
  }
  if (run_a.stdout_text != run_b.stdout_text) {
    note = "stdout summaries differ between runs";
    return false;
  }

  auto names = [](const fs::path& dir) {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(dir))
      out.push_back(entry.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto names_a = names(base / "a");
  const auto names_b = names(base / "b");
  if (names_a != names_b || names_a.empty()) {
    note = "output file sets differ (" + std::to_string(names_a.size()) + " vs " +
           std::to_string(names_b.size()) + ")";
    return false;
  }
  for (const auto& name : names_a) {
    if (slurp(base / "a" / name) != slurp(base / "b" / name)) {
      note = "file " + name + " differs between runs";
      return false;
    }
  }
  note = "2 runs, " + std::to_string(names_a.size()) +
         " files each, stdout and all files byte-identical";
  return true;
}

}  // namespace

int main() {
  const std::vector<MatrixCase> matrix = build_matrix();
  std::vector<SolvedCase> solved;
  solved.reserve(matrix.size());

  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  bool matrix_ready = false;

  auto need_matrix = [&](std::function<bool(std::string&)> fn) {
    return [&matrix_ready, fn = std::move(fn)](std::string& n) {
      if (!matrix_ready) {
        n = "matrix profiles unavailable (criterion 1 failed to run)";
        return false;
      }
      return fn(n);
    };
  };

  const std::vector<Criterion> criteria = {
      {"full-matrix duality-gap certification",
       [&](std::string& n) {
         const bool ok = full_matrix_gap(matrix, solved, n);
         matrix_ready = solved.size() == matrix.size();
         return ok;
       }},
      {"discrete-oracle equivalence at the derivative kink",
       need_matrix([&](std::string& n) { return oracle_equivalence(solved, n); })},
      {"balance-law residual size and order",
       need_matrix([&](std::string& n) { return balance_law_residual(solved, n); })},
      {"sign structure and odd symmetry",
       need_matrix([&](std::string& n) { return sign_and_symmetry(solved, n); })},
      {"vanishing-regularization convergence",
       [&](std::string& n) { return regularization_limit(n); }},
      {"second-variation branch signs",
       need_matrix([&](std::string& n) { return second_variation_signs(solved, n); })},
      {"dual-map round trip and conjugacy sampling",
       [&](std::string& n) { return dual_map_roundtrip(n); }},
      {"shooting monotonicity and root residual",
       need_matrix([&](std::string& n) { return shooting_monotone(solved, n); })},
      {"linear-case oracle order against the closed form",
       [&](std::string& n) { return linear_anchor(n); }},
      {"sweep determinism across output directories",
       [&](std::string& n) { return sweep_determinism(n); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    bool ok = false;
    std::string detail;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": "
              << criteria[i].name << " (" << detail << ")" << std::endl;
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) +
                                    " criterion(s) failed")
            << std::endl;
  return failures;
}
