// Acceptance suite: one PASS/FAIL line per criterion.
// Exit code 1 if any criterion fails, except those named with --known-failure ID
// (their FAIL line is still printed).
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fracdim/boxdim.hpp"
#include "fracdim/experiment.hpp"
#include "fracdim/frac_integral.hpp"
#include "fracdim/oracle.hpp"
#include "fracdim/parallel.hpp"
#include "fracdim/special.hpp"
#include "fracdim/surfaces.hpp"

using namespace fracdim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
int known_failures = 0;
std::vector<std::string> known;

void criterion(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool expected = std::find(known.begin(), known.end(), id) != known.end();
  if (!o.pass) ++(expected ? known_failures : failures);
  fmt::print("[{}] {} {}: {} ({:.1f} s){}\n", o.pass ? "PASS" : "FAIL", id, title, o.detail, secs,
             !o.pass && expected ? " [known failure]" : "");
  std::fflush(stdout);
}

const Rect kUnit{};
const Rect kShifted{0.1, 1.0, 0.1, 1.0};

OperatorSpec katugampola(double a1, double a2, double r1, double r2, double a = 0.0, double c = 0.0) {
  return {OperatorKind::Katugampola, {a1, a2}, {r1, r2, a, c}, kDefaultRuleNodes};
}
OperatorSpec hadamard(double g1, double g2, double a, double c) {
  return {OperatorKind::Hadamard, {g1, g2}, {0.0, 0.0, a, c}, kDefaultRuleNodes};
}

std::vector<SurfaceSpec> catalog() {
  return {ConstantSpec{1.0},         BilinearSpec{1.0, 1.0, 0.0}, SineProductSpec{2.0, 2.0},
          Weierstrass2DSpec{2.0, 0.5, 20}, Takagi2DSpec{0.5, 20},  OscillatorySineInvSpec{}};
}

Outcome closed_forms() {
  const Surface one = make_surface(ConstantSpec{1.0}, kUnit);
  const Surface one_h = make_surface(ConstantSpec{1.0}, kShifted);
  const double e1 = std::abs(katugampola_point(one, katugampola(0.5, 0.5, 0.0, 0.0), 1.0, 1.0) - 4.0 / std::numbers::pi);
  const double ln10 = std::log(10.0);
  const double e2 = std::abs(hadamard_point(one_h, hadamard(1.0, 1.0, 0.1, 0.1), 1.0, 1.0) - ln10 * ln10);
  return {e1 <= 1e-9 && e2 <= 1e-9, fmt::format("|K - 4/pi| = {:.2e}, |H - log(10)^2| = {:.2e}", e1, e2)};
}

Outcome oracle_sweep() {
  struct Case {
    SurfaceSpec surface;
    OperatorSpec spec;
    double x, y;
  };
  std::vector<Case> cases;
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  const double orders[] = {0.3, 0.5, 0.8};
  const double rhos[] = {-0.5, 0.0, 1.0};
  const std::vector<SurfaceSpec> surfaces{SineProductSpec{2.0, 2.0}, BilinearSpec{1.0, 1.0, 0.0}};
  for (double a1 : orders)
    for (double a2 : orders)
      for (double r1 : rhos)
        for (double r2 : rhos)
          for (const auto& s : surfaces)
            for (int p = 0; p < 10; ++p) {
              double x = 0.0, y = 0.0;
              while (x <= 0.0 || x >= 1.0) x = coord(rng);
              while (y <= 0.0 || y >= 1.0) y = coord(rng);
              cases.push_back({s, katugampola(a1, a2, r1, r2), x, y});
            }
  std::vector<double> excess(cases.size(), 0.0), diffs(cases.size(), 0.0);
  std::vector<char> converged(cases.size(), 0);
  parallel_for(0, cases.size(), [&](std::size_t i) {
    const Case& c = cases[i];
    const Surface f = make_surface(c.surface, kUnit);
    const double fast = katugampola_point(f, c.spec, c.x, c.y);
    const OracleResult ref = direct_singular(f, c.spec, c.x, c.y);
    diffs[i] = std::abs(fast - ref.value);
    excess[i] = diffs[i] / std::max(1e-8, 1e-6 * std::abs(ref.value));
    converged[i] = ref.converged;
  });
  std::size_t bad = 0, unconverged = 0;
  double worst_ratio = 0.0, worst_diff = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (excess[i] > 1.0) ++bad;
    if (!converged[i]) ++unconverged;
    worst_ratio = std::max(worst_ratio, excess[i]);
    worst_diff = std::max(worst_diff, diffs[i]);
  }
  return {bad == 0, fmt::format("{} points, {} outside tolerance, max |diff| = {:.2e}, max diff/tol = {:.3f}, "
                                "{} oracle results not converged",
                                cases.size(), bad, worst_diff, worst_ratio, unconverged)};
}

Outcome separable_identity() {
  auto h = [](double x) { return 1.0 + std::sin(2.0 * std::numbers::pi * x); };
  const SeparableCheck c = separable_identity_check(h, 0.5, Rect{0.2, 1.0, 0.2, 1.0}, 9);
  return {c.max_rel_error <= 1e-8, fmt::format("max relative error {:.2e} over {} points", c.max_rel_error, c.points)};
}

Outcome hadamard_limit() {
  const Surface one = make_surface(ConstantSpec{1.0}, kShifted);
  const std::vector<double> rhos{-0.5, -0.9, -0.99, -0.999};
  const auto gaps = rho_limit_gap(one, {0.5, 0.5}, rhos, 0.1, 0.1, 1.0, 1.0);
  bool decreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && gaps[i] < gaps[i - 1];
  return {decreasing && gaps.back() < 1e-3,
          fmt::format("gaps {:.4e} {:.4e} {:.4e} {:.4e}; strictly decreasing: {}; final gap < 1e-3: {}", gaps[0],
                      gaps[1], gaps[2], gaps[3], decreasing, gaps.back() < 1e-3)};
}

Outcome dimension_preservation(OperatorKind kind) {
  const std::vector<SurfaceSpec> surfaces{SineProductSpec{2.0, 2.0}, OscillatorySineInvSpec{},
                                          BilinearSpec{1.0, 1.0, 0.0}};
  bool pass = true;
  std::string detail;
  for (const auto& s : surfaces) {
    ExperimentConfig config;
    config.surface = s;
    config.rect = kind == OperatorKind::Hadamard ? kShifted : kUnit;
    config.op = kind == OperatorKind::Hadamard ? hadamard(0.5, 0.5, 0.1, 0.1) : katugampola(0.5, 0.5, 0.0, 0.0);
    config.grid_n = 512;
    config.oversample = 4;
    config.k_min = 3;
    config.k_max = 7;
    const DimensionReport r = run_dimension_experiment(config);
    const double r2f = r.dim_f.r_squared.value_or(0.0);
    const double r2i = r.dim_integral.r_squared.value_or(0.0);
    const bool ok = r.dim_f.slope >= 1.9 && r.dim_f.slope <= 2.1 && r.dim_integral.slope >= 1.9 &&
                    r.dim_integral.slope <= 2.15 && r2f >= 0.98 && r2i >= 0.98;
    pass = pass && ok;
    detail += fmt::format("{}{}: dim f {:.4f} (r2 {:.5f}), dim I f {:.4f} (r2 {:.5f}), {:.1f} s",
                          detail.empty() ? "" : "; ", r.surface, r.dim_f.slope, r2f, r.dim_integral.slope, r2i,
                          r.runtime_s);
  }
  return {pass, detail};
}

Outcome sandwich() {
  std::size_t checks = 0;
  bool pass = true;
  for (const auto& spec : catalog()) {
    const SampledSurface s = sample_surface(make_surface(spec, kUnit), 512, 4);
    for (int k = 2; k <= 7; ++k) {
      const CountBounds b = lemma31_bounds(s, k);
      pass = pass && static_cast<double>(b.lower) <= b.upper && b.lower == box_count(s, k);
      ++checks;
    }
  }
  return {pass, fmt::format("{} surfaces x 6 levels, {} checks", catalog().size(), checks)};
}

Outcome weierstrass() {
  const SampledSurface s = sample_surface(make_surface(Weierstrass2DSpec{2.0, 0.5, 20}, kUnit), 512, 4);
  const DimensionEstimate e = estimate_dimension(box_count_curve(s, 3, 7));
  return {e.slope >= 2.3 && e.slope <= 2.7,
          fmt::format("slope {:.4f}, r2 {:.5f}", e.slope, e.r_squared.value_or(0.0))};
}

Outcome invariants() {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& name) {
    if (!ok) failed.push_back(name);
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0.0, 1.0), coef(-2.0, 2.0);
  const OperatorSpec kat = katugampola(0.4, 0.7, 0.5, -0.3);
  const OperatorSpec had = hadamard(0.6, 0.3, 0.1, 0.1);
  const auto specs = catalog();

  // linearity
  bool linear = true;
  for (int t = 0; t < 20; ++t) {
    const Surface f = make_surface(specs[t % specs.size()], kUnit);
    const Surface g = make_surface(specs[(t + 2) % specs.size()], kUnit);
    const double lambda = coef(rng), mu = coef(rng), x = coord(rng), y = coord(rng);
    const double lhs = katugampola_point(linear_combination(lambda, f, mu, g), kat, x, y);
    const double rhs = lambda * katugampola_point(f, kat, x, y) + mu * katugampola_point(g, kat, x, y);
    linear = linear && std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lambda) + std::abs(mu));
  }
  expect(linear, "linearity");

  // positivity and monotonicity
  bool positive = true, monotone = true;
  for (const auto& spec : specs) {
    const Surface f = make_surface(spec, kShifted);
    const Surface g(kShifted, "f+x", [&f](double x, double y) { return f(x, y) + x; });
    for (int t = 0; t < 5; ++t) {
      const double x = 0.1 + 0.9 * coord(rng), y = 0.1 + 0.9 * coord(rng);
      const double kf = katugampola_point(f, katugampola(0.5, 0.5, 0.0, 0.0, 0.1, 0.1), x, y);
      const double kg = katugampola_point(g, katugampola(0.5, 0.5, 0.0, 0.0, 0.1, 0.1), x, y);
      const double hf = hadamard_point(f, had, x, y);
      const double hg = hadamard_point(g, had, x, y);
      positive = positive && kf >= 0.0 && hf >= 0.0;
      monotone = monotone && kf <= kg && hf <= hg;
    }
  }
  expect(positive, "positivity");
  expect(monotone, "monotonicity");

  // boundary annihilation
  const Surface sine = make_surface(SineProductSpec{2.0, 2.0}, kShifted);
  const OperatorSpec kat_shift = katugampola(0.5, 0.5, 1.0, 0.0, 0.1, 0.1);
  expect(katugampola_point(sine, kat_shift, 0.1, 0.7) == 0.0 && katugampola_point(sine, kat_shift, 0.7, 0.1) == 0.0 &&
             hadamard_point(sine, had, 0.1, 0.7) == 0.0 && hadamard_point(sine, had, 0.7, 0.1) == 0.0,
         "boundary annihilation");

  // shift invariance of box counts
  bool shift = true;
  for (const auto& spec : specs) {
    const Surface f = make_surface(spec, kUnit);
    const Surface g(kUnit, "f+c", [&f](double x, double y) { return f(x, y) + 2.5; });
    const SampledSurface sf = sample_surface(f, 128, 2), sg = sample_surface(g, 128, 2);
    for (int k = 2; k <= 7; ++k) shift = shift && box_count(sf, k) == box_count(sg, k);
  }
  expect(shift, "shift invariance");

  // quadrature exactness: alpha = 0.5 exact for degree <= n-1, alpha = 1 (Gauss-Legendre) for degree <= 2n-1
  bool exact = true;
  for (const auto& [alpha, max_degree] : {std::pair{0.5, 11}, std::pair{1.0, 23}}) {
    const QuadratureRule rule = jacobi_rule(alpha, 12);
    for (int m = 0; m <= max_degree; ++m) {
      // int_0^1 u^m (1-u)^(alpha-1) du = B(m+1, alpha)
      const double beta = std::exp(std::lgamma(m + 1.0) + std::lgamma(alpha) - std::lgamma(m + 1.0 + alpha));
      const double q = rule.integrate([m](double u) { return std::pow(u, m); });
      exact = exact && std::abs(q - beta) <= 1e-13 * beta;
    }
  }
  const double g_half = fracdim::gamma(0.5);
  exact = exact && std::abs(g_half - std::sqrt(std::numbers::pi)) <= 1e-14;
  expect(exact, "quadrature exactness");

  std::string detail = "linearity, positivity, monotonicity, boundary annihilation, shift invariance, quadrature exactness";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-failure" && i + 1 < argc) {
      known.emplace_back(argv[++i]);
    } else {
      fmt::print(stderr, "usage: acceptance [--known-failure ACn]...\n");
      return 2;
    }
  }
  criterion("AC1", "closed-form operator values", closed_forms);
  criterion("AC2", "transformed quadrature vs direct oracle sweep", oracle_sweep);
  criterion("AC3", "separable Hadamard identity", separable_identity);
  criterion("AC4", "Katugampola to Hadamard limit", hadamard_limit);
  criterion("AC5", "dimension preserved by the Katugampola integral",
            [] { return dimension_preservation(OperatorKind::Katugampola); });
  criterion("AC6", "dimension preserved by the Hadamard integral",
            [] { return dimension_preservation(OperatorKind::Hadamard); });
  criterion("AC7", "count sandwich on the catalog", sandwich);
  criterion("AC8", "Weierstrass estimator sanity", weierstrass);
  criterion("AC9", "invariant suite", invariants);
  fmt::print("{} of 9 criteria passed ({} known failures)\n", 9 - failures - known_failures, known_failures);
  return failures == 0 ? 0 : 1;
}
