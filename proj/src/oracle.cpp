#include "fracdim/oracle.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <vector>

#include "fracdim/error.hpp"

namespace fracdim {

namespace {

// 10-point Gauss-Legendre on [-1, 1].
constexpr std::array<std::array<double, 2>, 10> kGauss10 = {{
    {-0.97390652851717174, 0.066671344308688069},
    {-0.86506336668898454, 0.14945134915058036},
    {-0.67940956829902444, 0.21908636251598201},
    {-0.43339539412924721, 0.26926671930999652},
    {-0.14887433898163122, 0.29552422471475298},
    {0.14887433898163122, 0.29552422471475298},
    {0.43339539412924721, 0.26926671930999652},
    {0.67940956829902444, 0.21908636251598201},
    {0.86506336668898454, 0.14945134915058036},
    {0.97390652851717174, 0.066671344308688069},
}};

// Innermost-panel nodes as fractions of the panel width.
constexpr std::array<double, 3> kProductNodes = {1.0 / 6.0, 0.5, 5.0 / 6.0};

/// Weights W_i with sum_i W_i q(h t_i) = int_0^h e^power q(e) de for quadratic q.
std::array<double, 3> product_weights(double power, double h) {
  std::array<double, 3> moments{};
  for (int k = 0; k < 3; ++k) moments[k] = std::pow(h, power + 1.0 + k) / (power + 1.0 + k);
  std::array<double, 3> w{};
  const auto& t = kProductNodes;
  for (int i = 0; i < 3; ++i) {
    // Lagrange basis l_i(e) = prod_{j != i} (e - h t_j) / (h t_i - h t_j), expanded in powers of e.
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const double denom = h * h * (t[i] - t[j]) * (t[i] - t[k]);
    const double c0 = h * h * t[j] * t[k];
    const double c1 = -h * (t[j] + t[k]);
    w[i] = (c0 * moments[0] + c1 * moments[1] + moments[2]) / denom;
  }
  return w;
}

/// Singular kernel of one axis, evaluated either by the distance d = x - s
/// to the upper limit or directly at s.
struct AxisKernel {
  OperatorKind kind;
  double order;
  double rho;
  double upper;

  double p() const { return rho + 1.0; }

  /// (x^p - s^p) or log(x/s), computed from d without cancellation.
  double gap_from_distance(double d) const {
    const double l = std::log1p(-d / upper);
    return kind == OperatorKind::Katugampola ? -std::pow(upper, p()) * std::expm1(p() * l) : -l;
  }
  double gap_at(double s) const {
    return kind == OperatorKind::Katugampola ? std::pow(upper, p()) - std::pow(s, p()) : std::log(upper / s);
  }
  double density(double s) const { return kind == OperatorKind::Katugampola ? std::pow(s, rho) : 1.0 / s; }

  double kernel_from_distance(double d) const {
    return std::pow(gap_from_distance(d), order - 1.0) * density(upper - d);
  }
  double kernel_at(double s) const { return std::pow(gap_at(s), order - 1.0) * density(s); }
};

struct AxisRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  double prefactor = 0.0;
};

/// Gauss panels over [lo, hi] of the zone parameter, split into `pieces`
/// equal parts, further split so that no part is wider than half the
/// distance of its nearest s to the origin (where s^rho and 1/s are singular).
void add_panel(AxisRule1D& rule, double lo, double hi, int pieces, double nearest_s, const auto& weight_at) {
  std::size_t parts = static_cast<std::size_t>(pieces);
  if (nearest_s > 0.0) {
    parts = std::max(parts, static_cast<std::size_t>(std::ceil((hi - lo) / (0.5 * nearest_s))));
  }
  const double width = (hi - lo) / static_cast<double>(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    const double a = lo + width * static_cast<double>(p);
    const double half = 0.5 * width;
    const double mid = a + half;
    for (const auto& [z, w] : kGauss10) {
      const auto [node, kernel] = weight_at(mid + half * z);
      rule.nodes.push_back(node);
      rule.weights.push_back(half * w * kernel);
    }
  }
}

AxisRule1D build_axis(const AxisKernel& k, double lower, int levels, double ratio) {
  AxisRule1D rule;
  const double length = k.upper - lower;
  const bool grade_lower = k.kind == OperatorKind::Katugampola && lower == 0.0 && k.rho != 0.0;
  const double upper_zone = grade_lower ? 0.5 * length : length;
  // Refinement also subdivides the outer panels, so successive passes resolve f itself.
  const int pieces = 1 + levels / 8;

  // Zone next to the upper limit, parameterised by d = x - s in [0, upper_zone].
  auto near_upper = [&](double d) { return std::pair{k.upper - d, k.kernel_from_distance(d)}; };
  double outer = upper_zone;
  for (int l = 0; l < levels; ++l) {
    const double inner = outer / ratio;
    add_panel(rule, inner, outer, pieces, k.upper - outer, near_upper);
    outer = inner;
  }
  {
    const double power = k.order - 1.0;
    const auto w = product_weights(power, outer);
    for (int i = 0; i < 3; ++i) {
      const double d = outer * kProductNodes[i];
      // kernel / d^power is smooth in d
      const double smooth = std::pow(k.gap_from_distance(d) / d, power) * k.density(k.upper - d);
      rule.nodes.push_back(k.upper - d);
      rule.weights.push_back(w[i] * smooth);
    }
  }

  if (grade_lower) {
    // Zone next to s = 0, where s^rho and s^p are not smooth.
    auto near_lower = [&](double s) { return std::pair{s, k.kernel_at(s)}; };
    outer = 0.5 * length;
    for (int l = 0; l < levels; ++l) {
      const double inner = outer / ratio;
      add_panel(rule, inner, outer, pieces, inner, near_lower);
      outer = inner;
    }
    const auto w = product_weights(k.rho, outer);
    for (int i = 0; i < 3; ++i) {
      const double s = outer * kProductNodes[i];
      rule.nodes.push_back(s);
      rule.weights.push_back(w[i] * std::pow(k.gap_at(s), k.order - 1.0));
    }
  }

  rule.prefactor = k.kind == OperatorKind::Katugampola ? std::pow(k.p(), 1.0 - k.order) / std::tgamma(k.order)
                                                       : 1.0 / std::tgamma(k.order);
  return rule;
}

double tensor_value(const Surface& f, const AxisRule1D& rx, const AxisRule1D& ry) {
  double total = 0.0;
  for (std::size_t i = 0; i < rx.nodes.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < ry.nodes.size(); ++j) inner += ry.weights[j] * f(rx.nodes[i], ry.nodes[j]);
    total += rx.weights[i] * inner;
  }
  return rx.prefactor * ry.prefactor * total;
}

}  // namespace

OracleResult direct_singular(const Surface& f, const OperatorSpec& spec, double x, double y,
                             const OracleOptions& options) {
  spec.validate();
  if (!(options.tol >= 1e-10)) throw InvalidArgument("direct_singular: tol must be >= 1e-10");
  if (!(options.ratio > 1.0)) throw InvalidArgument("direct_singular: ratio must be > 1");
  if (options.start_levels < 1 || options.level_step < 1 || options.max_levels < options.start_levels) {
    throw InvalidArgument("direct_singular: invalid level schedule");
  }
  const auto& p = spec.params;
  const Rect& r = f.rect();
  if (p.a < r.a || p.c < r.c || !(x >= p.a && x <= r.b && y >= p.c && y <= r.d)) {
    throw DomainError(fmt::format("direct_singular: point ({}, {}) outside the integration domain", x, y));
  }
  if (x == p.a || y == p.c) return {0.0, 0.0, 0, true};

  const AxisKernel kx{spec.kind, spec.order.a1, p.rho1, x};
  const AxisKernel ky{spec.kind, spec.order.a2, p.rho2, y};
  auto pass = [&](int levels) {
    return tensor_value(f, build_axis(kx, p.a, levels, options.ratio), build_axis(ky, p.c, levels, options.ratio));
  };

  int levels = options.start_levels;
  double previous = pass(levels);
  OracleResult result{previous, 0.0, levels, false};
  while (levels + options.level_step <= options.max_levels) {
    levels += options.level_step;
    const double current = pass(levels);
    result = {current, std::abs(current - previous), levels, false};
    if (result.error_estimate < options.tol) {
      result.converged = true;
      break;
    }
    previous = current;
  }
  return result;
}

}  // namespace fracdim
