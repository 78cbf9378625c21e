#include "fracdim/frac_integral.hpp"

#include <fmt/format.h>

#include <cmath>

#include "fracdim/error.hpp"
#include "fracdim/parallel.hpp"

namespace fracdim {

void FractionalOrder::validate() const {
  for (double v : {a1, a2}) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw InvalidArgument(fmt::format("fractional order must lie in (0, 1], got ({}, {})", a1, a2));
    }
  }
}

std::string_view to_string(OperatorKind kind) {
  return kind == OperatorKind::Katugampola ? "katugampola" : "hadamard";
}

void OperatorSpec::validate() const {
  order.validate();
  if (rule_n < 2) throw InvalidArgument(fmt::format("rule_n must be >= 2, got {}", rule_n));
  const auto& p = params;
  if (!(std::isfinite(p.a) && std::isfinite(p.c)) || p.a < 0.0 || p.c < 0.0) {
    throw InvalidArgument(fmt::format("lower limits must be finite and >= 0, got a={}, c={}", p.a, p.c));
  }
  if (kind == OperatorKind::Katugampola) {
    if (!(p.rho1 > -1.0 && p.rho2 > -1.0) || !std::isfinite(p.rho1) || !std::isfinite(p.rho2)) {
      throw InvalidArgument(fmt::format("rho must be > -1 on both axes, got ({}, {})", p.rho1, p.rho2));
    }
  } else if (!(p.a > 0.0 && p.c > 0.0)) {
    throw DomainError(fmt::format("Hadamard integral needs a > 0 and c > 0, got a={}, c={}", p.a, p.c));
  }
}

namespace detail {

AxisNodes katugampola_axis(const QuadratureRule& rule, double order, double rho, double lower, double upper) {
  AxisNodes axis;
  if (upper == lower) return axis;
  const double p = rho + 1.0;
  const double span = lower == 0.0 ? std::pow(upper, p) : std::pow(lower, p) * std::expm1(p * std::log(upper / lower));
  axis.scale = std::pow(span / p, order) / gamma(order);
  axis.points.resize(rule.size());
  if (lower == 0.0) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double u = rule.nodes[i];
      axis.points[i] = u <= 0.5 ? upper * std::pow(u, 1.0 / p) : upper * std::exp(std::log1p(-rule.complements[i]) / p);
    }
  } else {
    // Log form keeps the map accurate as p -> 0 (the Hadamard limit).
    const double log_ratio = std::log(upper / lower);
    const double grow = std::expm1(p * log_ratio);     // (x/a)^p - 1
    const double shrink = -std::expm1(-p * log_ratio); // 1 - (a/x)^p
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double u = rule.nodes[i];
      axis.points[i] = u <= 0.5 ? lower * std::exp(std::log1p(u * grow) / p)
                                : upper * std::exp(std::log1p(-rule.complements[i] * shrink) / p);
    }
  }
  return axis;
}

AxisNodes hadamard_axis(const QuadratureRule& rule, double order, double lower, double upper) {
  AxisNodes axis;
  if (upper == lower) return axis;
  const double log_ratio = std::log(upper / lower);
  axis.scale = std::pow(log_ratio, order) / gamma(order);
  axis.points.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    axis.points[i] = u <= 0.5 ? lower * std::exp(u * log_ratio) : upper * std::exp(-rule.complements[i] * log_ratio);
  }
  return axis;
}

}  // namespace detail

namespace {

using detail::AxisNodes;

struct AxisRules {
  QuadratureRule x;
  QuadratureRule y;
};

AxisRules make_rules(const OperatorSpec& spec) {
  AxisRules rules{kernel_rule(spec.order.a1, spec.rule_n), {}};
  rules.y = spec.order.a2 == spec.order.a1 ? rules.x : kernel_rule(spec.order.a2, spec.rule_n);
  return rules;
}

AxisNodes x_axis(const OperatorSpec& spec, const QuadratureRule& rule, double x) {
  return spec.kind == OperatorKind::Katugampola
             ? detail::katugampola_axis(rule, spec.order.a1, spec.params.rho1, spec.params.a, x)
             : detail::hadamard_axis(rule, spec.order.a1, spec.params.a, x);
}

AxisNodes y_axis(const OperatorSpec& spec, const QuadratureRule& rule, double y) {
  return spec.kind == OperatorKind::Katugampola
             ? detail::katugampola_axis(rule, spec.order.a2, spec.params.rho2, spec.params.c, y)
             : detail::hadamard_axis(rule, spec.order.a2, spec.params.c, y);
}

double tensor_sum(const Surface& f, const AxisNodes& xs, const QuadratureRule& wx, const AxisNodes& ys,
                  const QuadratureRule& wy) {
  if (xs.points.empty() || ys.points.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < xs.points.size(); ++i) {
    const double s = xs.points[i];
    double inner = 0.0;
    for (std::size_t j = 0; j < ys.points.size(); ++j) inner += wy.weights[j] * f(s, ys.points[j]);
    total += wx.weights[i] * inner;
  }
  return xs.scale * ys.scale * total;
}

void check_point(const Surface& f, const OperatorSpec& spec, double x, double y) {
  const Rect& r = f.rect();
  const auto& p = spec.params;
  if (p.a < r.a || p.c < r.c) {
    throw DomainError(fmt::format("lower limits ({}, {}) lie outside the surface rectangle [{}, {}] x [{}, {}]", p.a,
                                  p.c, r.a, r.b, r.c, r.d));
  }
  if (!(x >= p.a && x <= r.b && y >= p.c && y <= r.d)) {
    throw DomainError(fmt::format("point ({}, {}) lies outside [{}, {}] x [{}, {}]", x, y, p.a, r.b, p.c, r.d));
  }
}

double evaluate(const Surface& f, const OperatorSpec& spec, double x, double y) {
  spec.validate();
  check_point(f, spec, x, y);
  if (x == spec.params.a || y == spec.params.c) return 0.0;
  const AxisRules rules = make_rules(spec);
  return tensor_sum(f, x_axis(spec, rules.x, x), rules.x, y_axis(spec, rules.y, y), rules.y);
}

}  // namespace

double katugampola_point(const Surface& f, const OperatorSpec& spec, double x, double y) {
  if (spec.kind != OperatorKind::Katugampola) throw InvalidArgument("katugampola_point: spec.kind must be Katugampola");
  return evaluate(f, spec, x, y);
}

double hadamard_point(const Surface& f, const OperatorSpec& spec, double x, double y) {
  if (spec.kind != OperatorKind::Hadamard) throw InvalidArgument("hadamard_point: spec.kind must be Hadamard");
  return evaluate(f, spec, x, y);
}

double fractional_integral(const Surface& f, const OperatorSpec& spec, double x, double y) {
  return evaluate(f, spec, x, y);
}

double hadamard_point_1d(const std::function<double(double)>& h, double gamma1, double a, double x, int rule_n) {
  if (!(gamma1 > 0.0 && gamma1 <= 1.0)) throw InvalidArgument(fmt::format("order must lie in (0, 1], got {}", gamma1));
  if (rule_n < 2) throw InvalidArgument("rule_n must be >= 2");
  if (!(a > 0.0)) throw DomainError(fmt::format("Hadamard integral needs a > 0, got {}", a));
  if (!(x >= a) || !std::isfinite(x)) throw DomainError(fmt::format("point {} lies below the lower limit {}", x, a));
  if (x == a) return 0.0;
  const QuadratureRule rule = kernel_rule(gamma1, rule_n);
  const AxisNodes axis = detail::hadamard_axis(rule, gamma1, a, x);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * h(axis.points[i]);
  return axis.scale * sum;
}

SampledSurface integrate_grid(const Surface& f, const OperatorSpec& spec, std::size_t grid_n, std::size_t oversample,
                              GridPath path) {
  spec.validate();
  if (grid_n < 2) throw InvalidArgument("integrate_grid: grid_n must be >= 2");
  if (oversample < 1) throw InvalidArgument("integrate_grid: oversample must be >= 1");
  const Rect& r = f.rect();
  check_point(f, spec, spec.params.a, spec.params.c);
  if (!(spec.params.a < r.b && spec.params.c < r.d)) {
    throw DomainError("integrate_grid: lower limits must lie strictly inside the rectangle");
  }
  if (path == GridPath::Separable && !f.separable()) {
    throw InvalidArgument("integrate_grid: separable path requested for a non-separable surface");
  }
  const bool separable = path == GridPath::Separable || (path == GridPath::Auto && f.separable());

  SampledSurface out;
  out.rect = Rect{spec.params.a, r.b, spec.params.c, r.d};
  out.n = grid_n;
  out.oversample = oversample;
  out.label = fmt::format("{}[{}]", to_string(spec.kind), f.label());
  const std::size_t side = out.points_per_side();
  const std::size_t intervals = side - 1;
  out.values.assign(side * side, 0.0);

  const AxisRules rules = make_rules(spec);
  std::vector<AxisNodes> columns(side), rows(side);
  for (std::size_t i = 0; i < side; ++i) {
    columns[i] = x_axis(spec, rules.x, grid_coordinate(out.rect.a, out.rect.b, i, intervals));
    rows[i] = y_axis(spec, rules.y, grid_coordinate(out.rect.c, out.rect.d, i, intervals));
  }

  if (separable) {
    const auto terms = f.terms();
    const std::size_t rank = terms.size();
    // per-axis partial sums: col_sums[i * rank + k] = scale * sum_m w_m fx_k(s_m(x_i))
    std::vector<double> col_sums(side * rank, 0.0), row_sums(side * rank, 0.0);
    parallel_for(0, side, [&](std::size_t i) {
      for (std::size_t k = 0; k < rank; ++k) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t m = 0; m < columns[i].points.size(); ++m) sx += rules.x.weights[m] * terms[k].fx(columns[i].points[m]);
        for (std::size_t m = 0; m < rows[i].points.size(); ++m) sy += rules.y.weights[m] * terms[k].fy(rows[i].points[m]);
        col_sums[i * rank + k] = columns[i].scale * sx;
        row_sums[i * rank + k] = rows[i].scale * sy;
      }
    });
    parallel_for(1, side, [&](std::size_t j) {
      const double* b = row_sums.data() + j * rank;
      for (std::size_t i = 1; i < side; ++i) {
        const double* a = col_sums.data() + i * rank;
        double v = 0.0;
        for (std::size_t k = 0; k < rank; ++k) v += a[k] * b[k];
        out.at(i, j) = v;
      }
    });
  } else {
    parallel_for(1, side, [&](std::size_t j) {
      for (std::size_t i = 1; i < side; ++i) out.at(i, j) = tensor_sum(f, columns[i], rules.x, rows[j], rules.y);
    });
  }
  for (double v : out.values) {
    if (!std::isfinite(v)) throw DomainError("integrate_grid: non-finite integral value");
  }
  return out;
}

std::vector<double> rho_limit_gap(const Surface& f, const FractionalOrder& order, std::span<const double> rho_seq,
                                  double a, double c, double x, double y, int rule_n) {
  if (!(a > 0.0 && c > 0.0)) throw DomainError("rho_limit_gap: lower limits must be positive");
  OperatorSpec hadamard{OperatorKind::Hadamard, order, {0.0, 0.0, a, c}, rule_n};
  const double reference = hadamard_point(f, hadamard, x, y);
  std::vector<double> gaps;
  gaps.reserve(rho_seq.size());
  for (double rho : rho_seq) {
    OperatorSpec kat{OperatorKind::Katugampola, order, {rho, rho, a, c}, rule_n};
    gaps.push_back(std::abs(katugampola_point(f, kat, x, y) - reference));
  }
  return gaps;
}

}  // namespace fracdim
