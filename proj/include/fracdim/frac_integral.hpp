#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "fracdim/special.hpp"
#include "fracdim/surfaces.hpp"

namespace fracdim {

/// Per-axis orders (alpha_1, alpha_2), or (gamma_1, gamma_2) for Hadamard.
/// Both must lie in (0, 1]; 1 is admitted for closed-form checks.
struct FractionalOrder {
  double a1 = 0.5;
  double a2 = 0.5;

  void validate() const;
};

/// Kernel exponents and lower integration limits. rho > -1 on both axes.
struct KatugampolaParams {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double a = 0.0;
  double c = 0.0;
};

enum class OperatorKind { Katugampola, Hadamard };

std::string_view to_string(OperatorKind kind);

inline constexpr int kDefaultRuleNodes = 64;

struct OperatorSpec {
  OperatorKind kind = OperatorKind::Katugampola;
  FractionalOrder order;
  KatugampolaParams params;  // rho fields are ignored for Hadamard
  int rule_n = kDefaultRuleNodes;  // nodes per panel of kernel_rule, per axis

  /// Checks orders, rho (Katugampola), a, c >= 0 and a, c > 0 for Hadamard.
  void validate() const;
};

/// Mixed Katugampola fractional integral at (x, y):
///
///   (rho1+1)^(1-a1) (rho2+1)^(1-a2) / (G(a1) G(a2))
///     * int_a^x int_c^y (x^p1 - s^p1)^(a1-1) (y^p2 - t^p2)^(a2-1) s^rho1 t^rho2 f(s,t) dt ds
///
/// with p = rho + 1. Evaluated after the substitution
/// u = (s^p - a^p) / (x^p - a^p), which turns each axis into
/// (x^p - a^p)^alpha / p^alpha * int_0^1 (1-u)^(alpha-1) f(s(u)) du.
double katugampola_point(const Surface& f, const OperatorSpec& spec, double x, double y);

/// Mixed Hadamard fractional integral at (x, y):
///
///   1 / (G(g1) G(g2)) int_a^x int_c^y log(x/u)^(g1-1) log(y/v)^(g2-1) f(u,v) / (uv) dv du
///
/// via u = a (x/a)^p on each axis. Requires a, c > 0.
double hadamard_point(const Surface& f, const OperatorSpec& spec, double x, double y);

/// Univariate Hadamard integral 1/G(g) int_a^x log(x/u)^(g-1) h(u)/u du.
double hadamard_point_1d(const std::function<double(double)>& h, double gamma1, double a, double x,
                         int rule_n = kDefaultRuleNodes);

/// Dispatches on spec.kind.
double fractional_integral(const Surface& f, const OperatorSpec& spec, double x, double y);

enum class GridPath { Auto, Direct, Separable };

/// Fractional integral sampled on the uniform grid of `grid_n * oversample`
/// intervals per side of f's rectangle. Row x = a and column y = c are zero.
/// Separable surfaces are evaluated by factoring the tensor-product sum per
/// axis (same nodes and weights as the point evaluation).
SampledSurface integrate_grid(const Surface& f, const OperatorSpec& spec, std::size_t grid_n,
                              std::size_t oversample = 1, GridPath path = GridPath::Auto);

/// |Katugampola(rho, rho) - Hadamard| at (x, y) for each rho of the sequence,
/// both with lower limits (a, c).
std::vector<double> rho_limit_gap(const Surface& f, const FractionalOrder& order, std::span<const double> rho_seq,
                                  double a, double c, double x, double y, int rule_n = kDefaultRuleNodes);

namespace detail {

/// Nodes and scale for one axis of the transformed integral:
///   axis integral = scale * sum_i weights[i] * g(points[i]).
struct AxisNodes {
  double scale = 0.0;
  std::vector<double> points;
};

/// Katugampola node map s(u) = (a^p + u (x^p - a^p))^(1/p); for a = 0 this is x u^(1/p).
AxisNodes katugampola_axis(const QuadratureRule& rule, double order, double rho, double lower, double upper);
/// Hadamard node map s(u) = a (x/a)^u.
AxisNodes hadamard_axis(const QuadratureRule& rule, double order, double lower, double upper);

}  // namespace detail

}  // namespace fracdim
