#include "fracdim/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fracdim/error.hpp"

namespace fracdim {

namespace {

// Godfrey's coefficients for g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

double lanczos_gamma(double x) {
  // Gamma(x) for x >= 0.5.
  const double z = x - 1.0;
  double series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  // t^(z+1/2) overflows near x = 171; split the power in two halves.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * series;
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0) || x > 171.0) {
    throw DomainError("gamma: argument must lie in (0, 171], got " + std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection keeps full accuracy near the pole at 0.
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  return lanczos_gamma(x);
}

QuadratureRule gauss_legendre_unit(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre_unit: n must be >= 1");
  QuadratureRule rule;
  rule.alpha = 1.0;
  const auto count = static_cast<std::size_t>(n);
  rule.nodes.resize(count);
  rule.complements.resize(count);
  rule.weights.resize(count);

  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Root i of P_n on [-1, 1], counted from the right end.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // Refresh the derivative at the converged root.
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);  // = 2 / ((1-x^2) P'^2) on [-1,1], halved for [0,1]
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    const auto lo = static_cast<std::size_t>(i);
    // Mapped to [0, 1]: u = (1 + x) / 2, 1 - u = (1 - x) / 2.
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.complements[hi] = 0.5 * (1.0 - x);
    rule.weights[hi] = w;
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.complements[lo] = 0.5 * (1.0 + x);
    rule.weights[lo] = w;
  }
  return rule;
}

QuadratureRule jacobi_rule(double alpha, int n) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw InvalidArgument("jacobi_rule: alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (n < 2) throw InvalidArgument("jacobi_rule: n must be >= 2, got " + std::to_string(n));

  const QuadratureRule legendre = gauss_legendre_unit(n);
  QuadratureRule rule;
  rule.alpha = alpha;
  const auto count = static_cast<std::size_t>(n);
  rule.nodes.resize(count);
  rule.complements.resize(count);
  rule.weights.resize(count);
  // z increasing maps to u decreasing; reverse so nodes come out increasing.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = count - 1 - i;
    const double z = legendre.nodes[k];
    const double complement = std::pow(z, 1.0 / alpha);
    rule.complements[i] = complement;
    rule.nodes[i] = 1.0 - complement;
    rule.weights[i] = legendre.weights[k] / alpha;
  }
  return rule;
}

QuadratureRule kernel_rule(double alpha, int n) {
  const QuadratureRule right = jacobi_rule(alpha, n);
  const QuadratureRule legendre = gauss_legendre_unit(n);
  constexpr double kGrade = 4.0;

  QuadratureRule rule;
  rule.alpha = alpha;
  const auto count = static_cast<std::size_t>(n);
  rule.nodes.reserve(2 * count);
  rule.complements.reserve(2 * count);
  rule.weights.reserve(2 * count);

  // Left panel: u = tau^4 / 2, du = 2 tau^3 dtau, weight (1 - u)^(alpha-1) is smooth here.
  for (std::size_t i = 0; i < count; ++i) {
    const double tau = legendre.nodes[i];
    const double u = 0.5 * std::pow(tau, kGrade);
    const double jac = 0.5 * kGrade * std::pow(tau, kGrade - 1.0);
    rule.nodes.push_back(u);
    rule.complements.push_back(1.0 - u);
    rule.weights.push_back(legendre.weights[i] * jac * std::pow(1.0 - u, alpha - 1.0));
  }
  // Right panel: u = (1 + w) / 2, so 1 - u = (1 - w) / 2 and the weight scales by 2^-alpha.
  const double scale = std::pow(0.5, alpha);
  for (std::size_t i = 0; i < count; ++i) {
    rule.nodes.push_back(0.5 + 0.5 * right.nodes[i]);
    rule.complements.push_back(0.5 * right.complements[i]);
    rule.weights.push_back(scale * right.weights[i]);
  }
  return rule;
}

}  // namespace fracdim
