#pragma once

#include <cstddef>
#include <vector>

namespace fracdim {

/// Gamma function for 0 < x <= 171 (Lanczos approximation, g = 607/128).
/// Relative error is below 1e-13 over the whole domain.
/// Throws DomainError outside (0, 171].
double gamma(double x);

/// Weighted rule for integrals of the form
///     int_0^1 (1 - u)^(alpha - 1) g(u) du  ~  sum_i weights[i] * g(nodes[i]).
///
/// `complements[i]` holds 1 - nodes[i] computed without cancellation; for
/// very small alpha the nodes nearest to 1 are not representable apart from
/// 1.0, while their complements still are.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> complements;
  std::vector<double> weights;
  double alpha = 1.0;

  std::size_t size() const { return nodes.size(); }

  template <typename Fn>
  double integrate(Fn&& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * g(nodes[i]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule on [0, 1] (weight 1). Requires n >= 1.
QuadratureRule gauss_legendre_unit(int n);

/// Desingularized Jacobi-weight rule: substitutes z = (1 - u)^alpha, places
/// Gauss-Legendre nodes in z and maps back, u_i = 1 - z_i^(1/alpha) and
/// w_i = legendre_weight_i / alpha. Exact for g(1 - z^(1/alpha)) polynomial
/// in z of degree <= 2n - 1 (e.g. any polynomial g when alpha = 1/2).
/// Requires 0 < alpha <= 1 and n >= 2; nodes are returned increasing.
QuadratureRule jacobi_rule(double alpha, int n);

/// Two-panel rule for the same weight, used by the fractional integrals.
/// [1/2, 1] carries the endpoint singularity and uses jacobi_rule(alpha, n)
/// rescaled; [0, 1/2] is graded as u = tau^4 / 2 with n Gauss-Legendre nodes
/// in tau, which absorbs u^(1/p) behaviour of the integrand at u = 0 (the
/// Katugampola node map with lower limit 0). 2n nodes in total.
QuadratureRule kernel_rule(double alpha, int n);

}  // namespace fracdim
