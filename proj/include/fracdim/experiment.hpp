#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "fracdim/boxdim.hpp"
#include "fracdim/frac_integral.hpp"
#include "fracdim/surfaces.hpp"

namespace fracdim {

struct ExperimentConfig {
  SurfaceSpec surface = SineProductSpec{2.0, 2.0};
  Rect rect;
  OperatorSpec op;
  std::size_t grid_n = 512;
  std::size_t oversample = 4;
  int k_min = 3;
  int k_max = 7;
  std::string output_dir;
  std::uint64_t seed = 0;

  /// Window k_min >= 1, k_max >= k_min + 2, grid_n a multiple of 2^k_max,
  /// operator valid with lower limits at the rectangle corner.
  void validate() const;
};

/// Dimension of f and of its fractional integral, estimated on the same
/// sampling grid and fit window.
struct DimensionReport {
  std::string surface;
  OperatorSpec op;
  BoxCountCurve curve_f;
  BoxCountCurve curve_integral;
  DimensionEstimate dim_f;
  DimensionEstimate dim_integral;
  double runtime_s = 0.0;
};

DimensionReport run_dimension_experiment(const ExperimentConfig& config);

/// Report CSV: surface,alpha1,alpha2,rho1,rho2,dim_f,r2_f,dim_If,r2_If,runtime_s.
/// rho columns are empty for the Hadamard operator, r2 columns empty for
/// degenerate fits.
void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const DimensionReport& report);

struct SeparableCheck {
  double max_rel_error = 0.0;
  std::size_t points = 0;
};

/// Compares the mixed Hadamard integral of f(x, y) = h(x) with orders
/// (gamma1, 1) against log(y/c) times the univariate Hadamard integral of h,
/// on a grid_points x grid_points interior grid of [a, b] x [c, d].
SeparableCheck separable_identity_check(const std::function<double(double)>& h, double gamma1, const Rect& rect,
                                        std::size_t grid_points = 9, int rule_n = kDefaultRuleNodes);

/// Formats with 17 significant digits.
std::string format_real(double v);

}  // namespace fracdim
