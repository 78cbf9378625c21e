#pragma once

#include "fracdim/frac_integral.hpp"
#include "fracdim/surfaces.hpp"

namespace fracdim {

struct OracleOptions {
  double tol = 1e-10;
  /// Panel refinement ratio towards a singular edge (panel widths shrink by this factor).
  double ratio = 2.0;
  /// Graded levels tried first, added per refinement, and the cap.
  int start_levels = 8;
  int level_step = 4;
  int max_levels = 48;
};

struct OracleResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;  // graded levels per singular edge in the final pass
  bool converged = true;
};

/// Slow reference evaluation of the fractional integral directly in the
/// original variables s, t: graded Gauss-Legendre panels shrinking
/// geometrically towards each singular edge (s -> x always, s -> a when
/// a = 0 and rho != 0), with product integration against the exact power
/// singularity on the innermost panel. Refinement stops once two successive
/// level counts agree to `tol`; otherwise the result is flagged
/// non-converged. Shares no code with the transformed quadrature.
OracleResult direct_singular(const Surface& f, const OperatorSpec& spec, double x, double y,
                             const OracleOptions& options = {});

}  // namespace fracdim
