#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracdim/surfaces.hpp"

namespace fracdim {

/// (level, count) pairs of a box-counting sweep; delta = side * 2^-k.
struct BoxCountCurve {
  std::vector<int> levels;
  std::vector<std::uint64_t> counts;
  std::string label;
  std::size_t oversample = 1;
  double side = 1.0;  // x-extent of the sampled rectangle

  double delta(std::size_t idx) const;
};

struct DimensionEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  /// Empty when the fit is degenerate (log counts have no spread).
  std::optional<double> r_squared;
  int k_min = 0;
  int k_max = 0;

  static constexpr double kReliableR2 = 0.9;
  bool reliable() const { return r_squared && *r_squared >= kReliableR2; }
};

/// Range-based count at dyadic level k:
///   sum over the 2^k x 2^k cells of max(ceil(R/delta), 1),
/// R being the sampled range of the surface over the cell and
/// delta = 2^-k times the x-extent of the rectangle. Requires s.n to be a
/// multiple of 2^k.
std::uint64_t box_count(const SampledSurface& s, int k);

struct CountBounds {
  std::uint64_t lower = 0;
  double upper = 0.0;
};

/// lower = box_count(s, k); upper = 2 m^2 + (1/delta) sum R over the
/// m = 2^k cells per side.
CountBounds lemma31_bounds(const SampledSurface& s, int k);

/// Counts at every level in [k_min, k_max]; k_min >= 1, k_max >= k_min + 2.
BoxCountCurve box_count_curve(const SampledSurface& s, int k_min, int k_max);

/// Least-squares line log2 N = slope * k + intercept. Needs >= 3 points.
DimensionEstimate estimate_dimension(const BoxCountCurve& curve);

/// CSV with columns k,delta,N,logN (natural log), 17 significant digits.
void write_curve_csv(std::ostream& out, const BoxCountCurve& curve);

}  // namespace fracdim
