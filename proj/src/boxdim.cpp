#include "fracdim/boxdim.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "fracdim/error.hpp"

namespace fracdim {

namespace {

// Guards ceil() against ranges that equal an integer multiple of delta up to rounding.
constexpr double kCeilSlack = 1e-9;

struct LevelRanges {
  std::size_t cells = 0;  // per side
  double delta = 0.0;
  std::vector<double> ranges;
};

LevelRanges level_ranges(const SampledSurface& s, const CellExtrema& base, int k) {
  if (k < 0 || k > 30) throw InvalidArgument(fmt::format("dyadic level {} out of range", k));
  const std::size_t cells = std::size_t{1} << k;
  if (s.n % cells != 0) {
    throw InvalidArgument(fmt::format("box grid at level {} ({} cells) is misaligned with {} sampled cells", k, cells, s.n));
  }
  const std::size_t block = s.n / cells;
  LevelRanges out{cells, std::ldexp(s.rect.width(), -k), std::vector<double>(cells * cells)};
  for (std::size_t bj = 0; bj < cells; ++bj) {
    for (std::size_t bi = 0; bi < cells; ++bi) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t j = bj * block; j < (bj + 1) * block; ++j) {
        for (std::size_t i = bi * block; i < (bi + 1) * block; ++i) {
          lo = std::min(lo, base.min[j * s.n + i]);
          hi = std::max(hi, base.max[j * s.n + i]);
        }
      }
      out.ranges[bj * cells + bi] = hi - lo;
    }
  }
  return out;
}

std::uint64_t count_from(const LevelRanges& lr) {
  std::uint64_t total = 0;
  for (double r : lr.ranges) {
    const double boxes = std::ceil(r / lr.delta - kCeilSlack);
    total += static_cast<std::uint64_t>(std::max(boxes, 1.0));
  }
  return total;
}

}  // namespace

double BoxCountCurve::delta(std::size_t idx) const { return std::ldexp(side, -levels.at(idx)); }

std::uint64_t box_count(const SampledSurface& s, int k) { return count_from(level_ranges(s, cell_extrema(s), k)); }

CountBounds lemma31_bounds(const SampledSurface& s, int k) {
  const LevelRanges lr = level_ranges(s, cell_extrema(s), k);
  double range_sum = 0.0;
  for (double r : lr.ranges) range_sum += r;
  const double m = static_cast<double>(lr.cells);
  return {count_from(lr), 2.0 * m * m + range_sum / lr.delta};
}

BoxCountCurve box_count_curve(const SampledSurface& s, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min + 2) {
    throw InvalidArgument(fmt::format("box_count_curve: need k_min >= 1 and k_max >= k_min + 2, got {}:{}", k_min, k_max));
  }
  const CellExtrema base = cell_extrema(s);
  BoxCountCurve curve;
  curve.label = s.label;
  curve.oversample = s.oversample;
  curve.side = s.rect.width();
  for (int k = k_min; k <= k_max; ++k) {
    curve.levels.push_back(k);
    curve.counts.push_back(count_from(level_ranges(s, base, k)));
  }
  return curve;
}

DimensionEstimate estimate_dimension(const BoxCountCurve& curve) {
  const std::size_t n = curve.levels.size();
  if (n < 3 || curve.counts.size() != n) throw InvalidArgument("estimate_dimension: need at least 3 (k, N) points");
  double mean_k = 0.0, mean_y = 0.0;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (curve.counts[i] == 0) throw InvalidArgument("estimate_dimension: counts must be positive");
    y[i] = std::log2(static_cast<double>(curve.counts[i]));
    mean_k += curve.levels[i];
    mean_y += y[i];
  }
  mean_k /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = curve.levels[i] - mean_k;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InvalidArgument("estimate_dimension: levels must not all coincide");
  DimensionEstimate est;
  est.slope = sxy / sxx;
  est.intercept = mean_y - est.slope * mean_k;
  est.k_min = *std::min_element(curve.levels.begin(), curve.levels.end());
  est.k_max = *std::max_element(curve.levels.begin(), curve.levels.end());
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (est.slope * curve.levels[i] + est.intercept);
      ss_res += e * e;
    }
    est.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return est;
}

void write_curve_csv(std::ostream& out, const BoxCountCurve& curve) {
  out << "k,delta,N,logN\n";
  for (std::size_t i = 0; i < curve.levels.size(); ++i) {
    fmt::print(out, "{},{:.17g},{},{:.17g}\n", curve.levels[i], curve.delta(i), curve.counts[i],
               std::log(static_cast<double>(curve.counts[i])));
  }
}

}  // namespace fracdim
