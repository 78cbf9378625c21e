#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fracdim {

/// Closed rectangle [a, b] x [c, d] with a, c >= 0.
struct Rect {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double d = 1.0;

  double width() const { return b - a; }
  double height() const { return d - c; }
  bool contains(double x, double y) const { return x >= a && x <= b && y >= c && y <= d; }
  void validate() const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// i-th of N+1 uniform points on [lo, hi]; the last point is hi exactly.
inline double grid_coordinate(double lo, double hi, std::size_t i, std::size_t intervals) {
  if (i == intervals) return hi;
  return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(intervals);
}

// ---------------------------------------------------------------------------
// Catalog specifications
// ---------------------------------------------------------------------------

struct ConstantSpec {
  double value = 0.0;
};
/// p*x + q*y + r0
struct BilinearSpec {
  double p = 0.0, q = 0.0, r0 = 0.0;
};
/// sin(k1 pi x) sin(k2 pi y) + 1
struct SineProductSpec {
  double k1 = 1.0, k2 = 1.0;
};
/// sum_{k=0}^{K} lambda^(-kH) sin(lambda^k pi x) sin(lambda^k pi y), shifted by
/// sum_k lambda^(-kH) so it is non-negative.
struct Weierstrass2DSpec {
  double lambda = 2.0, hurst = 0.5;
  int terms = 20;
};
/// sum_{k=0}^{K} w^k tri(2^k x) tri(2^k y), tri = distance to the nearest integer.
struct Takagi2DSpec {
  double w = 0.5;
  int terms = 20;
};
/// g(x) g(y) + 1 with g(u) = u sin(1/u), g(0) = 0. Continuous, not of bounded variation.
struct OscillatorySineInvSpec {};
/// Bilinear interpolation of samples on a uniform x_count by y_count grid
/// spanning the rectangle. values are row-major with one row per y.
struct InterpolatedGridSpec {
  std::size_t x_count = 0;
  std::size_t y_count = 0;
  std::vector<double> values;
};

using SurfaceSpec = std::variant<ConstantSpec, BilinearSpec, SineProductSpec, Weierstrass2DSpec,
                                 Takagi2DSpec, OscillatorySineInvSpec, InterpolatedGridSpec>;

/// Parses the textual form used by the command line:
///   constant:C  bilinear:p,q,r0  sine:k1,k2  weierstrass:lambda,H[,K]
///   takagi:w[,K]  oscillatory  grid:path.csv
SurfaceSpec parse_surface_spec(std::string_view text);

/// Canonical label of a specification (round-trips through parse_surface_spec
/// except for grid data, labelled "grid").
std::string surface_label(const SurfaceSpec& spec);

/// Reads the grid CSV format: header line "x_count,y_count", then y_count
/// lines of x_count comma-separated decimal values.
InterpolatedGridSpec read_grid_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Surface
// ---------------------------------------------------------------------------

/// One rank-one piece fx(x) * fy(y) of a separable surface.
struct SeparableTerm {
  std::function<double(double)> fx;
  std::function<double(double)> fy;
};

/// A continuous real function on a rectangle. When `terms` is non-empty the
/// surface equals sum_k fx_k(x) fy_k(y) exactly, which lets grid integration
/// factor the tensor-product quadrature.
class Surface {
 public:
  using Eval = std::function<double(double, double)>;

  Surface(Rect rect, std::string label, Eval eval, std::vector<SeparableTerm> terms = {});

  double operator()(double x, double y) const { return eval_(x, y); }

  const Rect& rect() const { return rect_; }
  const std::string& label() const { return label_; }
  bool separable() const { return !terms_.empty(); }
  std::span<const SeparableTerm> terms() const { return terms_; }

 private:
  Rect rect_;
  std::string label_;
  Eval eval_;
  std::vector<SeparableTerm> terms_;
};

/// Builds a catalog surface. Throws InvalidArgument on bad parameters.
Surface make_surface(const SurfaceSpec& spec, const Rect& rect);

/// lambda * f + mu * g on f's rectangle (the rectangles must match).
Surface linear_combination(double lambda, const Surface& f, double mu, const Surface& g);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Uniform samples of a surface: n cells per side, each cell edge split into
/// `oversample` sample intervals, so (n*oversample + 1)^2 values.
struct SampledSurface {
  Rect rect;
  std::size_t n = 0;
  std::size_t oversample = 1;
  std::vector<double> values;  // row-major, row = y index
  std::string label;

  std::size_t points_per_side() const { return n * oversample + 1; }
  /// Sample at x index i, y index j.
  double at(std::size_t i, std::size_t j) const { return values[j * points_per_side() + i]; }
  double& at(std::size_t i, std::size_t j) { return values[j * points_per_side() + i]; }
};

SampledSurface sample_surface(const Surface& f, std::size_t n, std::size_t oversample);

/// Sampled maximum range of the surface over cell (i, j): max - min of the
/// (oversample+1)^2 samples covering [i, i+1] x [j, j+1] in cell units.
double range_over_cell(const SampledSurface& s, std::size_t i, std::size_t j);

/// Per-cell minima and maxima of all n x n cells, row-major with row = j.
struct CellExtrema {
  std::size_t n = 0;
  std::vector<double> min;
  std::vector<double> max;
};

CellExtrema cell_extrema(const SampledSurface& s);

}  // namespace fracdim
