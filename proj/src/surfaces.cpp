#include "fracdim/surfaces.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "fracdim/error.hpp"
#include "fracdim/parallel.hpp"

namespace fracdim {

void Rect::validate() const {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d))) {
    throw InvalidArgument("rectangle bounds must be finite");
  }
  if (a < 0.0 || c < 0.0) throw InvalidArgument("rectangle lower corner must be non-negative");
  if (!(b > a) || !(d > c)) throw InvalidArgument("rectangle must have positive width and height");
}

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    std::string_view field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || end != field.data() + field.size() || field.empty()) {
      throw InvalidArgument(fmt::format("{}: cannot parse number '{}'", what, field));
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int as_term_count(double v, std::string_view what) {
  if (v != std::floor(v) || v < 1.0 || v > 64.0) {
    throw InvalidArgument(fmt::format("{}: term count K must be an integer in [1, 64]", what));
  }
  return static_cast<int>(v);
}

void check_spec(const SurfaceSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantSpec>) {
          if (!std::isfinite(s.value)) throw InvalidArgument("constant: value must be finite");
        } else if constexpr (std::is_same_v<T, BilinearSpec>) {
          if (!(std::isfinite(s.p) && std::isfinite(s.q) && std::isfinite(s.r0)))
            throw InvalidArgument("bilinear: coefficients must be finite");
        } else if constexpr (std::is_same_v<T, SineProductSpec>) {
          if (!(std::isfinite(s.k1) && std::isfinite(s.k2)))
            throw InvalidArgument("sine: frequencies must be finite");
        } else if constexpr (std::is_same_v<T, Weierstrass2DSpec>) {
          if (!(s.lambda > 1.0) || !std::isfinite(s.lambda))
            throw InvalidArgument("weierstrass: lambda must be > 1");
          if (!(s.hurst > 0.0 && s.hurst < 1.0)) throw InvalidArgument("weierstrass: H must lie in (0, 1)");
          if (s.terms < 1) throw InvalidArgument("weierstrass: K must be >= 1");
        } else if constexpr (std::is_same_v<T, Takagi2DSpec>) {
          if (!(s.w >= 0.5 && s.w < 1.0)) throw InvalidArgument("takagi: w must lie in [0.5, 1)");
          if (s.terms < 1) throw InvalidArgument("takagi: K must be >= 1");
        } else if constexpr (std::is_same_v<T, InterpolatedGridSpec>) {
          if (s.x_count < 2 || s.y_count < 2) throw InvalidArgument("grid: need at least 2 points per axis");
          if (s.values.size() != s.x_count * s.y_count)
            throw InvalidArgument(fmt::format("grid: expected {} values, got {}", s.x_count * s.y_count,
                                              s.values.size()));
          for (double v : s.values)
            if (!std::isfinite(v)) throw InvalidArgument("grid: values must be finite");
        }
      },
      spec);
}

double tri(double x) { return std::abs(x - std::nearbyint(x)); }

double sin_inv(double u) { return u == 0.0 ? 0.0 : u * std::sin(1.0 / u); }

}  // namespace

SurfaceSpec parse_surface_spec(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  auto numbers = [&](std::size_t min_count, std::size_t max_count) {
    auto v = parse_numbers(args, kind);
    if (v.size() < min_count || v.size() > max_count) {
      throw InvalidArgument(fmt::format("surface '{}': expected {}..{} parameters, got {}", text, min_count,
                                        max_count, v.size()));
    }
    return v;
  };

  SurfaceSpec spec;
  if (kind == "constant") {
    spec = ConstantSpec{numbers(1, 1)[0]};
  } else if (kind == "bilinear") {
    const auto v = numbers(3, 3);
    spec = BilinearSpec{v[0], v[1], v[2]};
  } else if (kind == "sine") {
    const auto v = numbers(2, 2);
    spec = SineProductSpec{v[0], v[1]};
  } else if (kind == "weierstrass") {
    const auto v = numbers(2, 3);
    spec = Weierstrass2DSpec{v[0], v[1], v.size() == 3 ? as_term_count(v[2], kind) : 20};
  } else if (kind == "takagi") {
    const auto v = numbers(1, 2);
    spec = Takagi2DSpec{v[0], v.size() == 2 ? as_term_count(v[1], kind) : 20};
  } else if (kind == "oscillatory") {
    if (!args.empty()) throw InvalidArgument("surface 'oscillatory' takes no parameters");
    spec = OscillatorySineInvSpec{};
  } else if (kind == "grid") {
    if (args.empty()) throw InvalidArgument("surface 'grid' needs a CSV path: grid:path.csv");
    std::ifstream in{std::string(args)};
    if (!in) throw InvalidArgument(fmt::format("cannot open grid file '{}'", args));
    spec = read_grid_csv(in);
  } else {
    throw InvalidArgument(fmt::format("unknown surface kind '{}'", kind));
  }
  check_spec(spec);
  return spec;
}

std::string surface_label(const SurfaceSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantSpec>) {
          return fmt::format("constant:{}", s.value);
        } else if constexpr (std::is_same_v<T, BilinearSpec>) {
          return fmt::format("bilinear:{},{},{}", s.p, s.q, s.r0);
        } else if constexpr (std::is_same_v<T, SineProductSpec>) {
          return fmt::format("sine:{},{}", s.k1, s.k2);
        } else if constexpr (std::is_same_v<T, Weierstrass2DSpec>) {
          return fmt::format("weierstrass:{},{},{}", s.lambda, s.hurst, s.terms);
        } else if constexpr (std::is_same_v<T, Takagi2DSpec>) {
          return fmt::format("takagi:{},{}", s.w, s.terms);
        } else if constexpr (std::is_same_v<T, OscillatorySineInvSpec>) {
          return "oscillatory";
        } else {
          return "grid";
        }
      },
      spec);
}

InterpolatedGridSpec read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("grid CSV: missing header");
  const auto header = parse_numbers(line, "grid CSV header");
  if (header.size() != 2 || header[0] != std::floor(header[0]) || header[1] != std::floor(header[1]) ||
      header[0] < 2 || header[1] < 2) {
    throw InvalidArgument("grid CSV: header must be 'x_count,y_count' with counts >= 2");
  }
  InterpolatedGridSpec grid;
  grid.x_count = static_cast<std::size_t>(header[0]);
  grid.y_count = static_cast<std::size_t>(header[1]);
  grid.values.reserve(grid.x_count * grid.y_count);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto row = parse_numbers(line, "grid CSV row");
    if (row.size() != grid.x_count) {
      throw InvalidArgument(fmt::format("grid CSV: row {} has {} values, expected {}", rows + 1, row.size(),
                                        grid.x_count));
    }
    grid.values.insert(grid.values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows != grid.y_count) {
    throw InvalidArgument(fmt::format("grid CSV: expected {} rows, got {}", grid.y_count, rows));
  }
  check_spec(grid);
  return grid;
}

Surface::Surface(Rect rect, std::string label, Eval eval, std::vector<SeparableTerm> terms)
    : rect_(rect), label_(std::move(label)), eval_(std::move(eval)), terms_(std::move(terms)) {
  rect_.validate();
}

Surface make_surface(const SurfaceSpec& spec, const Rect& rect) {
  rect.validate();
  check_spec(spec);
  const std::string label = surface_label(spec);
  auto one = [](double) { return 1.0; };

  return std::visit(
      [&](const auto& s) -> Surface {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantSpec>) {
          const double v = s.value;
          return Surface(rect, label, [v](double, double) { return v; },
                         {{[v](double) { return v; }, one}});
        } else if constexpr (std::is_same_v<T, BilinearSpec>) {
          const double p = s.p, q = s.q, r0 = s.r0;
          return Surface(rect, label, [p, q, r0](double x, double y) { return p * x + q * y + r0; },
                         {{[p](double x) { return p * x; }, one},
                          {one, [q, r0](double y) { return q * y + r0; }}});
        } else if constexpr (std::is_same_v<T, SineProductSpec>) {
          const double w1 = s.k1 * kPi, w2 = s.k2 * kPi;
          return Surface(rect, label,
                         [w1, w2](double x, double y) { return std::sin(w1 * x) * std::sin(w2 * y) + 1.0; },
                         {{[w1](double x) { return std::sin(w1 * x); }, [w2](double y) { return std::sin(w2 * y); }},
                          {one, one}});
        } else if constexpr (std::is_same_v<T, Weierstrass2DSpec>) {
          auto freq = std::make_shared<std::vector<double>>();
          auto amp = std::make_shared<std::vector<double>>();
          double shift = 0.0;
          for (int k = 0; k <= s.terms; ++k) {
            freq->push_back(std::pow(s.lambda, k) * kPi);
            amp->push_back(std::pow(s.lambda, -k * s.hurst));
            shift += amp->back();
          }
          std::vector<SeparableTerm> terms;
          for (std::size_t k = 0; k < freq->size(); ++k) {
            const double f = (*freq)[k], c = (*amp)[k];
            terms.push_back({[f, c](double x) { return c * std::sin(f * x); }, [f](double y) { return std::sin(f * y); }});
          }
          terms.push_back({[shift](double) { return shift; }, one});
          return Surface(
              rect, label,
              [freq, amp, shift](double x, double y) {
                double sum = 0.0;
                for (std::size_t k = 0; k < freq->size(); ++k)
                  sum += (*amp)[k] * std::sin((*freq)[k] * x) * std::sin((*freq)[k] * y);
                return sum + shift;
              },
              std::move(terms));
        } else if constexpr (std::is_same_v<T, Takagi2DSpec>) {
          const double w = s.w;
          const int count = s.terms;
          std::vector<SeparableTerm> terms;
          for (int k = 0; k <= count; ++k) {
            const double scale = std::ldexp(1.0, k), c = std::pow(w, k);
            terms.push_back({[scale, c](double x) { return c * tri(scale * x); },
                             [scale](double y) { return tri(scale * y); }});
          }
          return Surface(
              rect, label,
              [w, count](double x, double y) {
                double sum = 0.0, c = 1.0;
                for (int k = 0; k <= count; ++k, c *= w) {
                  const double scale = std::ldexp(1.0, k);
                  sum += c * tri(scale * x) * tri(scale * y);
                }
                return sum;
              },
              std::move(terms));
        } else if constexpr (std::is_same_v<T, OscillatorySineInvSpec>) {
          // |u sin(1/u)| <= 1, so the +1 shift keeps the product non-negative anywhere.
          return Surface(rect, label, [](double x, double y) { return sin_inv(x) * sin_inv(y) + 1.0; },
                         {{sin_inv, sin_inv}, {one, one}});
        } else {
          auto grid = std::make_shared<const InterpolatedGridSpec>(s);
          const Rect r = rect;
          return Surface(rect, label, [grid, r](double x, double y) {
            const double fx = std::clamp((x - r.a) / r.width(), 0.0, 1.0) * static_cast<double>(grid->x_count - 1);
            const double fy = std::clamp((y - r.c) / r.height(), 0.0, 1.0) * static_cast<double>(grid->y_count - 1);
            const std::size_t i = std::min(static_cast<std::size_t>(fx), grid->x_count - 2);
            const std::size_t j = std::min(static_cast<std::size_t>(fy), grid->y_count - 2);
            const double tx = fx - static_cast<double>(i);
            const double ty = fy - static_cast<double>(j);
            const auto v = [&](std::size_t ii, std::size_t jj) { return grid->values[jj * grid->x_count + ii]; };
            return (1.0 - tx) * (1.0 - ty) * v(i, j) + tx * (1.0 - ty) * v(i + 1, j) +
                   (1.0 - tx) * ty * v(i, j + 1) + tx * ty * v(i + 1, j + 1);
          });
        }
      },
      spec);
}

Surface linear_combination(double lambda, const Surface& f, double mu, const Surface& g) {
  if (!(f.rect() == g.rect())) throw InvalidArgument("linear_combination: rectangles differ");
  std::vector<SeparableTerm> terms;
  if (f.separable() && g.separable()) {
    for (const auto& t : f.terms()) terms.push_back({[lambda, fx = t.fx](double x) { return lambda * fx(x); }, t.fy});
    for (const auto& t : g.terms()) terms.push_back({[mu, fx = t.fx](double x) { return mu * fx(x); }, t.fy});
  }
  return Surface(
      f.rect(), fmt::format("{}*({})+{}*({})", lambda, f.label(), mu, g.label()),
      [lambda, mu, f, g](double x, double y) { return lambda * f(x, y) + mu * g(x, y); }, std::move(terms));
}

SampledSurface sample_surface(const Surface& f, std::size_t n, std::size_t oversample) {
  if (n < 1) throw InvalidArgument("sample_surface: n must be >= 1");
  if (oversample < 1) throw InvalidArgument("sample_surface: oversample must be >= 1");
  SampledSurface s;
  s.rect = f.rect();
  s.n = n;
  s.oversample = oversample;
  s.label = f.label();
  const std::size_t side = s.points_per_side();
  const std::size_t intervals = side - 1;
  s.values.resize(side * side);
  std::vector<double> xs(side);
  for (std::size_t i = 0; i < side; ++i) xs[i] = grid_coordinate(s.rect.a, s.rect.b, i, intervals);
  parallel_for(0, side, [&](std::size_t j) {
    const double y = grid_coordinate(s.rect.c, s.rect.d, j, intervals);
    double* row = s.values.data() + j * side;
    for (std::size_t i = 0; i < side; ++i) row[i] = f(xs[i], y);
  });
  for (double v : s.values) {
    if (!std::isfinite(v)) throw DomainError("sample_surface: surface '" + s.label + "' produced a non-finite value");
  }
  return s;
}

double range_over_cell(const SampledSurface& s, std::size_t i, std::size_t j) {
  if (i >= s.n || j >= s.n) {
    throw InvalidArgument(fmt::format("range_over_cell: cell ({}, {}) outside {}x{} grid", i, j, s.n, s.n));
  }
  const std::size_t r = s.oversample;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t jj = j * r; jj <= (j + 1) * r; ++jj) {
    for (std::size_t ii = i * r; ii <= (i + 1) * r; ++ii) {
      const double v = s.at(ii, jj);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return hi - lo;
}

CellExtrema cell_extrema(const SampledSurface& s) {
  CellExtrema e;
  e.n = s.n;
  e.min.assign(s.n * s.n, 0.0);
  e.max.assign(s.n * s.n, 0.0);
  const std::size_t r = s.oversample;
  parallel_for(0, s.n, [&](std::size_t j) {
    for (std::size_t i = 0; i < s.n; ++i) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t jj = j * r; jj <= (j + 1) * r; ++jj) {
        for (std::size_t ii = i * r; ii <= (i + 1) * r; ++ii) {
          const double v = s.at(ii, jj);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      e.min[j * s.n + i] = lo;
      e.max[j * s.n + i] = hi;
    }
  });
  return e;
}

}  // namespace fracdim
