#include "fracdim/experiment.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <cmath>
#include <ostream>

#include "fracdim/error.hpp"

namespace fracdim {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void ExperimentConfig::validate() const {
  rect.validate();
  op.validate();
  if (op.params.a != rect.a || op.params.c != rect.c) {
    throw InvalidArgument("experiment: operator lower limits must equal the rectangle's lower corner");
  }
  if (k_min < 1 || k_max < k_min + 2) {
    throw InvalidArgument(fmt::format("experiment: need k_min >= 1 and k_max >= k_min + 2, got {}:{}", k_min, k_max));
  }
  if (k_max > 20) throw InvalidArgument("experiment: k_max must be <= 20");
  if (oversample < 1) throw InvalidArgument("experiment: oversample must be >= 1");
  const std::size_t cells = std::size_t{1} << k_max;
  if (grid_n < cells || grid_n % cells != 0) {
    throw InvalidArgument(fmt::format("experiment: grid_n = {} must be a multiple of 2^k_max = {}", grid_n, cells));
  }
}

DimensionReport run_dimension_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Surface f = make_surface(config.surface, config.rect);

  DimensionReport report;
  report.surface = f.label();
  report.op = config.op;
  {
    const SampledSurface samples = sample_surface(f, config.grid_n, config.oversample);
    report.curve_f = box_count_curve(samples, config.k_min, config.k_max);
  }
  {
    const SampledSurface integral = integrate_grid(f, config.op, config.grid_n, config.oversample);
    report.curve_integral = box_count_curve(integral, config.k_min, config.k_max);
  }
  report.dim_f = estimate_dimension(report.curve_f);
  report.dim_integral = estimate_dimension(report.curve_integral);
  report.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report_header(std::ostream& out) {
  out << "surface,alpha1,alpha2,rho1,rho2,dim_f,r2_f,dim_If,r2_If,runtime_s\n";
}

void write_report_row(std::ostream& out, const DimensionReport& r) {
  const bool kat = r.op.kind == OperatorKind::Katugampola;
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; };
  // Labels contain commas; quote them.
  fmt::print(out, "\"{}\",{},{},{},{},{},{},{},{},{}\n", r.surface, format_real(r.op.order.a1),
             format_real(r.op.order.a2), kat ? format_real(r.op.params.rho1) : "", kat ? format_real(r.op.params.rho2) : "",
             format_real(r.dim_f.slope), opt(r.dim_f.r_squared), format_real(r.dim_integral.slope),
             opt(r.dim_integral.r_squared), format_real(r.runtime_s));
}

SeparableCheck separable_identity_check(const std::function<double(double)>& h, double gamma1, const Rect& rect,
                                        std::size_t grid_points, int rule_n) {
  rect.validate();
  if (grid_points < 1) throw InvalidArgument("separable check: grid_points must be >= 1");
  const Surface f(rect, "h(x)", [h](double x, double) { return h(x); });
  const OperatorSpec spec{OperatorKind::Hadamard, {gamma1, 1.0}, {0.0, 0.0, rect.a, rect.c}, rule_n};
  SeparableCheck check;
  for (std::size_t i = 1; i <= grid_points; ++i) {
    const double x = grid_coordinate(rect.a, rect.b, i, grid_points + 1);
    const double univariate = hadamard_point_1d(h, gamma1, rect.a, x, rule_n);
    for (std::size_t j = 1; j <= grid_points; ++j) {
      const double y = grid_coordinate(rect.c, rect.d, j, grid_points + 1);
      const double mixed = hadamard_point(f, spec, x, y);
      const double expected = std::log(y / rect.c) * univariate;
      check.max_rel_error = std::max(check.max_rel_error, std::abs(mixed - expected) / std::abs(expected));
      ++check.points;
    }
  }
  return check;
}

}  // namespace fracdim
