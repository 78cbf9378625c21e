#include "fracdim/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "fracdim/boxdim.hpp"
#include "fracdim/error.hpp"
#include "fracdim/experiment.hpp"
#include "fracdim/frac_integral.hpp"
#include "fracdim/oracle.hpp"
#include "fracdim/surfaces.hpp"

namespace fracdim::cli {

namespace {

/// Argument problems detected after CLI11 parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> split_numbers(const std::string& text, char sep, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("{}: cannot parse '{}'", what, text));
    }
  }
  if (out.size() != count) throw UsageError(fmt::format("{}: expected {} values, got '{}'", what, count, text));
  return out;
}

std::string json_pair(double a, double b) { return fmt::format("[{},{}]", format_real(a), format_real(b)); }

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  file << content;
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::filesystem::path path(dir);
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw UsageError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
  return path;
}

/// Operator and sampling flags shared by several subcommands.
struct Options {
  std::string op = "katugampola";
  std::string alpha = "0.5,0.5";
  std::string rho = "0,0";
  std::string rect;
  int nodes = kDefaultRuleNodes;
  std::string point;
  std::vector<std::string> surfaces;
  std::size_t n = 512;
  std::size_t oversample = 4;
  std::string window = "3:7";
  std::string out_dir;
  std::uint64_t seed = 0;
  // separable experiment
  double gamma1 = 0.5;
  std::string lower = "0.2,0.2";
  std::size_t grid_points = 9;
  // verify
  std::size_t points = 3;
};

OperatorKind parse_kind(const std::string& op) {
  if (op == "katugampola") return OperatorKind::Katugampola;
  if (op == "hadamard") return OperatorKind::Hadamard;
  throw UsageError(fmt::format("--op must be 'katugampola' or 'hadamard', got '{}'", op));
}

Rect parse_rect(const Options& o, OperatorKind kind) {
  if (o.rect.empty()) return kind == OperatorKind::Hadamard ? Rect{0.1, 1.0, 0.1, 1.0} : Rect{};
  const auto v = split_numbers(o.rect, ',', 4, "--rect");
  return Rect{v[0], v[1], v[2], v[3]};
}

OperatorSpec parse_operator(const Options& o, const Rect& rect) {
  OperatorSpec spec;
  spec.kind = parse_kind(o.op);
  const auto order = split_numbers(o.alpha, ',', 2, "--alpha");
  spec.order = {order[0], order[1]};
  if (spec.kind == OperatorKind::Katugampola) {
    const auto rho = split_numbers(o.rho, ',', 2, "--rho");
    spec.params.rho1 = rho[0];
    spec.params.rho2 = rho[1];
  }
  spec.params.a = rect.a;
  spec.params.c = rect.c;
  spec.rule_n = o.nodes;
  try {
    spec.order.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(fmt::format("invalid --alpha: {}", e.what()));
  }
  return spec;
}

std::pair<int, int> parse_window(const std::string& text) {
  const auto v = split_numbers(text, ':', 2, "--k");
  if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) throw UsageError("--k: levels must be integers");
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

std::string estimate_json(const std::string& label, const DimensionEstimate& e) {
  return fmt::format(R"({{"surface":{},"slope":{},"intercept":{},"r_squared":{},"reliable":{},"k_min":{},"k_max":{}}})",
                     json_string(label), format_real(e.slope), format_real(e.intercept),
                     e.r_squared ? format_real(*e.r_squared) : "null", e.reliable() ? "true" : "false", e.k_min,
                     e.k_max);
}

int cmd_integrate(const Options& o, std::ostream& out) {
  const OperatorKind kind = parse_kind(o.op);
  const Rect rect = parse_rect(o, kind);
  const OperatorSpec spec = parse_operator(o, rect);
  if (o.point.empty()) throw UsageError("--point x,y is required");
  const auto pt = split_numbers(o.point, ',', 2, "--point");
  const Surface f = make_surface(parse_surface_spec(o.surfaces.empty() ? "constant:1" : o.surfaces.front()), rect);
  const double value = fractional_integral(f, spec, pt[0], pt[1]);
  const std::string rho = kind == OperatorKind::Katugampola ? json_pair(spec.params.rho1, spec.params.rho2) : "null";
  fmt::print(out, R"({{"value":{},"operator":"{}","order":{},"rho":{},"point":{}}})" "\n", format_real(value),
             to_string(kind), json_pair(spec.order.a1, spec.order.a2), rho, json_pair(pt[0], pt[1]));
  return kExitOk;
}

int cmd_boxdim(const Options& o, std::ostream& out) {
  const Rect rect = o.rect.empty() ? Rect{} : parse_rect(o, OperatorKind::Katugampola);
  const auto [k_min, k_max] = parse_window(o.window);
  const Surface f = make_surface(parse_surface_spec(o.surfaces.empty() ? "sine:2,2" : o.surfaces.front()), rect);
  const SampledSurface samples = sample_surface(f, o.n, o.oversample);
  const BoxCountCurve curve = box_count_curve(samples, k_min, k_max);
  const DimensionEstimate estimate = estimate_dimension(curve);
  std::ostringstream csv;
  write_curve_csv(csv, curve);
  const std::string json = estimate_json(f.label(), estimate) + "\n";
  out << csv.str() << json;
  if (!o.out_dir.empty()) {
    const auto dir = prepare_dir(o.out_dir);
    write_file(dir / "curve.csv", csv.str());
    write_file(dir / "estimate.json", json);
  }
  return kExitOk;
}

int cmd_dimension_experiment(const Options& o, OperatorKind kind, const std::string& name, std::ostream& out,
                             std::ostream& err) {
  const Rect rect = parse_rect(o, kind);
  Options effective = o;
  effective.op = std::string(to_string(kind));
  const OperatorSpec spec = parse_operator(effective, rect);
  const auto [k_min, k_max] = parse_window(o.window);
  std::vector<std::string> surfaces = o.surfaces;
  if (surfaces.empty()) surfaces = {"sine:2,2", "oscillatory", "bilinear:1,1,0"};

  std::ostringstream report;
  write_report_header(report);
  std::optional<std::filesystem::path> dir;
  if (!o.out_dir.empty()) dir = prepare_dir(o.out_dir);
  for (std::size_t idx = 0; idx < surfaces.size(); ++idx) {
    ExperimentConfig config;
    config.surface = parse_surface_spec(surfaces[idx]);
    config.rect = rect;
    config.op = spec;
    config.grid_n = o.n;
    config.oversample = o.oversample;
    config.k_min = k_min;
    config.k_max = k_max;
    config.output_dir = o.out_dir;
    config.seed = o.seed;
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const DimensionReport r = run_dimension_experiment(config);
    write_report_row(report, r);
    fmt::print(err, "{}: dim f = {:.4f}, dim I f = {:.4f} ({:.1f} s)\n", r.surface, r.dim_f.slope,
               r.dim_integral.slope, r.runtime_s);
    if (dir) {
      std::ostringstream cf, ci;
      write_curve_csv(cf, r.curve_f);
      write_curve_csv(ci, r.curve_integral);
      write_file(*dir / fmt::format("{}_surface{}_f.csv", name, idx), cf.str());
      write_file(*dir / fmt::format("{}_surface{}_If.csv", name, idx), ci.str());
    }
  }
  out << report.str();
  if (dir) write_file(*dir / (name + ".csv"), report.str());
  return kExitOk;
}

int cmd_separable(const Options& o, std::ostream& out) {
  const auto lower = split_numbers(o.lower, ',', 2, "--lower");
  const Rect rect{lower[0], 1.0, lower[1], 1.0};
  auto h = [](double x) { return 1.0 + std::sin(2.0 * std::numbers::pi * x); };
  const SeparableCheck check = separable_identity_check(h, o.gamma1, rect, o.grid_points, o.nodes);
  constexpr double kThreshold = 1e-8;
  const std::string json =
      fmt::format(R"({{"max_rel_error":{},"gamma1":{},"a":{},"c":{},"points":{},"pass":{}}})" "\n",
                  format_real(check.max_rel_error), format_real(o.gamma1), format_real(rect.a), format_real(rect.c),
                  check.points, check.max_rel_error <= kThreshold ? "true" : "false");
  out << json;
  if (!o.out_dir.empty()) write_file(prepare_dir(o.out_dir) / "separable.json", json);
  return check.max_rel_error <= kThreshold ? kExitOk : kExitFailed;
}

int cmd_verify(const Options& o, std::ostream& out) {
  bool all_pass = true;
  auto report = [&](bool pass, const std::string& what) {
    all_pass = all_pass && pass;
    fmt::print(out, "{} {}\n", pass ? "PASS" : "FAIL", what);
  };

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> coord(0.05, 1.0);
  const Surface sine = make_surface(SineProductSpec{2.0, 2.0}, Rect{});
  const std::vector<std::pair<FractionalOrder, std::pair<double, double>>> cases = {
      {{0.5, 0.5}, {0.0, 0.0}}, {{0.3, 0.8}, {-0.5, 1.0}}, {{0.8, 0.3}, {1.0, -0.5}}};
  for (const auto& [order, rho] : cases) {
    const OperatorSpec spec{OperatorKind::Katugampola, order, {rho.first, rho.second, 0.0, 0.0}, o.nodes};
    for (std::size_t p = 0; p < o.points; ++p) {
      const double x = coord(rng), y = coord(rng);
      const double fast = katugampola_point(sine, spec, x, y);
      const OracleResult slow = direct_singular(sine, spec, x, y);
      const double diff = std::abs(fast - slow.value);
      report(slow.converged && diff <= std::max(1e-8, 1e-6 * std::abs(slow.value)),
             fmt::format("oracle katugampola alpha=({},{}) rho=({},{}) point=({:.6f},{:.6f}) diff={:.3e}", order.a1,
                         order.a2, rho.first, rho.second, x, y, diff));
    }
  }
  {
    const Rect rect{0.1, 1.0, 0.1, 1.0};
    const Surface f = make_surface(SineProductSpec{2.0, 2.0}, rect);
    const OperatorSpec spec{OperatorKind::Hadamard, {0.5, 0.5}, {0.0, 0.0, 0.1, 0.1}, o.nodes};
    std::uniform_real_distribution<double> inner(0.15, 1.0);
    for (std::size_t p = 0; p < o.points; ++p) {
      const double x = inner(rng), y = inner(rng);
      const double fast = hadamard_point(f, spec, x, y);
      const OracleResult slow = direct_singular(f, spec, x, y);
      const double diff = std::abs(fast - slow.value);
      report(slow.converged && diff <= std::max(1e-8, 1e-6 * std::abs(slow.value)),
             fmt::format("oracle hadamard gamma=(0.5,0.5) point=({:.6f},{:.6f}) diff={:.3e}", x, y, diff));
    }
  }

  const std::vector<SurfaceSpec> catalog = {ConstantSpec{1.0},          BilinearSpec{1.0, 1.0, 0.0},
                                            SineProductSpec{2.0, 2.0},  Weierstrass2DSpec{2.0, 0.5, 20},
                                            Takagi2DSpec{0.7, 20},      OscillatorySineInvSpec{}};
  for (const auto& spec : catalog) {
    const SampledSurface s = sample_surface(make_surface(spec, Rect{}), 128, 4);
    bool ok = true;
    for (int k = 2; k <= 7; ++k) {
      const CountBounds b = lemma31_bounds(s, k);
      ok = ok && static_cast<double>(b.lower) <= b.upper && b.lower == box_count(s, k);
    }
    report(ok, fmt::format("count sandwich {} k=2..7", surface_label(spec)));
  }
  fmt::print(out, "{}\n", all_pass ? "verify: all checks passed" : "verify: FAILED");
  return all_pass ? kExitOk : kExitFailed;
}

}  // namespace

std::vector<std::string> read_config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config file '{}'", path));
  std::vector<std::string> tokens;
  std::string line;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string{};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("config line '{}' is not key=value", line));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(fmt::format("config line '{}' has an empty key", line));
    tokens.push_back("--" + key);
    tokens.push_back(trim(line.substr(eq + 1)));
  }
  return tokens;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fractional integrals of bivariate functions and box dimension of their graphs", "fracdim"};
  app.require_subcommand(1);

  auto add_operator = [&](CLI::App* sub) {
    sub->add_option("--op", o.op, "katugampola or hadamard");
    sub->add_option("--alpha", o.alpha, "orders a1,a2 in (0,1]");
    sub->add_option("--rho", o.rho, "Katugampola exponents rho1,rho2 > -1");
    sub->add_option("--rect", o.rect, "rectangle a,b,c,d (default [0,1]^2, [0.1,1]^2 for hadamard)");
    sub->add_option("--nodes", o.nodes, "quadrature nodes per panel and axis");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "cells per side");
    sub->add_option("--oversample", o.oversample, "samples per cell edge");
    sub->add_option("--k", o.window, "fit window kmin:kmax");
    sub->add_option("--out-dir", o.out_dir, "directory for CSV/JSON artifacts");
    sub->add_option("--seed", o.seed, "seed for random check points");
  };

  auto* integrate = app.add_subcommand("integrate", "evaluate a fractional integral at one point");
  add_operator(integrate);
  integrate->add_option("--surface", o.surfaces, "surface, e.g. constant:1, sine:2,2")->expected(1);
  integrate->add_option("--point", o.point, "evaluation point x,y")->required();

  auto* boxdim = app.add_subcommand("boxdim", "box-counting dimension of a surface graph");
  boxdim->add_option("--surface", o.surfaces, "surface specification")->expected(1);
  boxdim->add_option("--rect", o.rect, "rectangle a,b,c,d");
  add_sampling(boxdim);

  auto* experiment = app.add_subcommand("experiment", "dimension-preservation experiments");
  experiment->require_subcommand(1);
  auto* theorem = experiment->add_subcommand("theorem-main", "dim f and dim of its Katugampola integral");
  auto* hadamard = experiment->add_subcommand("hadamard", "dim f and dim of its Hadamard integral");
  for (auto* sub : {theorem, hadamard}) {
    sub->add_option("--surface", o.surfaces, "surface specification (repeatable)");
    sub->add_option("--alpha", o.alpha, "orders a1,a2 in (0,1]");
    sub->add_option("--rect", o.rect, "rectangle a,b,c,d");
    sub->add_option("--nodes", o.nodes, "quadrature nodes per panel and axis");
    add_sampling(sub);
  }
  theorem->add_option("--rho", o.rho, "Katugampola exponents rho1,rho2 > -1");
  auto* separable = experiment->add_subcommand("separable", "Hadamard identity for f(x,y) = h(x), gamma2 = 1");
  separable->add_option("--gamma1", o.gamma1, "order along x");
  separable->add_option("--lower", o.lower, "lower limits a,c > 0");
  separable->add_option("--grid-points", o.grid_points, "interior points per axis");
  separable->add_option("--nodes", o.nodes, "quadrature nodes per panel and axis");
  separable->add_option("--out-dir", o.out_dir, "directory for the JSON artifact");

  auto* verify = app.add_subcommand("verify", "oracle cross-checks and box-count sandwich");
  verify->add_option("--points", o.points, "random points per oracle case");
  verify->add_option("--seed", o.seed, "seed for random check points");
  verify->add_option("--nodes", o.nodes, "quadrature nodes per panel and axis");

  try {
    std::vector<std::string> args = raw_args;
    // Flat key=value config: appended tokens only fill options absent from the command line.
    if (auto it = std::find(args.begin(), args.end(), "--config"); it != args.end()) {
      if (std::next(it) == args.end()) throw UsageError("--config needs a file path");
      const std::string path = *std::next(it);
      args.erase(it, std::next(it, 2));
      const auto tokens = read_config_tokens(path);
      for (std::size_t i = 0; i + 1 < tokens.size(); i += 2) {
        const std::string& key = tokens[i];
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
          return a == key || a.rfind(key + "=", 0) == 0;
        });
        if (!given) {
          args.push_back(key);
          args.push_back(tokens[i + 1]);
        }
      }
    }
    std::vector<const char*> argv{"fracdim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      fmt::print(err, "error: {}\n", e.what());
      return kExitUsage;
    }

    if (integrate->parsed()) return cmd_integrate(o, out);
    if (boxdim->parsed()) return cmd_boxdim(o, out);
    if (theorem->parsed()) return cmd_dimension_experiment(o, OperatorKind::Katugampola, "theorem-main", out, err);
    if (hadamard->parsed()) return cmd_dimension_experiment(o, OperatorKind::Hadamard, "hadamard", out, err);
    if (separable->parsed()) return cmd_separable(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailed;
  }
}

}  // namespace fracdim::cli
