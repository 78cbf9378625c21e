#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fracdim/cli.hpp"

using fracdim::cli::run;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {
struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("FRACDIM_TEST_TMP");
  fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string last_line(const std::string& text) {
  std::string trimmed = text;
  while (!trimmed.empty() && trimmed.back() == '\n') trimmed.pop_back();
  return trimmed.substr(trimmed.rfind('\n') + 1);
}
}  // namespace

TEST_CASE("integrate prints a JSON object with the documented keys") {
  const Result r = invoke({"integrate", "--surface", "constant:1", "--alpha", "0.5,0.5", "--rho", "0,0", "--point",
                           "1,1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.size() == 5);
  CHECK(j["value"].get<double>() == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(j["operator"] == "katugampola");
  CHECK(j["order"] == json::array({0.5, 0.5}));
  CHECK(j["rho"] == json::array({0.0, 0.0}));
  CHECK(j["point"] == json::array({1.0, 1.0}));

  const Result h = invoke({"integrate", "--op", "hadamard", "--alpha", "1,1", "--point", "1,1"});
  REQUIRE(h.code == 0);
  const json jh = json::parse(h.out);
  CHECK(jh["rho"].is_null());
  CHECK(jh["value"].get<double>() == doctest::Approx(std::log(10.0) * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("argument errors exit with code 2") {
  CHECK(invoke({"integrate", "--alpha", "1.5,0.5", "--point", "0.5,0.5"}).code == 2);
  CHECK(invoke({"integrate", "--alpha", "0.5", "--point", "0.5,0.5"}).code == 2);
  CHECK(invoke({"integrate", "--rho", "-1,0", "--point", "0.5,0.5"}).code == 2);
  CHECK(invoke({"integrate", "--point", "1.5,0.5"}).code == 2);
  CHECK(invoke({"integrate"}).code == 2);
  CHECK(invoke({"boxdim", "--surface", "nosuch:1"}).code == 2);
  CHECK(invoke({"boxdim", "--n", "12", "--k", "3:7"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
}

TEST_CASE("boxdim of a constant surface") {
  const Result r = invoke({"boxdim", "--surface", "constant:2", "--n", "64", "--oversample", "2", "--k", "2:6"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("k,delta,N,logN\n2,0.25,16,", 0) == 0);
  const json j = json::parse(last_line(r.out));
  CHECK(j["slope"].get<double>() == doctest::Approx(2.0));
  CHECK(j["r_squared"].get<double>() == doctest::Approx(1.0));
  CHECK(j["reliable"] == true);
  CHECK(j["k_min"] == 2);
  CHECK(j["k_max"] == 6);
}

TEST_CASE("config file fills absent flags, explicit flags win") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# integrate defaults\n"
        << "surface = constant:1\n"
        << "alpha = 1,1\n"
        << "point = 1,1\n";
  }
  const Result from_file = invoke({"integrate", "--config", (dir / "run.cfg").string()});
  REQUIRE(from_file.code == 0);
  CHECK(json::parse(from_file.out)["value"].get<double>() == doctest::Approx(1.0));

  const Result override = invoke({"integrate", "--config", (dir / "run.cfg").string(), "--alpha", "0.5,0.5"});
  REQUIRE(override.code == 0);
  CHECK(json::parse(override.out)["value"].get<double>() == doctest::Approx(4.0 / std::numbers::pi));

  CHECK(invoke({"integrate", "--config", (dir / "missing.cfg").string()}).code == 2);
}

TEST_CASE("experiment runs are deterministic apart from timing") {
  const fs::path d1 = scratch("det1");
  const fs::path d2 = scratch("det2");
  const std::vector<std::string> base{"experiment", "theorem-main", "--surface", "sine:2,2", "--n", "64",
                                      "--oversample", "2", "--k", "2:5"};
  auto with_dir = [&](const fs::path& d) {
    auto a = base;
    a.push_back("--out-dir");
    a.push_back(d.string());
    return a;
  };
  const Result r1 = invoke(with_dir(d1));
  const Result r2 = invoke(with_dir(d2));
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(slurp(d1 / "theorem-main_surface0_f.csv") == slurp(d2 / "theorem-main_surface0_f.csv"));
  CHECK(slurp(d1 / "theorem-main_surface0_If.csv") == slurp(d2 / "theorem-main_surface0_If.csv"));
  auto drop_runtime = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, kept;
    while (std::getline(in, line)) kept += line.substr(0, line.rfind(',')) + "\n";
    return kept;
  };
  CHECK(drop_runtime(r1.out) == drop_runtime(r2.out));
  CHECK(r1.out.rfind("surface,alpha1,alpha2,rho1,rho2,dim_f,r2_f,dim_If,r2_If,runtime_s\n", 0) == 0);
}

TEST_CASE("hadamard experiment leaves rho columns empty") {
  const Result r = invoke({"experiment", "hadamard", "--surface", "sine:2,2", "--n", "32", "--oversample", "2",
                           "--k", "2:5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"sine:2,2\",0.5,0.5,,,") != std::string::npos);
}

TEST_CASE("separable experiment and verify succeed") {
  const Result s = invoke({"experiment", "separable"});
  REQUIRE(s.code == 0);
  const json j = json::parse(s.out);
  CHECK(j["pass"] == true);
  CHECK(j["max_rel_error"].get<double>() <= 1e-8);
  CHECK(j["points"] == 81);

  const Result v = invoke({"verify", "--points", "1"});
  CHECK(v.code == 0);
  CHECK(v.out.find("FAIL") == std::string::npos);
}
