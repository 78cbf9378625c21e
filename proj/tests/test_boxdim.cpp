#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fracdim/boxdim.hpp"
#include "fracdim/error.hpp"

using namespace fracdim;

namespace {
SampledSurface sample(const SurfaceSpec& spec, std::size_t n, std::size_t r, Rect rect = {}) {
  return sample_surface(make_surface(spec, rect), n, r);
}

std::vector<SurfaceSpec> catalog() {
  return {ConstantSpec{1.0},
          BilinearSpec{1.0, 1.0, 0.0},
          SineProductSpec{2.0, 2.0},
          Weierstrass2DSpec{2.0, 0.5, 20},
          Takagi2DSpec{0.5, 20},
          OscillatorySineInvSpec{}};
}
}  // namespace

TEST_CASE("box_count examples") {
  CHECK(box_count(sample(ConstantSpec{5.0}, 8, 2), 3) == 64);
  for (int k = 1; k <= 5; ++k) {
    const auto s = sample(BilinearSpec{1.0, 0.0, 0.0}, 32, 2);
    CHECK(box_count(s, k) == (std::uint64_t{1} << (2 * k)));
  }
  // single cell of range 3.2 delta
  const SampledSurface s{Rect{}, 1, 1, {0.0, 0.0, 0.0, 3.2}, "manual"};
  CHECK(box_count(s, 0) == 4);
  // exact multiples of delta are not rounded up
  const SampledSurface t{Rect{}, 2, 1, {0.0, 0.5, 1.0, 0.0, 0.5, 1.0, 0.0, 0.5, 1.0}, "ramp"};
  CHECK(box_count(t, 1) == 4);
}

TEST_CASE("lemma31_bounds examples") {
  const auto c = lemma31_bounds(sample(ConstantSpec{1.0}, 4, 1), 2);
  CHECK(c.lower == 16);
  CHECK(c.upper == doctest::Approx(32.0));
  const auto x = lemma31_bounds(sample(BilinearSpec{1.0, 0.0, 0.0}, 4, 1), 2);
  CHECK(x.lower == 16);
  CHECK(x.upper == doctest::Approx(48.0));
  const auto w = sample(Weierstrass2DSpec{2.0, 0.5, 20}, 128, 4);
  for (int k = 2; k <= 7; ++k) {
    const auto b = lemma31_bounds(w, k);
    CHECK(static_cast<double>(b.lower) <= b.upper);
  }
}

TEST_CASE("box_count_curve and estimate_dimension") {
  const auto one = sample(ConstantSpec{1.0}, 64, 2);
  const BoxCountCurve curve = box_count_curve(one, 2, 6);
  REQUIRE(curve.levels == std::vector<int>{2, 3, 4, 5, 6});
  REQUIRE(curve.counts == std::vector<std::uint64_t>{16, 64, 256, 1024, 4096});
  CHECK(curve.delta(0) == 0.25);
  const DimensionEstimate e = estimate_dimension(curve);
  CHECK(e.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  REQUIRE(e.r_squared);
  CHECK(*e.r_squared == doctest::Approx(1.0));
  CHECK(e.reliable());
  CHECK(e.k_min == 2);
  CHECK(e.k_max == 6);

  const auto sine = sample(SineProductSpec{2.0, 2.0}, 512, 4);
  const DimensionEstimate es = estimate_dimension(box_count_curve(sine, 3, 7));
  CHECK(es.slope >= 1.95);
  CHECK(es.slope <= 2.05);

  BoxCountCurve flat;
  flat.levels = {1, 2, 3};
  flat.counts = {7, 7, 7};
  const DimensionEstimate ef = estimate_dimension(flat);
  CHECK(ef.slope == 0.0);
  CHECK_FALSE(ef.r_squared.has_value());
  CHECK_FALSE(ef.reliable());

  BoxCountCurve two;
  two.levels = {1, 2};
  two.counts = {4, 16};
  CHECK_THROWS_AS(estimate_dimension(two), InvalidArgument);
  CHECK_THROWS_AS(box_count_curve(one, 0, 4), InvalidArgument);
  CHECK_THROWS_AS(box_count_curve(one, 2, 3), InvalidArgument);
}

TEST_CASE("misaligned levels are rejected") {
  const auto s = sample(SineProductSpec{1.0, 1.0}, 12, 1);
  CHECK_THROWS_AS(box_count(s, 3), InvalidArgument);
  CHECK_NOTHROW(box_count(s, 2));
}

TEST_CASE("count invariants on the catalog") {
  for (const auto& spec : catalog()) {
    const auto s = sample(spec, 128, 4);
    CAPTURE(surface_label(spec));
    std::uint64_t prev = 0;
    for (int k = 2; k <= 7; ++k) {
      const std::uint64_t n = box_count(s, k);
      CHECK(n >= (std::uint64_t{1} << (2 * k)));
      CHECK(n >= prev);
      prev = n;
      const auto b = lemma31_bounds(s, k);
      CHECK(b.lower == n);
      CHECK(static_cast<double>(b.lower) <= b.upper);
    }
    // shifting by a constant changes nothing
    SampledSurface shifted = s;
    for (double& v : shifted.values) v += 3.5;
    for (int k = 2; k <= 7; ++k) CHECK(box_count(shifted, k) == box_count(s, k));

    const DimensionEstimate e = estimate_dimension(box_count_curve(s, 3, 7));
    CHECK(e.slope >= 1.9);
    CHECK(e.slope <= 3.05);
  }
}

TEST_CASE("curve CSV format") {
  const BoxCountCurve curve = box_count_curve(sample(ConstantSpec{1.0}, 8, 1), 1, 3);
  std::ostringstream out;
  write_curve_csv(out, curve);
  CHECK(out.str() ==
        "k,delta,N,logN\n"
        "1,0.5,4,1.3862943611198906\n"
        "2,0.25,16,2.7725887222397811\n"
        "3,0.125,64,4.1588830833596715\n");
}
