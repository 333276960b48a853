#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tfa/load_estimation.hpp"

using namespace tfa;

namespace {
VehicleParams table_params() { return VehicleParams{}; }
}  // namespace

TEST_CASE("static split") {
  const VehicleParams p = table_params();
  const LoadEstimate e = estimate_st(p);
  CHECK(e.f_z[FL] == doctest::Approx(e.f_z[FR]));
  CHECK(e.f_z[RL] == doctest::Approx(e.f_z[RR]));
  CHECK(e.f_z[FL] + e.f_z[FR] + e.f_z[RL] + e.f_z[RR] ==
        doctest::Approx(p.m() * p.g).epsilon(1e-12));
  // frozen: 1230 * 9.81 * 1.54 / (2 * 2.6)
  CHECK(e.f_z[FL] == doctest::Approx(3573.4811538461538).epsilon(1e-13));
  CHECK(e.f_z[RL] == doctest::Approx(2459.6688461538462).epsilon(1e-13));
}

TEST_CASE("acceleration transfer reduces to statics at rest and conserves weight") {
  const VehicleParams p = table_params();
  const LoadEstimate st = estimate_st(p);
  const LoadEstimate zero = estimate_ltxy(0.0, 0.0, p);
  for (int w = 0; w < 4; ++w)
    CHECK(zero.f_z[w] == doctest::Approx(st.f_z[w]).epsilon(1e-12));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> da(-10.0, 10.0);
  for (int it = 0; it < 1000; ++it) {
    const LoadEstimate e = estimate_ltxy(da(rng), da(rng), p);
    const double sum = e.f_z[FL] + e.f_z[FR] + e.f_z[RL] + e.f_z[RR];
    CHECK(sum == doctest::Approx(p.m() * p.g).epsilon(1e-9));
  }

  // frozen at a_x = 2, a_y = 5
  const LoadEstimate e = estimate_ltxy(2.0, 5.0, p);
  CHECK(e.f_z[FL] == doctest::Approx(1988.9291787941788).epsilon(1e-12));
  CHECK(e.f_z[FR] == doctest::Approx(4647.110051975052).epsilon(1e-12));
  CHECK(e.f_z[RL] == doctest::Approx(1800.3019022869023).epsilon(1e-12));
  CHECK(e.f_z[RR] == doctest::Approx(3629.9588669438669).epsilon(1e-12));
}

TEST_CASE("full estimator reduces to statics in the static limit") {
  const VehicleParams p = table_params();
  const LoadEstimate st = estimate_st(p);
  const LoadEstimate e = estimate_ltrpz(0.0, 0.0, p.g, 0.0, 0.0, p);
  for (int w = 0; w < 4; ++w)
    CHECK(e.f_z[w] == doctest::Approx(st.f_z[w]).epsilon(1e-12));
}

TEST_CASE("roll sign swaps the stiffness contribution across the axle") {
  const VehicleParams p = table_params();
  const LoadEstimate pos = estimate_ltrpz(0.0, 0.0, p.g, 0.0, 0.12, p, UnsprungTerm::Off);
  const LoadEstimate neg = estimate_ltrpz(0.0, 0.0, p.g, 0.0, -0.12, p, UnsprungTerm::Off);
  CHECK(pos.f_z[FL] == doctest::Approx(neg.f_z[FR]).epsilon(1e-12));
  CHECK(pos.f_z[RL] == doctest::Approx(neg.f_z[RR]).epsilon(1e-12));
  // lean right loads the right side
  CHECK(pos.f_z[FR] > pos.f_z[FL]);
}

TEST_CASE("full estimator matches the frozen dynamic oracle") {
  const VehicleParams p = table_params();
  const LoadEstimate e =
      estimate_ltrpz(1.2, 6.5, 9.75, -0.006, 0.28, p, UnsprungTerm::Uniform);
  CHECK(e.f_z[FL] == doctest::Approx(1437.4645042976664).epsilon(1e-12));
  CHECK(e.f_z[FR] == doctest::Approx(5625.7335527027786).epsilon(1e-12));
  CHECK(e.f_z[RL] == doctest::Approx(80.882258785594473).epsilon(1e-9));
  CHECK(e.f_z[RR] == doctest::Approx(5320.3048797983748).epsilon(1e-12));
}

TEST_CASE("floor clamp keeps estimates usable as weights") {
  LoadEstimate e;
  e.f_z = {-30.0, 20.0, 60.0, 4000.0};
  const LoadEstimate c = floor_clamped(e, 50.0);
  CHECK(c.f_z[0] == doctest::Approx(50.0));
  CHECK(c.f_z[1] == doctest::Approx(50.0));
  CHECK(c.f_z[2] == doctest::Approx(60.0));
  CHECK(c.f_z[3] == doctest::Approx(4000.0));
}

TEST_CASE("estimation error metric") {
  std::vector<std::array<double, 4>> truth(10, {1000.0, 2000.0, 3000.0, 4000.0});

  SUBCASE("exact estimate is zero percent") {
    CHECK(estimation_error(truth, truth) == doctest::Approx(0.0));
  }

  SUBCASE("uniform 10 percent bias") {
    auto est = truth;
    for (auto& row : est)
      for (double& v : row)
        v *= 1.1;
    CHECK(estimation_error(est, truth) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(estimation_error(est, truth, ErrorMetric::RmsRelative) ==
          doctest::Approx(10.0).epsilon(1e-12));
  }

  SUBCASE("empty and mismatched series are rejected") {
    std::vector<std::array<double, 4>> empty;
    CHECK_THROWS_AS(estimation_error(empty, empty), ModelError);
    auto shorter = truth;
    shorter.pop_back();
    CHECK_THROWS_AS(estimation_error(shorter, truth), ModelError);
  }

  SUBCASE("nonpositive true loads are rejected") {
    auto bad = truth;
    bad[3][2] = 0.0;
    CHECK_THROWS_AS(estimation_error(truth, bad), ModelError);
  }
}
