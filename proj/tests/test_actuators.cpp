#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tfa/actuators.hpp"

using namespace tfa;

TEST_CASE("first order step basics") {
  CHECK(first_order_step(3.0, 3.0, 0.1, 0.01) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(first_order_step(2.5, 9.0, 0.1, 0.0) == doctest::Approx(2.5));
  // frozen: 1 - e^-0.1
  CHECK(first_order_step(0.0, 1.0, 0.1, 0.01) ==
        doctest::Approx(0.095162581964040427).epsilon(1e-14));
}

TEST_CASE("first order output lies strictly between state and input") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> du(-100.0, 100.0), dtau(1e-3, 1.0), ddt(1e-4, 0.05);
  for (int it = 0; it < 2000; ++it) {
    const double u_o = du(rng), u_i = du(rng);
    if (u_o == u_i)
      continue;
    const double out = first_order_step(u_o, u_i, dtau(rng), ddt(rng));
    CHECK(out > std::min(u_o, u_i));
    CHECK(out < std::max(u_o, u_i));
  }
}

TEST_CASE("deadbeat compensation reaches the command in one step") {
  CHECK(deadbeat_compensate(5.0, 5.0, 0.1, 0.01) == doctest::Approx(5.0));
  // frozen: 1/(1 - e^(-1/6)) + 2
  CHECK(deadbeat_compensate(3.0, 2.0, 0.06, 0.01) ==
        doctest::Approx(8.5138824630974582).epsilon(1e-14));

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> du(-1000.0, 1000.0), dtau(1e-3, 1.0), ddt(1e-3, 0.05);
  for (int it = 0; it < 20000; ++it) {
    const double u_o = du(rng), u_cmd = du(rng), tau = dtau(rng), dt = ddt(rng);
    const double u_i = deadbeat_compensate(u_cmd, u_o, tau, dt);
    CHECK(std::abs(first_order_step(u_o, u_i, tau, dt) - u_cmd) <= 1e-12);
  }
}

TEST_CASE("limits clamp rate then magnitude") {
  const ActuatorParams p;

  SUBCASE("within bounds passes through") {
    const auto r = apply_limits(120.0, 100.0, LimitKind::Torque, p, 0.01);
    CHECK(r.value == doctest::Approx(120.0));
    CHECK_FALSE(r.rate_bound);
    CHECK_FALSE(r.magnitude_bound);
  }

  SUBCASE("torque rate budget per 10 ms") {
    CHECK(apply_limits(900.0, 0.0, LimitKind::Torque, p, 0.01).value == doctest::Approx(500.0));
    CHECK(apply_limits(-900.0, 0.0, LimitKind::Torque, p, 0.01).value == doctest::Approx(-500.0));
    // half the interval, half the budget
    CHECK(apply_limits(900.0, 0.0, LimitKind::Torque, p, 0.005).value == doctest::Approx(250.0));
  }

  SUBCASE("steer magnitude bound caps an almost-full command") {
    const double prev = deg2rad(34.8);
    const auto r = apply_limits(deg2rad(40.0), prev, LimitKind::Steer, p, 0.01);
    CHECK(r.value == doctest::Approx(deg2rad(35.0)).epsilon(1e-12));
  }

  SUBCASE("rate soundness over random inputs") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> du(-2000.0, 2000.0);
    for (int it = 0; it < 5000; ++it) {
      const double prev = std::clamp(du(rng), p.T_min, p.T_max);
      const auto r = apply_limits(du(rng), prev, LimitKind::Torque, p, 0.01);
      CHECK(std::abs(r.value - prev) <= p.T_rate + 1e-12);
      CHECK(r.value <= p.T_max);
      CHECK(r.value >= p.T_min);
    }
  }
}

TEST_CASE("actuator state slews realized outputs at the table rates") {
  const ActuatorParams p;
  ActuatorState st;
  std::array<double, 4> T_in{}, d_in{};
  T_in.fill(1250.0);
  d_in.fill(deg2rad(35.0));

  // 10 ms of 1 ms substeps, rate limited: torque at most 500 Nm, steer 0.5 deg
  for (int i = 0; i < 10; ++i)
    st.step(T_in, d_in, 1e-3, p, true, true);
  for (int w = 0; w < 4; ++w) {
    CHECK(st.T_o[w] <= 500.0 + 1e-9);
    CHECK(st.delta_o[w] <= deg2rad(0.5) + 1e-12);
  }

  // without dynamics, outputs snap to inputs
  ActuatorState snap;
  snap.step(T_in, d_in, 1e-3, p, false);
  CHECK(snap.T_o[0] == doctest::Approx(1250.0));
}

TEST_CASE("torque routing picks the brake constant for negative commands") {
  const ActuatorParams p;
  CHECK(p.tau_torque(100.0) == doctest::Approx(p.tau_d));
  CHECK(p.tau_torque(-100.0) == doctest::Approx(p.tau_b));
}
