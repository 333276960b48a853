#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tfa/tire.hpp"

using namespace tfa;

namespace {

// Independent long-double transcription of the combined brush curve, kept
// separate from the library path it checks.
struct RefBrush {
  long double K_s, K_a, mu, f_z;
  void eval(long double kappa, long double alpha, long double& fx, long double& fy) const {
    const long double sx = kappa / (1.0L + kappa);
    const long double sy = std::tan(alpha) / (1.0L + kappa);
    const long double gx = K_s * sx, gy = K_a * sy;
    const long double gt = std::sqrt(gx * gx + gy * gy);
    if (gt == 0.0L) {
      fx = fy = 0.0L;
      return;
    }
    const long double cap = 3.0L * mu * f_z;
    const long double f = gt <= cap
                              ? gt - gt * gt / cap + gt * gt * gt / (3.0L * cap * cap)
                              : mu * f_z;
    fx = gx / gt * f;
    fy = -gy / gt * f;
  }
};

TireParams default_tire() {
  return TireParams{};
}

}  // namespace

TEST_CASE("brush force at zero slip is zero") {
  const TireParams tire = default_tire();
  CHECK(brush_force(0.0, 0.0, 3000.0, 1.0, tire) == Vec2::Zero());
  CHECK(brush_force(0.0, 0.0, 0.0, 1.0, tire) == Vec2::Zero());
}

TEST_CASE("pure lateral saturation returns mu f_z against the slip angle") {
  const TireParams tire = default_tire();
  const double f_z = 3000.0, mu = 1.0;
  // gamma_t far beyond 3 mu f_z
  const double alpha = 0.4;
  const Vec2 f = brush_force(0.0, alpha, f_z, mu, tire);
  CHECK(f.x() == doctest::Approx(0.0));
  CHECK(f.y() == doctest::Approx(-mu * f_z).epsilon(1e-12));
  const Vec2 g = brush_force(0.0, -alpha, f_z, mu, tire);
  CHECK(g.y() == doctest::Approx(mu * f_z).epsilon(1e-12));
}

TEST_CASE("brush force matches the independent high-precision oracle") {
  const TireParams tire = default_tire();
  const Vec2 f = brush_force(0.05, 0.02, 3000.0, 1.0, tire);
  // frozen from an independent evaluation at 30-digit precision
  CHECK(f.x() == doctest::Approx(2606.3649240063572).epsilon(1e-12));
  CHECK(f.y() == doctest::Approx(-834.14799838112434).epsilon(1e-12));

  RefBrush ref{1.0e5L, 8.0e4L, 1.0L, 3000.0L};
  long double fx, fy;
  ref.eval(0.05L, 0.02L, fx, fy);
  CHECK(f.x() == doctest::Approx(static_cast<double>(fx)).epsilon(1e-12));
  CHECK(f.y() == doctest::Approx(static_cast<double>(fy)).epsilon(1e-12));
}

TEST_CASE("friction circle bound holds on a dense slip grid") {
  const TireParams tire = default_tire();
  const double f_z = 3200.0, mu = 0.9;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double kappa = -0.9 + 1.8 * i / 199.0;
      const double alpha = -0.5 + 1.0 * j / 199.0;
      const Vec2 f = brush_force(kappa, alpha, f_z, mu, tire);
      CHECK(f.norm() <= mu * f_z + 1e-9);
    }
  }
}

TEST_CASE("cubic meets the saturation branch exactly at gamma_t = 3 mu f_z") {
  const TireParams tire = default_tire();
  const double f_z = 2800.0, mu = 1.0;
  const double cap = 3.0 * mu * f_z;
  // pure lateral slip angle placing gamma_t just below the switch point
  const double alpha = std::atan(cap * (1.0 - 1e-12) / tire.K_alpha);
  const Vec2 f = brush_force(0.0, alpha, f_z, mu, tire);
  CHECK(std::abs(f.norm() - mu * f_z) <= 1e-9 * mu * f_z);
}

TEST_CASE("sign structure and odd symmetry") {
  const TireParams tire = default_tire();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dk(-0.6, 0.6), da(-0.4, 0.4);
  for (int it = 0; it < 500; ++it) {
    const double kappa = dk(rng), alpha = da(rng);
    const Vec2 f = brush_force(kappa, alpha, 3000.0, 1.0, tire);
    if (kappa != 0.0)
      CHECK(f.x() * kappa >= 0.0);
    if (alpha != 0.0)
      CHECK(f.y() * alpha <= 0.0);

    // odd in (kappa, alpha) within the small-kappa regime where 1/(1+kappa)
    // prefactors match
    const Vec2 g = brush_force(-kappa, -alpha, 3000.0, 1.0, tire);
    if (std::abs(kappa) < 1e-12) {
      CHECK(g.x() == doctest::Approx(-f.x()).epsilon(1e-9));
      CHECK(g.y() == doctest::Approx(-f.y()).epsilon(1e-9));
    }
  }
}

TEST_CASE("brush rejects domain violations") {
  const TireParams tire = default_tire();
  CHECK_THROWS_AS(brush_force(-1.0, 0.0, 3000.0, 1.0, tire), ModelError);
  CHECK_THROWS_AS(brush_force(0.0, M_PI / 2.0, 3000.0, 1.0, tire), ModelError);
  CHECK_THROWS_AS(brush_force(0.0, 0.0, -1.0, 1.0, tire), ModelError);
}

TEST_CASE("relaxation step fixed point and frozen exponential") {
  const TireParams tire = default_tire();
  const Vec2 f(1234.0, -567.0);
  const Vec2 out = relaxation_step(f, f, true, 0.01, tire);
  CHECK(out.x() == doctest::Approx(f.x()).epsilon(1e-15));
  CHECK(out.y() == doctest::Approx(f.y()).epsilon(1e-15));

  // frozen: 1000 (1 - e^-0.5) with tau = 0.02, dt = 0.01
  const double r = relaxation_component(1000.0, 0.0, 0.02, 0.01);
  CHECK(r == doctest::Approx(393.46934028736658).epsilon(1e-13));

  // dt -> 0 limit
  const double tiny = relaxation_component(1000.0, 10.0, 0.02, 1e-15);
  CHECK(tiny == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("inverse lateral table round trip") {
  const TireParams tire = default_tire();
  const double mu = 1.0;
  InverseLateralTable table(tire, mu, 200.0, 10000.0);

  SUBCASE("zero force maps to zero angle at every load") {
    for (double f_z : {250.0, 1000.0, 3000.0, 9000.0})
      CHECK(table.query(0.0, f_z) == doctest::Approx(0.0));
  }

  SUBCASE("grid nodes reproduce stored values") {
    CHECK(table.query(table.u_node(40) * mu * table.fz_node(10), table.fz_node(10)) ==
          doctest::Approx(table.at_node(10, 40)).epsilon(1e-12));
  }

  SUBCASE("round trip within 1e-3 rad over the working range") {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double f_z = 400.0 + (9500.0 - 400.0) * i / 49.0;
      for (int j = 0; j < 50; ++j) {
        const double u = -0.9 + 1.8 * j / 49.0;
        const double alpha_true = pure_lateral_slip_angle(u, f_z, mu, tire);
        const double f_y = brush_force(0.0, alpha_true, f_z, mu, tire).y();
        const double alpha_back = table.query(f_y, f_z);
        worst = std::max(worst, std::abs(alpha_back - alpha_true));
      }
    }
    CHECK(worst < 1e-3);
  }

  SUBCASE("forward check of a queried angle") {
    const double alpha = table.query(-1500.0, 3000.0);
    const double f_y = brush_force(0.0, alpha, 3000.0, mu, tire).y();
    CHECK(std::abs(f_y - (-1500.0)) < 5.0);
  }

  SUBCASE("odd symmetry") {
    for (double u : {0.1, 0.45, 0.8, 0.95})
      CHECK(table.query(u * mu * 3000.0, 3000.0) ==
            doctest::Approx(-table.query(-u * mu * 3000.0, 3000.0)).epsilon(1e-12));
  }

  SUBCASE("saturated demand clamps to the peak-force angle") {
    const double at_peak = table.query(0.999 * mu * 3000.0, 3000.0);
    CHECK(table.query(1.5 * mu * 3000.0, 3000.0) == doctest::Approx(at_peak));
  }

  SUBCASE("load out of range is rejected") {
    CHECK_THROWS_AS(table.query(0.0, 50.0), ModelError);
    CHECK_THROWS_AS(table.query(0.0, 20000.0), ModelError);
  }
}

TEST_CASE("closed-form pure lateral inverse agrees with bisection-built table") {
  const TireParams tire = default_tire();
  InverseLateralTable table(tire, 1.0, 1000.0, 5000.0);
  for (double u : {-0.8, -0.3, 0.2, 0.6, 0.9}) {
    const double closed = pure_lateral_slip_angle(u, 3000.0, 1.0, tire);
    CHECK(table.query(u * 3000.0, 3000.0) == doctest::Approx(closed).epsilon(2e-3));
  }
}
