#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tfa/harness.hpp"
#include "tfa/outputs.hpp"

using namespace tfa;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ScenarioConfig short_step(double duration = 1.0) {
  ScenarioConfig sc = make_scenario(Scenario::StepYaw);
  sc.duration = duration;
  sc.window_end = duration;
  return sc;
}

}  // namespace

TEST_CASE("reference paths match the scenario geometry") {
  SUBCASE("step yaw holds zero curvature until the step") {
    ScenarioConfig sc = make_scenario(Scenario::StepYaw);
    const ReferencePath path = reference_path(sc);
    const double s0 = sc.speed * sc.step_time;
    for (const auto& ps : path.samples()) {
      if (ps.s < s0 - 0.5)
        CHECK(ps.curvature == doctest::Approx(0.0));
      if (ps.s > s0 + 0.5)
        CHECK(ps.curvature == doctest::Approx(sc.yaw_rate_target / sc.speed).epsilon(1e-9));
    }
  }

  SUBCASE("slalom same-side spacing is twice the cone distance") {
    ScenarioConfig sc = make_scenario(Scenario::Slalom);
    const ReferencePath path = reference_path(sc);
    // find successive positive peaks of Y past the amplitude ramp
    std::vector<double> peaks;
    const auto& s = path.samples();
    for (size_t i = 1; i + 1 < s.size(); ++i)
      if (s[i].X > 30.0 + 2.0 * sc.cone_spacing && s[i].Y > s[i - 1].Y && s[i].Y > s[i + 1].Y &&
          s[i].Y > 0.5 * sc.slalom_amplitude)
        peaks.push_back(s[i].X);
    REQUIRE(peaks.size() >= 2);
    CHECK(peaks[1] - peaks[0] == doctest::Approx(2.0 * sc.cone_spacing).epsilon(0.02));
  }

  SUBCASE("lane change reaches the documented offset and returns") {
    ScenarioConfig sc = make_scenario(Scenario::DoubleLaneChange);
    const ReferencePath path = reference_path(sc);
    double max_y = 0.0;
    for (const auto& ps : path.samples())
      max_y = std::max(max_y, ps.Y);
    CHECK(max_y == doctest::Approx(sc.lane_offset).epsilon(1e-9));
    CHECK(path.samples().back().Y == doctest::Approx(0.0));
  }

  SUBCASE("projection on the path is exact") {
    ScenarioConfig sc = make_scenario(Scenario::DoubleLaneChange);
    const ReferencePath path = reference_path(sc);
    const auto& ps = path.samples()[200];
    const auto proj = path.project(ps.X, ps.Y);
    CHECK(std::abs(proj.e_y) < 1e-9);
    CHECK(proj.s == doctest::Approx(ps.s).epsilon(1e-6));
  }
}

TEST_CASE("ablation config guards the baseline constraint combination") {
  AblationConfig ab;
  ab.constraint = ConstraintVariant::None;
  ab.rate_limits = true;
  CHECK_THROWS_AS(ab.validate(), ModelError);
  ab.rate_limits = false;
  CHECK_NOTHROW(ab.validate());
  CHECK(baseline_ablation().label() ==
        "ld-true_al-static_cs-none_ad-off_rl-off_bc-on");
}

TEST_CASE("combined presets encode the four scenarios") {
  CHECK(combined_preset(1).constraint == ConstraintVariant::Polygon);
  CHECK(combined_preset(1).bump_compensation);
  CHECK_FALSE(combined_preset(2).bump_compensation);
  CHECK(combined_preset(3).load_estimator == LoadMethod::LTXY);
  CHECK(combined_preset(4).constraint == ConstraintVariant::Octagon);
  CHECK_FALSE(combined_preset(4).bump_compensation);
  CHECK_THROWS_AS(combined_preset(5), ModelError);
}

TEST_CASE("runs are deterministic and the log matches the schema") {
  const Config cfg;
  const ScenarioConfig sc = short_step(1.0);
  const AblationConfig ab = baseline_ablation();

  const RunResult r1 = run(sc, ab, cfg);
  const RunResult r2 = run(sc, ab, cfg);
  REQUIRE_FALSE(r1.metrics.diverged);

  // one second at the fine step: initial row plus 1000 steps
  CHECK(r1.series.size() == 1001);

  // exactly one allocation per control period
  CHECK(r1.metrics.solver.solves == 100);

  std::filesystem::create_directories("/tmp/tfa_harness_test");
  write_csv(r1, "/tmp/tfa_harness_test/a.csv");
  write_csv(r2, "/tmp/tfa_harness_test/b.csv");
  CHECK(slurp("/tmp/tfa_harness_test/a.csv") == slurp("/tmp/tfa_harness_test/b.csv"));

  const std::string header = csv_header();
  CHECK(header.substr(0, 30) == "t,X,Y,v_x,v_y,omega_r,e_y,e_om");
  CHECK(std::count(header.begin(), header.end(), ',') == 51);  // 52 columns
}

TEST_CASE("CSV round trip reproduces the metrics") {
  const Config cfg;
  const ScenarioConfig sc = short_step(1.5);
  const RunResult r = run(sc, baseline_ablation(), cfg);
  std::filesystem::create_directories("/tmp/tfa_harness_test");
  write_csv(r, "/tmp/tfa_harness_test/rt.csv");
  const auto rows = read_csv("/tmp/tfa_harness_test/rt.csv");
  REQUIRE(rows.size() == r.series.size());
  const RunMetrics again = compute_metrics(rows, sc);
  CHECK(std::abs(again.max_lateral_error - r.metrics.max_lateral_error) <= 1e-9);
  CHECK(std::abs(again.mean_lateral_error - r.metrics.mean_lateral_error) <= 1e-9);
  CHECK(std::abs(again.load_estimation_error_pct - r.metrics.load_estimation_error_pct) <=
        1e-9);
  CHECK(std::abs(again.mean_lat_force_error_avg - r.metrics.mean_lat_force_error_avg) <= 1e-9);
}

TEST_CASE("metrics JSON is written alongside") {
  const Config cfg;
  const RunResult r = run(short_step(0.5), baseline_ablation(), cfg);
  std::filesystem::create_directories("/tmp/tfa_harness_test");
  write_metrics_json(r, "/tmp/tfa_harness_test/m.json");
  const std::string text = slurp("/tmp/tfa_harness_test/m.json");
  CHECK(text.find("max_lateral_error") != std::string::npos);
  CHECK(text.find("\"constraint\": \"none\"") != std::string::npos);
}

TEST_CASE("controller sees only the selected estimate") {
  const Config cfg;
  ScenarioConfig sc = short_step(1.0);
  AblationConfig ab = baseline_ablation();
  ab.load_estimator = LoadMethod::ST;
  const RunResult r = run(sc, ab, cfg);
  const VehicleParams& p = cfg.vehicle;
  const double front = p.m() * p.g * p.b / (2.0 * p.L());
  for (const auto& row : r.series) {
    CHECK(row.f_z_est[FL] == doctest::Approx(front).epsilon(1e-12));
    CHECK(row.f_z_est[FR] == doctest::Approx(front).epsilon(1e-12));
  }
}

TEST_CASE("configuration files round trip") {
  Config cfg;
  cfg.vehicle.mu = 0.85;
  cfg.gains.kp_vx = 4321.0;
  cfg.allocation.k_gamma = 0.07;
  cfg.ltrpz_unsprung = UnsprungTerm::Antisymmetric;
  std::filesystem::create_directories("/tmp/tfa_harness_test");
  const std::string path = "/tmp/tfa_harness_test/cfg.txt";
  save_config(cfg, path);
  const Config back = load_config(path);
  CHECK(back.vehicle.mu == doctest::Approx(0.85));
  CHECK(back.gains.kp_vx == doctest::Approx(4321.0));
  CHECK(back.allocation.k_gamma == doctest::Approx(0.07));
  CHECK(back.ltrpz_unsprung == UnsprungTerm::Antisymmetric);

  std::ofstream(path) << "vehicle.bogus = 1\n";
  CHECK_THROWS_AS(load_config(path), ModelError);
}

TEST_CASE("ablation matrix records failures and keeps going") {
  Config cfg;
  std::vector<ScenarioConfig> scenarios{short_step(0.5)};
  std::vector<AblationConfig> ablations{baseline_ablation()};
  AblationConfig bad = baseline_ablation();
  bad.constraint = ConstraintVariant::None;
  bad.rate_limits = true;  // rejected by validation
  ablations.push_back(bad);
  const MatrixReport report = ablation_matrix(scenarios, ablations, cfg);
  REQUIRE(report.entries.size() == 2);
  CHECK_FALSE(report.entries[0].metrics.diverged);
  CHECK(report.entries[1].metrics.diverged);
  CHECK(report.table.find("FAILED") != std::string::npos);
}
