#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "tfa/config.hpp"
#include "tfa/harness.hpp"
#include "tfa/outputs.hpp"

namespace {

bool parse_switch(const std::string& v, const std::string& name) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw CLI::ValidationError(name, "expected on|off");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop tire-force allocation toolkit for 4WID-4WIS vehicles"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", scenario_name = "step_yaw";
  std::string load_est = "true", alloc_mode = "static", constraint = "none";
  std::string act_dyn = "off", rate_limits = "off", bump_comp = "on";
  double duration = -1.0, speed = -1.0, mu = -1.0;
  unsigned seed = 0;
  int dump_envelopes = 0;
  bool dump_inverse = false;
  bool dump_alloc = false;

  auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
  sim->add_option("--scenario", scenario_name, "step_yaw|dlc|slalom")->capture_default_str();
  sim->add_option("--load-est", load_est, "st|ltxy|ltrpz|true")->capture_default_str();
  sim->add_option("--alloc", alloc_mode, "static|dynamic")->capture_default_str();
  sim->add_option("--constraint", constraint, "extremum|circle|octagon|polygon|none")
      ->capture_default_str();
  sim->add_option("--actuator-dynamics", act_dyn, "on|off")->capture_default_str();
  sim->add_option("--rate-limits", rate_limits, "on|off")->capture_default_str();
  sim->add_option("--bump-comp", bump_comp, "on|off")->capture_default_str();
  sim->add_option("--out", out_dir, "output directory")->capture_default_str();
  sim->add_option("--config", config_path, "key-value configuration file");
  sim->add_option("--duration", duration, "override scenario duration [s]");
  sim->add_option("--speed", speed, "override scenario speed [m/s]");
  sim->add_option("--mu", mu, "override road adhesion");
  sim->add_option("--seed", seed, "sensor-noise seed");
  sim->add_option("--dump-envelopes", dump_envelopes, "write envelope SVGs every N ticks");
  sim->add_flag("--dump-inverse-table", dump_inverse, "write the inverse tire table CSV");
  sim->add_flag("--dump-alloc", dump_alloc, "write the per-tick allocator diagnostics CSV");

  auto* mat = app.add_subcommand("matrix", "Run the factor-ablation matrix");
  mat->add_option("--config", config_path, "key-value configuration file");
  mat->add_option("--out", out_dir, "output directory")->required();

  std::string write_path;
  auto* wc = app.add_subcommand("write-config", "Write the default configuration file");
  wc->add_option("path", write_path, "destination")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    tfa::Config cfg = config_path.empty() ? tfa::Config{} : tfa::load_config(config_path);

    if (wc->parsed()) {
      tfa::save_config(cfg, write_path);
      std::cout << "wrote " << write_path << "\n";
      return 0;
    }

    std::filesystem::create_directories(out_dir);

    if (sim->parsed()) {
      tfa::ScenarioConfig sc = tfa::make_scenario(tfa::scenario_from_string(scenario_name));
      if (duration > 0) sc.duration = duration;
      if (speed > 0) sc.speed = speed;
      if (mu > 0) sc.mu = mu;

      tfa::AblationConfig ab;
      ab.load_estimator = [&] {
        if (load_est == "st") return tfa::LoadMethod::ST;
        if (load_est == "ltxy") return tfa::LoadMethod::LTXY;
        if (load_est == "ltrpz") return tfa::LoadMethod::LTRPZ;
        if (load_est == "true") return tfa::LoadMethod::TRUE_LOAD;
        throw tfa::ModelError("unknown load estimator: " + load_est);
      }();
      ab.allocation_mode = tfa::alloc_mode_from_string(alloc_mode);
      ab.constraint = tfa::constraint_from_string(constraint);
      ab.actuator_dynamics = parse_switch(act_dyn, "--actuator-dynamics");
      ab.rate_limits = parse_switch(rate_limits, "--rate-limits");
      ab.bump_compensation = parse_switch(bump_comp, "--bump-comp");

      tfa::RunOptions opt;
      opt.seed = seed;
      const tfa::RunResult rr = tfa::run(sc, ab, cfg, opt);

      const std::string base = out_dir + "/" + scenario_name + "_" + ab.label();
      tfa::write_csv(rr, base + ".csv");
      tfa::write_metrics_json(rr, base + ".json");
      if (dump_envelopes > 0)
        tfa::write_envelope_svgs(rr, out_dir, dump_envelopes);
      if (dump_alloc)
        tfa::write_allocation_diagnostics(rr, base + "_alloc.csv");
      if (dump_inverse) {
        tfa::VehicleParams veh = cfg.vehicle;
        veh.mu = sc.mu;
        const double stat = veh.m() * veh.g * std::max(veh.a, veh.b) / (2.0 * veh.L());
        tfa::InverseLateralTable table(cfg.tire, veh.mu, 200.0, 3.0 * stat);
        table.dump_csv(out_dir + "/inverse_lateral_table.csv");
      }

      std::printf("%s: max |e_y| %.4f m, mean |e_y| %.4f m, settle %.3f s, load err %.2f%%\n",
                  scenario_name.c_str(), rr.metrics.max_lateral_error,
                  rr.metrics.mean_lateral_error, rr.metrics.yaw_settling_time,
                  rr.metrics.load_estimation_error_pct);
      if (rr.metrics.diverged) {
        std::fprintf(stderr, "run failed: %s\n", rr.metrics.failure.c_str());
        return 1;
      }
      return 0;
    }

    if (mat->parsed()) {
      std::vector<tfa::ScenarioConfig> scenarios = {
          tfa::make_scenario(tfa::Scenario::StepYaw),
          tfa::make_scenario(tfa::Scenario::DoubleLaneChange),
          tfa::make_scenario(tfa::Scenario::Slalom)};

      std::vector<tfa::AblationConfig> ablations;
      ablations.push_back(tfa::baseline_ablation());
      for (int i = 1; i <= 4; ++i)
        ablations.push_back(tfa::combined_preset(i));
      for (auto est : {tfa::LoadMethod::ST, tfa::LoadMethod::LTXY, tfa::LoadMethod::LTRPZ}) {
        tfa::AblationConfig ab = tfa::baseline_ablation();
        ab.load_estimator = est;
        ablations.push_back(ab);
      }
      for (auto cs : {tfa::ConstraintVariant::Extremum, tfa::ConstraintVariant::Circle,
                      tfa::ConstraintVariant::Octagon, tfa::ConstraintVariant::Polygon}) {
        tfa::AblationConfig ab = tfa::combined_preset(1);
        ab.load_estimator = tfa::LoadMethod::TRUE_LOAD;
        ab.constraint = cs;
        ablations.push_back(ab);
      }

      const tfa::MatrixReport report = tfa::ablation_matrix(scenarios, ablations, cfg, out_dir);
      std::cout << report.table;
      std::ofstream(out_dir + "/matrix_summary.txt") << report.table;
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
