#include "tfa/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "tfa/actuators.hpp"
#include "tfa/motion_control.hpp"
#include "tfa/outputs.hpp"
#include "tfa/steering_control.hpp"
#include "tfa/tire.hpp"

namespace tfa {

std::string AblationConfig::label() const {
  std::ostringstream os;
  os << "ld-" << to_string(load_estimator) << "_al-" << to_string(allocation_mode) << "_cs-"
     << to_string(constraint) << "_ad-" << (actuator_dynamics ? "on" : "off") << "_rl-"
     << (rate_limits ? "on" : "off") << "_bc-" << (bump_compensation ? "on" : "off");
  return os.str();
}

AblationConfig baseline_ablation() {
  AblationConfig ab;
  ab.load_estimator = LoadMethod::TRUE_LOAD;
  ab.allocation_mode = AllocMode::Static;
  ab.constraint = ConstraintVariant::None;
  ab.actuator_dynamics = false;
  ab.rate_limits = false;
  ab.bump_compensation = true;
  return ab;
}

AblationConfig combined_preset(int index) {
  AblationConfig ab;
  ab.allocation_mode = AllocMode::Dynamic;
  ab.actuator_dynamics = true;
  ab.rate_limits = true;
  switch (index) {
    case 1:  // all factors integrated
      ab.load_estimator = LoadMethod::LTRPZ;
      ab.constraint = ConstraintVariant::Polygon;
      ab.bump_compensation = true;
      break;
    case 2:  // omit the steering feedforward
      ab.load_estimator = LoadMethod::LTRPZ;
      ab.constraint = ConstraintVariant::Polygon;
      ab.bump_compensation = false;
      break;
    case 3:  // LTXY load estimation
      ab.load_estimator = LoadMethod::LTXY;
      ab.constraint = ConstraintVariant::Polygon;
      ab.bump_compensation = true;
      break;
    case 4:  // widely used approach
      ab.load_estimator = LoadMethod::LTXY;
      ab.constraint = ConstraintVariant::Octagon;
      ab.bump_compensation = false;
      break;
    default:
      throw ModelError("combined_preset: index must be 1..4");
  }
  return ab;
}

namespace {

// Slip-domain guards for brush evaluation on wild transients.
constexpr double kKappaFloor = -0.97;
constexpr double kKappaCeil = 4.0;
constexpr double kAlphaCap = 1.35;

double clamp_kappa(double k) { return std::clamp(k, kKappaFloor, kKappaCeil); }
double clamp_alpha(double a) { return std::clamp(a, -kAlphaCap, kAlphaCap); }

struct Loop {
  const ScenarioConfig& scenario;
  const AblationConfig& ablation;
  const Config& cfg;
  const RunOptions& options;

  VehicleParams veh;
  ReferencePath path;
  InverseLateralTable table;
  SuspensionKinematics susp;
  Allocator allocator;

  VehicleState state;
  ActuatorState act;
  Vec8 f_dyn = Vec8::Zero();
  PiState pi_vx, pi_wr;
  std::mt19937 rng;

  Loop(const ScenarioConfig& sc, const AblationConfig& ab, const Config& c,
       const RunOptions& opt)
      : scenario(sc),
        ablation(ab),
        cfg(c),
        options(opt),
        veh(make_vehicle(c, sc)),
        path(reference_path(sc)),
        table(c.tire, veh.mu, 200.0, 3.0 * static_load_max(veh)),
        susp(c.suspension_map_csv.empty()
                 ? SuspensionKinematics(c.bump_steer_coeff)
                 : SuspensionKinematics::from_csv(c.suspension_map_csv)),
        allocator(veh, c.actuators, c.tire, c.allocation, ab.allocation_mode,
                  c.control_period),
        rng(opt.seed) {
    state.v_x = sc.speed;
    for (int w = 0; w < 4; ++w)
      state.omega_i[w] = sc.speed / veh.r;
  }

  static VehicleParams make_vehicle(const Config& c, const ScenarioConfig& sc) {
    VehicleParams v = c.vehicle;
    v.mu = sc.mu;
    return v;
  }

  static double static_load_max(const VehicleParams& v) {
    return v.m() * v.g * std::max(v.a, v.b) / (2.0 * v.L());
  }

  double table_load(double f_z) const {
    return std::clamp(f_z, table.f_z_min(), table.f_z_max());
  }

  LoadEstimate estimate_loads(const std::array<double, 4>& truth) {
    double ax = state.a_x, ay = state.a_y;
    if (cfg.sensor_noise_std > 0.0) {
      std::normal_distribution<double> d(0.0, cfg.sensor_noise_std);
      ax += d(rng);
      ay += d(rng);
    }
    switch (ablation.load_estimator) {
      case LoadMethod::ST:
        return estimate_st(veh);
      case LoadMethod::LTXY:
        return estimate_ltxy(ax, ay, veh);
      case LoadMethod::LTRPZ:
        return estimate_ltrpz(ax, ay, veh.g + state.a_z, state.theta, state.gamma, veh,
                              cfg.ltrpz_unsprung);
      case LoadMethod::TRUE_LOAD: {
        LoadEstimate e;
        e.method = LoadMethod::TRUE_LOAD;
        e.f_z = truth;
        return e;
      }
    }
    throw ModelError("estimate_loads: unknown method");
  }

  // Controller-side estimate of the toe the suspension adds to the actuator
  // angle. Available only when the feedforward path models it.
  double toe_estimate(int w) const {
    if (!(ablation.bump_compensation && cfg.plant_bump_steer))
      return 0.0;
    return susp.steer_disturbance(w, suspension_jounce(state, veh)[w]);
  }

  // Attainable-volume polygon for one wheel from the realized actuator state.
  ForceEnvelope wheel_polygon(int w, double f_z_hat, bool rate_limited) {
    const auto t_bounds = torque_bounds(act.T_o[w], cfg.actuators, cfg.control_period,
                                        rate_limited);
    const double kappa_meas = (state.omega_i[w] * veh.r - state.v_x) / std::abs(state.v_x);
    const double kin = wheel_velocity_angle(state, w, veh);
    const double toe = toe_estimate(w);
    const double alpha_est = clamp_alpha(kin - act.delta_o[w] - toe);
    const double f_x_est =
        brush_force(clamp_kappa(kappa_meas), alpha_est, f_z_hat, veh.mu, cfg.tire).x();

    auto k_bounds = slip_ratio_bounds(state.v_x, state.omega_i[w], f_x_est, t_bounds, veh,
                                      cfg.control_period);
    // wheel-angle interval: actuator bounds shifted by the modeled toe
    auto d_bounds = steer_bounds(act.delta_o[w], cfg.actuators, cfg.control_period,
                                 rate_limited);
    d_bounds.first += toe;
    d_bounds.second += toe;
    auto a_bounds = slip_angle_bounds(kin, d_bounds);

    SlipBounds sb;
    sb.kappa_lo = clamp_kappa(k_bounds.first);
    sb.kappa_hi = clamp_kappa(k_bounds.second);
    sb.alpha_lo = clamp_alpha(a_bounds.first);
    sb.alpha_hi = clamp_alpha(a_bounds.second);
    return polygon_vertices(sb, f_z_hat, veh.mu, cfg.tire);
  }

  std::array<ForceEnvelope, 4> build_envelopes(const std::array<double, 4>& f_z_ctrl,
                                               const std::array<ForceEnvelope, 4>& polygons) {
    std::array<ForceEnvelope, 4> envs;
    for (int w = 0; w < 4; ++w) {
      switch (ablation.constraint) {
        case ConstraintVariant::None:
          envs[w] = unbounded_envelope();
          break;
        case ConstraintVariant::Extremum:
          envs[w] = extremum_envelope(f_z_ctrl[w], veh.mu);
          break;
        case ConstraintVariant::Circle:
          envs[w] = circle_envelope(f_z_ctrl[w], veh.mu);
          break;
        case ConstraintVariant::Octagon:
          envs[w] = octagon_envelope(f_z_ctrl[w], veh.mu);
          break;
        case ConstraintVariant::Polygon:
          envs[w] = polygons[w];
          break;
      }
    }
    return envs;
  }

  // Wheel-speed target implied by the allocated longitudinal force, for the
  // optional inertia-hold term.
  double omega_dot_ref(int w, double f_x_alloc, double f_z_hat) const {
    const double u = std::clamp(f_x_alloc / (veh.mu * f_z_hat), -0.999, 0.999);
    const double gamma_t = 3.0 * veh.mu * f_z_hat * (1.0 - std::cbrt(1.0 - std::abs(u)));
    const double sigma = std::copysign(gamma_t / cfg.tire.K_s, u);
    const double kappa_t = sigma / (1.0 - std::min(sigma, 0.9));
    const double omega_ref = state.v_x * (1.0 + kappa_t) / veh.r;
    return (omega_ref - state.omega_i[w]) / cfg.control_period;
  }
};

void append_row(RunResult& res, const Loop& loop, double t, const TrackingErrors& err,
                const std::array<double, 4>& delta_wheel, const WheelSlip& slip,
                const std::array<double, 4>& f_z_true, const std::array<double, 4>& f_z_est,
                const ForceDemand& demand, const Vec8& f_alloc, int active_set_size) {
  LogRow row;
  row.t = t;
  row.X = loop.state.X;
  row.Y = loop.state.Y;
  row.v_x = loop.state.v_x;
  row.v_y = loop.state.v_y;
  row.omega_r = loop.state.omega_r;
  row.e_y = err.e_y;
  row.e_omega_r = err.e_omega_r;
  for (int w = 0; w < 4; ++w) {
    row.kappa[w] = slip.kappa[w];
    row.alpha[w] = slip.alpha[w];
    row.delta[w] = delta_wheel[w];
    row.T[w] = loop.act.T_o[w];
    row.f_x[w] = loop.f_dyn(fx_index(w));
    row.f_y[w] = loop.f_dyn(fy_index(w));
    row.f_z_true[w] = f_z_true[w];
    row.f_z_est[w] = f_z_est[w];
  }
  row.dem_fx = demand.F_x;
  row.dem_fy = demand.F_y;
  row.dem_mz = demand.M_z;
  for (int i = 0; i < 8; ++i)
    row.alloc[i] = f_alloc(i);
  row.active_set_size = active_set_size;
  res.series.push_back(row);
}

}  // namespace

RunResult run(const ScenarioConfig& scenario, const AblationConfig& ablation, const Config& cfg,
              const RunOptions& options) {
  scenario.validate();
  ablation.validate();
  cfg.validate();

  Loop loop(scenario, ablation, cfg, options);
  RunResult res;
  res.scenario = scenario;
  res.ablation = ablation;

  const int n_sub = static_cast<int>(std::lround(cfg.control_period / cfg.plant_dt));
  const int n_ticks = static_cast<int>(std::lround(scenario.duration / cfg.control_period));
  const double dt = cfg.plant_dt;

  SolverStats stats;
  double iter_sum = 0.0, us_sum = 0.0;
  std::string failure;

  std::array<double, 4> delta_wheel{};
  WheelSlip slip{};

  for (int k = 0; k < n_ticks && failure.empty(); ++k) {
    const double t = k * cfg.control_period;

    TrackingErrors err;
    std::array<double, 4> f_z_true{}, f_z_ctrl{};
    ForceDemand demand;
    AllocationResult alloc;
    std::array<ForceEnvelope, 4> polygons, envs;
    const Vec8 f_at_build = loop.f_dyn;

    try {
      f_z_true = true_vertical_loads(loop.state, loop.veh);
      const LoadEstimate est = loop.estimate_loads(f_z_true);
      const LoadEstimate floored = floor_clamped(est, cfg.allocation.load_floor);
      f_z_ctrl = floored.f_z;

      err = tracking_errors(loop.state, loop.path);

      demand.F_x = longitudinal_pi(err.e_vx, cfg.control_period, cfg.gains, loop.pi_vx,
                                   loop.state, loop.veh);
      demand.M_z = yaw_pi(-err.e_omega_r, cfg.control_period, cfg.gains, loop.pi_wr);
      demand.F_y = lateral_smc(err.e_y, lateral_error_rate(loop.state, err), loop.state,
                               cfg.gains, loop.veh);

      std::array<double, 4> delta_est;  // wheel-angle estimate incl. modeled toe
      for (int w = 0; w < 4; ++w) {
        polygons[w] = loop.wheel_polygon(w, f_z_ctrl[w], ablation.rate_limits);
        delta_est[w] = loop.act.delta_o[w] + loop.toe_estimate(w);
      }
      envs = loop.build_envelopes(f_z_ctrl, polygons);

      const auto t0 = std::chrono::steady_clock::now();
      alloc = loop.allocator.allocate(demand, delta_est, f_z_ctrl, envs);
      const auto t1 = std::chrono::steady_clock::now();
      us_sum += std::chrono::duration<double, std::micro>(t1 - t0).count();

      ++stats.solves;
      if (alloc.fallback)
        ++stats.failures;
      iter_sum += alloc.iterations;
      stats.max_iterations = std::max(stats.max_iterations, alloc.iterations);
      stats.max_kkt_stationarity = std::max(stats.max_kkt_stationarity, alloc.kkt_stationarity);
      stats.max_kkt_primal = std::max(stats.max_kkt_primal, alloc.kkt_primal);
      stats.max_kkt_dual = std::max(stats.max_kkt_dual, alloc.kkt_dual);
      stats.max_kkt_complementarity =
          std::max(stats.max_kkt_complementarity, alloc.kkt_complementarity);
    } catch (const ReferenceExhausted&) {
      break;  // normal end of the reference
    } catch (const ModelError& e) {
      failure = e.what();
      break;
    }

    // Per-wheel actuator commands, held over the control period.
    const auto s_j_meas = suspension_jounce(loop.state, loop.veh);
    std::array<double, 4> T_in{}, delta_in{};
    const bool deadbeat = ablation.allocation_mode == AllocMode::Dynamic &&
                          ablation.actuator_dynamics;
    try {
      for (int w = 0; w < 4; ++w) {
        const double f_x_a = alloc.f(fx_index(w));
        const double f_y_a = alloc.f(fy_index(w));

        double T_cmd = torque_command(f_x_a, loop.state.omega_i[w], loop.veh,
                                      cfg.torque_inertia_hold,
                                      cfg.torque_inertia_hold
                                          ? loop.omega_dot_ref(w, f_x_a, f_z_ctrl[w])
                                          : 0.0);
        double d_cmd = nominal_steer(f_y_a, loop.table_load(f_z_ctrl[w]), loop.state, w,
                                     loop.veh, loop.table);
        if (ablation.bump_compensation)
          d_cmd = bump_steer_feedforward(d_cmd, s_j_meas[w], w, loop.susp);

        if (deadbeat) {
          T_cmd = deadbeat_compensate(T_cmd, loop.act.T_o[w],
                                      cfg.actuators.tau_torque(T_cmd), cfg.control_period);
          d_cmd = deadbeat_compensate(d_cmd, loop.act.delta_o[w], cfg.actuators.tau_s,
                                      cfg.control_period);
        }
        const bool cmd_rate = ablation.rate_limits && !ablation.actuator_dynamics;
        const auto tl = apply_limits(T_cmd, loop.act.T_cmd_prev[w], LimitKind::Torque,
                                     cfg.actuators, cfg.control_period, cmd_rate);
        const auto dl = apply_limits(d_cmd, loop.act.delta_cmd_prev[w], LimitKind::Steer,
                                     cfg.actuators, cfg.control_period, cmd_rate);
        T_in[w] = tl.value;
        delta_in[w] = dl.value;
        loop.act.T_cmd_prev[w] = tl.value;
        loop.act.delta_cmd_prev[w] = dl.value;
        stats.rate_saturations += (tl.rate_bound ? 1 : 0) + (dl.rate_bound ? 1 : 0);
        stats.magnitude_saturations +=
            (tl.magnitude_bound ? 1 : 0) + (dl.magnitude_bound ? 1 : 0);
      }
    } catch (const ModelError& e) {
      failure = e.what();
      break;
    }

    if (k == 0) {
      for (int w = 0; w < 4; ++w)
        delta_wheel[w] = loop.act.delta_o[w];
      append_row(res, loop, 0.0, err, delta_wheel, slip, f_z_true, f_z_ctrl, demand, alloc.f,
                 static_cast<int>(alloc.active_set.size()));
    }

    // Plant substeps at the fine step.
    try {
      for (int i = 1; i <= n_sub; ++i) {
        loop.act.step(T_in, delta_in, dt, cfg.actuators, ablation.actuator_dynamics,
                      ablation.rate_limits);

        const auto s_j = suspension_jounce(loop.state, loop.veh);
        for (int w = 0; w < 4; ++w) {
          delta_wheel[w] = loop.act.delta_o[w];
          if (cfg.plant_bump_steer)
            delta_wheel[w] += loop.susp.steer_disturbance(w, s_j[w]);
        }

        slip = wheel_kinematics(loop.state, delta_wheel, loop.veh);
        const auto f_z_now = true_vertical_loads(loop.state, loop.veh);

        Vec8 f_steady;
        for (int w = 0; w < 4; ++w) {
          const Vec2 f = brush_force(clamp_kappa(slip.kappa[w]), clamp_alpha(slip.alpha[w]),
                                     f_z_now[w], loop.veh.mu, cfg.tire);
          f_steady(fx_index(w)) = f.x();
          f_steady(fy_index(w)) = f.y();
        }
        if (ablation.actuator_dynamics) {
          for (int w = 0; w < 4; ++w) {
            const Vec2 fd = relaxation_step(
                Vec2(f_steady(fx_index(w)), f_steady(fy_index(w))),
                Vec2(loop.f_dyn(fx_index(w)), loop.f_dyn(fy_index(w))), is_front(w), dt,
                cfg.tire);
            loop.f_dyn(fx_index(w)) = fd.x();
            loop.f_dyn(fy_index(w)) = fd.y();
          }
        } else {
          loop.f_dyn = f_steady;
        }

        loop.state = step_dynamics(loop.state, loop.f_dyn, f_z_now, loop.act.T_o, delta_wheel,
                                   dt, loop.veh);
        append_row(res, loop, t + i * dt, err, delta_wheel, slip, f_z_now, f_z_ctrl, demand,
                   alloc.f, static_cast<int>(alloc.active_set.size()));
      }
    } catch (const PlantDivergence& e) {
      failure = e.what();
    } catch (const ModelError& e) {
      failure = e.what();
    }

    if (options.keep_tick_diagnostics) {
      TickDiag diag;
      diag.t = t;
      diag.envelopes = envs;
      diag.polygons = polygons;
      diag.f_z_hat = f_z_ctrl;
      diag.f_z_true = f_z_true;
      diag.f_alloc = alloc.f;
      diag.f_current = f_at_build;
      diag.f_realized = loop.f_dyn;
      diag.demand = demand;
      diag.qp_iterations = alloc.iterations;
      diag.fallback = alloc.fallback;
      res.ticks.push_back(diag);
    }
  }

  if (stats.solves > 0) {
    stats.mean_iterations = iter_sum / stats.solves;
    stats.mean_solve_us = us_sum / stats.solves;
  }

  res.metrics = compute_metrics(res.series, scenario);
  res.metrics.solver = stats;
  res.metrics.diverged = !failure.empty();
  res.metrics.failure = failure;
  return res;
}

RunMetrics compute_metrics(const std::vector<LogRow>& series, const ScenarioConfig& scenario) {
  RunMetrics m;
  m.window_start = scenario.window_start;
  m.window_end = std::min(scenario.window_end, scenario.duration);
  if (series.empty())
    return m;
  m.final_time = series.back().t;

  double abs_sum = 0.0, load_sum = 0.0;
  std::array<double, 4> lat_err_sum{};
  size_t n = 0, load_n = 0;
  for (const auto& row : series) {
    if (row.t < m.window_start || row.t > m.window_end)
      continue;
    m.max_lateral_error = std::max(m.max_lateral_error, std::abs(row.e_y));
    abs_sum += std::abs(row.e_y);
    for (int w = 0; w < 4; ++w) {
      // relative load error is undefined on a lifted wheel; skip those samples
      if (row.f_z_true[w] > 1.0) {
        load_sum += std::abs(row.f_z_est[w] - row.f_z_true[w]) / row.f_z_true[w];
        ++load_n;
      }
      lat_err_sum[w] += std::abs(row.f_y[w] - row.alloc[fy_index(w)]);
    }
    ++n;
  }
  if (n > 0) {
    m.mean_lateral_error = abs_sum / static_cast<double>(n);
    if (load_n > 0)
      m.load_estimation_error_pct = 100.0 * load_sum / static_cast<double>(load_n);
    for (int w = 0; w < 4; ++w)
      m.mean_lat_force_error[w] = lat_err_sum[w] / static_cast<double>(n);
    m.mean_lat_force_error_avg =
        (m.mean_lat_force_error[0] + m.mean_lat_force_error[1] + m.mean_lat_force_error[2] +
         m.mean_lat_force_error[3]) /
        4.0;
  }

  if (scenario.scenario == Scenario::StepYaw) {
    const double target = scenario.yaw_rate_target;
    const double tol = 0.05 * std::abs(target);
    double settled_from = -1.0;
    bool settled = true;
    for (auto it = series.rbegin(); it != series.rend(); ++it) {
      if (it->t < scenario.step_time)
        break;
      if (std::abs(it->omega_r - target) > tol) {
        settled = settled_from >= 0.0;
        break;
      }
      settled_from = it->t;
    }
    (void)settled;
    if (settled_from >= 0.0 && settled_from < m.final_time)
      m.yaw_settling_time = settled_from - scenario.step_time;
  }
  return m;
}

MatrixReport ablation_matrix(const std::vector<ScenarioConfig>& scenarios,
                             const std::vector<AblationConfig>& ablations, const Config& cfg,
                             const std::string& out_dir) {
  MatrixReport report;
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof(line), "%-9s %-44s %9s %9s %8s %8s %9s %s\n", "scenario",
                "ablation", "max_ey", "mean_ey", "settle", "load_err", "latF_err", "status");
  table << line;

  for (const auto& sc : scenarios) {
    for (const auto& ab : ablations) {
      MatrixEntry entry;
      entry.scenario_name = to_string(sc.scenario);
      entry.ablation_label = ab.label();
      try {
        RunOptions opt;
        opt.keep_tick_diagnostics = false;
        RunResult rr = run(sc, ab, cfg, opt);
        entry.metrics = rr.metrics;
        if (!out_dir.empty()) {
          const std::string base = out_dir + "/" + entry.scenario_name + "_" +
                                   entry.ablation_label;
          write_csv(rr, base + ".csv");
          write_metrics_json(rr, base + ".json");
        }
      } catch (const std::exception& e) {
        entry.metrics.diverged = true;
        entry.metrics.failure = e.what();
      }
      std::snprintf(line, sizeof(line), "%-9s %-44s %9.4f %9.4f %8.3f %7.2f%% %9.1f %s\n",
                    entry.scenario_name.c_str(), entry.ablation_label.c_str(),
                    entry.metrics.max_lateral_error, entry.metrics.mean_lateral_error,
                    entry.metrics.yaw_settling_time, entry.metrics.load_estimation_error_pct,
                    entry.metrics.mean_lat_force_error_avg,
                    entry.metrics.diverged ? ("FAILED: " + entry.metrics.failure).c_str()
                                           : "ok");
      table << line;
      report.entries.push_back(std::move(entry));
    }
  }
  report.table = table.str();
  return report;
}

}  // namespace tfa
