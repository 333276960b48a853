#ifndef TFA_HARNESS_HPP
#define TFA_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "tfa/allocation.hpp"
#include "tfa/config.hpp"
#include "tfa/load_estimation.hpp"
#include "tfa/reference_path.hpp"

namespace tfa {

// Factor-ablation switches. The "none" constraint (no allocator envelope)
// is the baseline without rate constraints and is rejected otherwise.
struct AblationConfig {
  LoadMethod load_estimator = LoadMethod::TRUE_LOAD;
  AllocMode allocation_mode = AllocMode::Static;
  ConstraintVariant constraint = ConstraintVariant::None;
  bool actuator_dynamics = false;  // plant-side actuator and tire lags
  bool rate_limits = false;        // torque and steer rate saturation
  bool bump_compensation = true;   // feedforward toe cancellation

  void validate() const {
    if (constraint == ConstraintVariant::None && rate_limits)
      throw ModelError("AblationConfig: 'none' constraint is only valid with rate limits off");
  }
  std::string label() const;
};

// Baseline of the single-factor studies: true loads, feedforward steering,
// no actuator dynamics or rate constraints.
AblationConfig baseline_ablation();

// Combined-analysis presets 1-4.
AblationConfig combined_preset(int index);

struct SolverStats {
  int solves = 0;
  int failures = 0;
  int rate_saturations = 0;       // command rate clamp engaged
  int magnitude_saturations = 0;  // command magnitude clamp engaged
  double mean_iterations = 0.0;
  int max_iterations = 0;
  double max_kkt_stationarity = 0.0;
  double max_kkt_primal = 0.0;
  double max_kkt_dual = 0.0;
  double max_kkt_complementarity = 0.0;
  double mean_solve_us = 0.0;  // wall time, excluded from determinism checks
};

struct RunMetrics {
  double max_lateral_error = 0.0;       // max |e_y| over the window [m]
  double mean_lateral_error = 0.0;      // mean |e_y| over the window [m]
  double yaw_settling_time = -1.0;      // to +/-5 % of target, from the step [s]
  double load_estimation_error_pct = 0.0;
  std::array<double, 4> mean_lat_force_error{};  // |f_y realized - allocated| [N]
  double mean_lat_force_error_avg = 0.0;
  SolverStats solver;
  bool diverged = false;
  std::string failure;
  double window_start = 0.0;
  double window_end = 0.0;
  double final_time = 0.0;
};

// One plant-rate log record (fixed CSV column order).
struct LogRow {
  double t = 0.0;
  double X = 0.0, Y = 0.0;
  double v_x = 0.0, v_y = 0.0, omega_r = 0.0;
  double e_y = 0.0, e_omega_r = 0.0;
  std::array<double, 4> kappa{}, alpha{}, delta{}, T{};
  std::array<double, 4> f_x{}, f_y{}, f_z_true{}, f_z_est{};
  double dem_fx = 0.0, dem_fy = 0.0, dem_mz = 0.0;
  std::array<double, 8> alloc{};
  int active_set_size = 0;
};

// Per-control-tick diagnostics for the constraint and execution analyses.
struct TickDiag {
  double t = 0.0;
  std::array<ForceEnvelope, 4> envelopes;  // envelopes given to the allocator
  std::array<ForceEnvelope, 4> polygons;   // attainable-volume polygons (always built)
  std::array<double, 4> f_z_hat{};
  std::array<double, 4> f_z_true{};
  Vec8 f_alloc = Vec8::Zero();
  Vec8 f_current = Vec8::Zero();   // dynamic tire forces when the envelopes were built
  Vec8 f_realized = Vec8::Zero();  // dynamic tire forces at the end of the period
  ForceDemand demand;
  int qp_iterations = 0;
  bool fallback = false;
};

struct RunResult {
  ScenarioConfig scenario;
  AblationConfig ablation;
  RunMetrics metrics;
  std::vector<LogRow> series;
  std::vector<TickDiag> ticks;  // kept when diagnostics are requested
};

struct RunOptions {
  bool keep_tick_diagnostics = true;
  unsigned seed = 0;  // drives optional sensor noise only
};

// Closed-loop experiment: plant at plant_dt, control stack every
// control_period, per the hierarchical architecture. Divergence and solver
// breakdown terminate the run with a labeled failure record.
RunResult run(const ScenarioConfig& scenario, const AblationConfig& ablation, const Config& cfg,
              const RunOptions& options = RunOptions{});

// Metrics from a logged series (also used for the CSV round-trip check).
RunMetrics compute_metrics(const std::vector<LogRow>& series, const ScenarioConfig& scenario);

struct MatrixEntry {
  std::string scenario_name;
  std::string ablation_label;
  RunMetrics metrics;
};

struct MatrixReport {
  std::vector<MatrixEntry> entries;
  std::string table;  // formatted comparison table
};

// Cross product of scenarios and ablations; individual failures are
// recorded and the sweep continues. Results are optionally written per run
// under out_dir.
MatrixReport ablation_matrix(const std::vector<ScenarioConfig>& scenarios,
                             const std::vector<AblationConfig>& ablations, const Config& cfg,
                             const std::string& out_dir = "");

}  // namespace tfa

#endif
