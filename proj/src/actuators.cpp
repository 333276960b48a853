#include "tfa/actuators.hpp"

#include <algorithm>

namespace tfa {

double first_order_step(double u_o, double u_i, double tau, double dt) {
  if (!(tau > 0.0) || !(dt >= 0.0))
    throw ModelError("first_order_step: tau must be positive and dt nonnegative");
  const double lam = std::exp(-dt / tau);
  return lam * u_o + (1.0 - lam) * u_i;
}

double deadbeat_compensate(double u_cmd, double u_o, double tau, double dt) {
  if (!(tau > 0.0) || !(dt > 0.0))
    throw ModelError("deadbeat_compensate: tau and dt must be positive");
  const double gain = 1.0 - std::exp(-dt / tau);
  return (u_cmd - u_o) / gain + u_o;
}

LimitResult apply_limits(double u_i, double u_prev_cmd, LimitKind kind,
                         const ActuatorParams& params, double dt, bool apply_rate) {
  const double lo = kind == LimitKind::Torque ? params.T_min : params.delta_min;
  const double hi = kind == LimitKind::Torque ? params.T_max : params.delta_max;
  const double rate = kind == LimitKind::Torque ? params.T_rate : params.delta_rate;

  LimitResult res;
  double v = u_i;
  if (apply_rate) {
    const double budget = rate * dt / ActuatorParams::kRateRefDt;
    const double rl = u_prev_cmd - budget;
    const double rh = u_prev_cmd + budget;
    const double clamped = std::clamp(v, rl, rh);
    res.rate_bound = clamped != v;
    v = clamped;
  }
  const double clamped = std::clamp(v, lo, hi);
  res.magnitude_bound = clamped != v;
  res.value = clamped;
  return res;
}

void ActuatorState::step(const std::array<double, 4>& T_in, const std::array<double, 4>& delta_in,
                         double dt, const ActuatorParams& params, bool dynamics_enabled,
                         bool rate_limited) {
  const double t_budget = params.T_rate * dt / ActuatorParams::kRateRefDt;
  const double d_budget = params.delta_rate * dt / ActuatorParams::kRateRefDt;
  for (int w = 0; w < 4; ++w) {
    if (dynamics_enabled) {
      double T_next = first_order_step(T_o[w], T_in[w], params.tau_torque(T_in[w]), dt);
      double d_next = first_order_step(delta_o[w], delta_in[w], params.tau_s, dt);
      if (rate_limited) {
        T_next = std::clamp(T_next, T_o[w] - t_budget, T_o[w] + t_budget);
        d_next = std::clamp(d_next, delta_o[w] - d_budget, delta_o[w] + d_budget);
      }
      T_o[w] = std::clamp(T_next, params.T_min, params.T_max);
      delta_o[w] = std::clamp(d_next, params.delta_min, params.delta_max);
    } else {
      T_o[w] = T_in[w];
      delta_o[w] = delta_in[w];
    }
  }
}

}  // namespace tfa
