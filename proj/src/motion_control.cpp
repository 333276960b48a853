#include "tfa/motion_control.hpp"

#include <algorithm>

namespace tfa {

double sat(double s, double width) {
  return std::clamp(s / width, -1.0, 1.0);
}

double longitudinal_pi(double e_vx, double dt, const MotionGains& gains, PiState& state,
                       const VehicleState& s, const VehicleParams& p) {
  state.integral += e_vx * dt;
  const double cap = gains.vx_integral_max / std::max(gains.ki_vx, 1e-12);
  state.integral = std::clamp(state.integral, -cap, cap);

  const double resistances =
      p.m() * p.g * p.f_roll + 0.5 * p.C_D * p.A_f * p.rho * s.v_x * s.v_x;
  return gains.kp_vx * e_vx + gains.ki_vx * state.integral + resistances;
}

double yaw_pi(double error, double dt, const MotionGains& gains, PiState& state) {
  state.integral += error * dt;
  const double cap = gains.wr_integral_max / std::max(gains.ki_wr, 1e-12);
  state.integral = std::clamp(state.integral, -cap, cap);
  return gains.kp_wr * error + gains.ki_wr * state.integral;
}

double lateral_smc(double e_y, double e_y_dot, const VehicleState& s, const MotionGains& gains,
                   const VehicleParams& p) {
  const double surface = e_y_dot + gains.lambda_smc * e_y;
  double f = -p.m() * (gains.lambda_smc * e_y_dot +
                       gains.eta_smc * sat(surface, gains.phi_boundary));
  if (gains.coupling_feedforward)
    f += p.m() * s.omega_r * s.v_x;
  return f;
}

}  // namespace tfa
