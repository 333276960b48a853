#ifndef TFA_MOTION_CONTROL_HPP
#define TFA_MOTION_CONTROL_HPP

#include "tfa/types.hpp"
#include "tfa/vehicle_plant.hpp"

namespace tfa {

struct MotionGains {
  double kp_vx = 5000.0;   // [N per m/s]
  double ki_vx = 2000.0;   // [N per m]
  double vx_integral_max = 5000.0;  // clamp on the integral term [N]

  double kp_wr = 9000.0;   // [N m per rad/s]
  double ki_wr = 60000.0;  // [N m per rad]
  double wr_integral_max = 10000.0;  // [N m]

  double lambda_smc = 0.8;      // [1/s]
  double eta_smc = 1.2;         // [m/s^2]
  double phi_boundary = 1.0;    // boundary-layer width [m/s]
  bool coupling_feedforward = true;  // include m omega_r v_x in sum F_y

  void validate() const {
    if (!(kp_vx > 0) || !(ki_vx >= 0) || !(kp_wr > 0) || !(ki_wr >= 0))
      throw ModelError("MotionGains: PI gains must be positive");
    if (!(lambda_smc > 0) || !(eta_smc > 0) || !(phi_boundary > 0))
      throw ModelError("MotionGains: SMC gains must be positive");
  }
};

// Integrator state, one owner per control loop.
struct PiState {
  double integral = 0.0;  // of error * dt, in output units once scaled by ki
};

// Linear saturation: s/width clipped to [-1, 1].
double sat(double s, double width);

// Total longitudinal force demand: PI on the speed error plus the rolling
// and aerodynamic resistance feedforward.
double longitudinal_pi(double e_vx, double dt, const MotionGains& gains, PiState& state,
                       const VehicleState& s, const VehicleParams& p);

// Yaw moment demand: PI on the passed error (reference minus actual).
double yaw_pi(double error, double dt, const MotionGains& gains, PiState& state);

// Lateral force demand from the sliding surface s = e_y_dot + lambda e_y,
// with the centripetal coupling feedforward m omega_r v_x.
double lateral_smc(double e_y, double e_y_dot, const VehicleState& s, const MotionGains& gains,
                   const VehicleParams& p);

}  // namespace tfa

#endif
