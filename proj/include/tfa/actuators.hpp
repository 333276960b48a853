#ifndef TFA_ACTUATORS_HPP
#define TFA_ACTUATORS_HPP

#include "tfa/types.hpp"

namespace tfa {

// Exact discrete first-order response over dt: e^(-dt/tau) u_o + (1 - e^(-dt/tau)) u_i.
double first_order_step(double u_o, double u_i, double tau, double dt);

// Input that makes one first_order_step land exactly on u_cmd.
double deadbeat_compensate(double u_cmd, double u_o, double tau, double dt);

enum class LimitKind { Torque, Steer };

struct LimitResult {
  double value = 0.0;
  bool rate_bound = false;
  bool magnitude_bound = false;
};

// Rate clamp around the previous command (rate quoted per 10 ms, rescaled by
// dt), then magnitude clamp. `apply_rate` disabled drops the rate stage.
LimitResult apply_limits(double u_i, double u_prev_cmd, LimitKind kind,
                         const ActuatorParams& params, double dt, bool apply_rate = true);

// Realized per-wheel actuator outputs plus the previous commands used for
// rate limiting. Advanced by exactly one owner.
struct ActuatorState {
  std::array<double, 4> T_o{};          // realized net torque [N m]
  std::array<double, 4> delta_o{};      // realized steer angle [rad]
  std::array<double, 4> T_cmd_prev{};   // last limited torque command
  std::array<double, 4> delta_cmd_prev{};

  // Advance realized outputs toward the held inputs over dt. With dynamics
  // disabled the outputs snap to the inputs. `rate_limited` slews the
  // realized outputs at the Table rate limits (the physical mechanism
  // speed); command-side clamping alone would let the first-order lag eat
  // the deadbeat lead.
  void step(const std::array<double, 4>& T_in, const std::array<double, 4>& delta_in, double dt,
            const ActuatorParams& params, bool dynamics_enabled, bool rate_limited = false);
};

}  // namespace tfa

#endif
