#ifndef TFA_STEERING_CONTROL_HPP
#define TFA_STEERING_CONTROL_HPP

#include <string>
#include <vector>

#include "tfa/tire.hpp"
#include "tfa/vehicle_plant.hpp"

namespace tfa {

// Per-wheel bump-steer kinematics: suspension jounce (compression positive)
// to toe-angle change, piecewise linear through (0, 0). The toe value is the
// plant-side disturbance; converting toe to a signed steer angle flips sign
// on left wheels, so a rolling body steers both sides the same direction.
class SuspensionKinematics {
 public:
  // Linear map with the given coefficient [rad/m] on every wheel.
  explicit SuspensionKinematics(double linear_coeff = 0.2);

  // Piecewise-linear map from (jounce, toe) pairs; must pass through (0, 0).
  explicit SuspensionKinematics(std::vector<std::pair<double, double>> table);

  // CSV with `jounce,toe` rows.
  static SuspensionKinematics from_csv(const std::string& path);

  double toe(double jounce) const;

  // Steer-angle disturbance the plant adds to wheel `w` at jounce s_j.
  double steer_disturbance(int wheel, double jounce) const {
    return (is_left(wheel) ? -1.0 : 1.0) * toe(jounce);
  }

 private:
  std::vector<std::pair<double, double>> table_;
};

// Per-wheel suspension jounce from the quasi-static body attitude:
// compression positive, +/- (B/2) gamma across the track and -/+ (a|b) theta
// along the wheelbase.
std::array<double, 4> suspension_jounce(const VehicleState& s, const VehicleParams& p);

// Net wheel torque realizing the allocated longitudinal force. The optional
// wheel-speed-hold inertia term targets the slip implied by the allocation;
// disabled by default.
double torque_command(double f_x_alloc, double omega_wheel, const VehicleParams& p,
                      bool inertia_hold = false, double omega_dot_ref = 0.0);

// Steer angle realizing the allocated lateral force through the inverse
// tire map: kinematic wheel-velocity angle minus the required slip angle.
double nominal_steer(double f_y_alloc, double f_z_hat, const VehicleState& s, int wheel,
                     const VehicleParams& p, const InverseLateralTable& table);

// Bump-steer feedforward: pre-subtract the suspension-induced disturbance
// from the nominal command so the realized wheel angle cancels it.
double bump_steer_feedforward(double delta_n, double s_j, int wheel,
                              const SuspensionKinematics& kin);

}  // namespace tfa

#endif
