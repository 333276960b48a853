#ifndef TFA_VEHICLE_PLANT_HPP
#define TFA_VEHICLE_PLANT_HPP

#include "tfa/reference_path.hpp"
#include "tfa/types.hpp"

namespace tfa {

// Chassis states of the 7-DOF double-track model plus the quasi-static body
// attitude. Accelerations are the values computed by the last dynamics step.
struct VehicleState {
  double v_x = 0.0;   // body longitudinal velocity [m/s]
  double v_y = 0.0;   // body lateral velocity, positive left [m/s]
  double omega_r = 0.0;  // yaw rate, counterclockwise positive [rad/s]
  double phi = 0.0;   // yaw angle [rad]
  double X = 0.0;     // global position [m]
  double Y = 0.0;
  std::array<double, 4> omega_i{};  // wheel speeds [rad/s], fl fr rl rr
  double theta = 0.0;  // pitch, nose-up positive [rad]
  double gamma = 0.0;  // roll, lean-right positive [rad]
  double a_x = 0.0;    // [m/s^2]
  double a_y = 0.0;
  double a_z = 0.0;    // heave acceleration, 0 on a flat road
};

struct TrackingErrors {
  double e_vx = 0.0;      // v_xref - v_x [m/s]
  double e_phi = 0.0;     // phi_ref - phi [rad]
  double e_y = 0.0;       // lateral offset, vehicle left of path positive [m]
  double e_omega_r = 0.0; // omega_r - v_xref k_ref / cos(e_phi) [rad/s]
  double k_ref = 0.0;     // reference curvature at the projection [1/m]
};

struct PlantDivergence : ModelError {
  using ModelError::ModelError;
};

struct ReferenceExhausted : ModelError {
  using ModelError::ModelError;
};

struct SanityBounds {
  double v = 150.0;        // [m/s]
  double omega_r = 10.0;   // [rad/s]
};

// Wheel contact position in the body frame (x forward, y left).
Vec2 wheel_position(int wheel, const VehicleParams& p);

// 3x8 effectiveness matrix mapping the per-wheel force vector
// [fx_fl, fy_fl, ..., fy_rr] onto (sum F_x, sum F_y, sum M_z).
Mat3x8 effectiveness_matrix(const std::array<double, 4>& delta, const VehicleParams& p);

// Total longitudinal force, lateral force and yaw moment for a force vector.
Vec3 generalized_forces(const Vec8& f, const std::array<double, 4>& delta,
                        const VehicleParams& p);

// Wheel-velocity direction angle atan((v_y + x_i w)/(v_x - y_i w)) for one wheel.
double wheel_velocity_angle(const VehicleState& s, int wheel, const VehicleParams& p);

struct WheelSlip {
  std::array<double, 4> kappa{};
  std::array<double, 4> alpha{};  // [rad]
};

// Slip ratios (chassis-speed referenced) and slip angles at the current
// state and wheel steer angles. Throws KinematicSingularity below the valid
// speed range.
WheelSlip wheel_kinematics(const VehicleState& s, const std::array<double, 4>& delta,
                           const VehicleParams& p);

// One explicit Euler step of the chassis and wheel dynamics under realized
// tire forces f (tire frame, Eq-8 layout), net wheel torques T and wheel
// angles delta. Includes rolling resistance and aerodynamic drag, and the
// quasi-static roll/pitch lag. f_z is accepted for interface completeness;
// the resistance model is chassis-level. Throws PlantDivergence past the
// sanity bounds and ModelError on non-finite input.
VehicleState step_dynamics(const VehicleState& s, const Vec8& f, const std::array<double, 4>& f_z,
                           const std::array<double, 4>& T, const std::array<double, 4>& delta,
                           double dt, const VehicleParams& p,
                           const SanityBounds& sanity = SanityBounds{});

// Ground-truth per-wheel vertical loads from the quasi-static transfer
// model (load-conserving roll couple, antisymmetric unsprung term),
// floored at zero for lifted wheels.
std::array<double, 4> true_vertical_loads(const VehicleState& s, const VehicleParams& p);

// Steady-state body attitude targets of the quasi-static model.
double roll_steady_state(double a_y, const VehicleParams& p);
double pitch_steady_state(double a_x, const VehicleParams& p);

// Tracking errors against the reference at the closest-point projection.
// Throws ReferenceExhausted past the end of the path.
TrackingErrors tracking_errors(const VehicleState& s, const ReferencePath& path);

// Rate of the lateral offset: -v_x sin(e_phi) + v_y cos(e_phi).
double lateral_error_rate(const VehicleState& s, const TrackingErrors& e);

}  // namespace tfa

#endif
