#ifndef TFA_TYPES_HPP
#define TFA_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tfa {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat3x8 = Eigen::Matrix<double, 3, 8>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

// Wheel order is fixed everywhere: front-left, front-right, rear-left, rear-right.
enum Wheel : int { FL = 0, FR = 1, RL = 2, RR = 3 };
inline constexpr std::array<Wheel, 4> kWheels{FL, FR, RL, RR};
inline constexpr std::array<const char*, 4> kWheelNames{"fl", "fr", "rl", "rr"};

inline constexpr bool is_front(int w) { return w == FL || w == FR; }
inline constexpr bool is_left(int w) { return w == FL || w == RL; }

// Force vector layout: [fx_fl, fy_fl, fx_fr, fy_fr, fx_rl, fy_rl, fx_rr, fy_rr].
inline constexpr int fx_index(int wheel) { return 2 * wheel; }
inline constexpr int fy_index(int wheel) { return 2 * wheel + 1; }

inline constexpr double deg2rad(double d) { return d * M_PI / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / M_PI; }

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when slip kinematics are evaluated below the valid speed range.
struct KinematicSingularity : ModelError {
  using ModelError::ModelError;
};

// Chassis, inertia and geometry parameters (double-track model).
struct VehicleParams {
  double m_s = 1110.0;   // sprung mass [kg]
  double m_u = 60.0;     // unsprung mass per axle [kg] (config: axle reading of "both sides")
  double I_z = 1343.1;   // yaw inertia [kg m^2]
  double I_w = 1.2;      // wheel + drivetrain inertia [kg m^2]
  double a = 1.06;       // CG to front axle [m]
  double b = 1.54;       // CG to rear axle [m]
  double B = 1.48;       // track width [m]
  double h = 0.54;       // CG height [m]
  double h_r = 0.5;      // roll center height [m]
  double roll_arm = 0.15;  // sprung-mass moment arm for the roll-angle state [m]
  double K_1 = 60.0;     // front roll stiffness [N m / deg]
  double K_2 = 150.0;    // rear roll stiffness [N m / deg]
  double r = 0.298;      // effective rolling radius [m]
  double f_roll = 0.012; // rolling resistance coefficient
  double C_D = 0.3;      // drag coefficient
  double A_f = 2.2;      // frontal area [m^2]
  double rho = 1.206;    // air density [kg/m^3]
  double g = 9.81;       // gravity [m/s^2]
  double mu = 1.0;       // road adhesion coefficient

  // Quasi-static body attitude model.
  double attitude_lag = 0.2;    // roll/pitch first-order lag [s]
  double pitch_coeff = 0.0044;  // steady pitch per unit a_x [rad/(m/s^2)]

  double m() const { return m_s + 2.0 * m_u; }
  double L() const { return a + b; }
  double K1_rad() const { return K_1 * 180.0 / M_PI; }
  double K2_rad() const { return K_2 * 180.0 / M_PI; }

  void validate() const {
    if (!(m_s > 0) || !(m_u >= 0) || !(I_z > 0) || !(I_w > 0))
      throw ModelError("VehicleParams: masses and inertias must be positive");
    if (!(a > 0) || !(b > 0) || !(B > 0) || !(r > 0))
      throw ModelError("VehicleParams: geometry must be positive");
    if (!(mu > 0) || mu > 1.5)
      throw ModelError("VehicleParams: mu out of (0, 1.5]");
  }
};

// Brush tire stiffness and force relaxation time constants.
struct TireParams {
  double K_s = 1.0e5;          // longitudinal slip stiffness [N]
  double K_alpha = 8.0e4;      // cornering stiffness [N/rad]
  double tau_fx_front = 0.014; // [s]
  double tau_fy_front = 0.018; // [s]
  double tau_fx_rear = 0.020;  // [s]
  double tau_fy_rear = 0.024;  // [s]

  double tau_fx(int wheel) const { return is_front(wheel) ? tau_fx_front : tau_fx_rear; }
  double tau_fy(int wheel) const { return is_front(wheel) ? tau_fy_front : tau_fy_rear; }

  void validate() const {
    if (!(K_s > 0) || !(K_alpha > 0))
      throw ModelError("TireParams: stiffnesses must be positive");
    if (!(tau_fx_front > 0) || !(tau_fy_front > 0) || !(tau_fx_rear > 0) || !(tau_fy_rear > 0))
      throw ModelError("TireParams: time constants must be positive");
  }
};

// Drive/brake/steer actuator time constants and limits. Rate limits are
// specified per 10 ms and rescaled when applied over a different interval.
struct ActuatorParams {
  double tau_d = 0.015;                 // drive [s]
  double tau_b = 0.06;                  // brake [s]
  double tau_s = 0.1;                   // steer [s]
  double T_max = 1250.0;                // [N m]
  double T_min = -1250.0;               // [N m]
  double T_rate = 500.0;                // [N m per 10 ms]
  double delta_max = deg2rad(35.0);     // [rad]
  double delta_min = -deg2rad(35.0);    // [rad]
  double delta_rate = deg2rad(0.5);     // [rad per 10 ms]

  static constexpr double kRateRefDt = 0.01; // rate limits quoted per 10 ms

  double tau_torque(double command) const { return command < 0.0 ? tau_b : tau_d; }

  // Tire-force channel bandwidths: series first-order stages merged by
  // summing time constants before inversion.
  double omega_x(int wheel, bool braking, const TireParams& tire) const {
    return 1.0 / ((braking ? tau_b : tau_d) + tire.tau_fx(wheel));
  }
  double omega_y(int wheel, const TireParams& tire) const {
    return 1.0 / (tau_s + tire.tau_fy(wheel));
  }

  void validate() const {
    if (!(tau_d > 0) || !(tau_b > 0) || !(tau_s > 0))
      throw ModelError("ActuatorParams: time constants must be positive");
    if (!(T_max > T_min) || !(T_rate > 0) || !(delta_max > delta_min) || !(delta_rate > 0))
      throw ModelError("ActuatorParams: limits must be ordered and rates positive");
  }
};

// Demanded chassis-level generalized forces.
struct ForceDemand {
  double F_x = 0.0; // [N]
  double F_y = 0.0; // [N]
  double M_z = 0.0; // [N m]

  Vec3 vec() const { return Vec3(F_x, F_y, M_z); }
};

}  // namespace tfa

#endif
