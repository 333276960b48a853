#include "tfa/vehicle_plant.hpp"

#include <algorithm>

#include "tfa/actuators.hpp"
#include "tfa/load_estimation.hpp"

namespace tfa {

Vec2 wheel_position(int wheel, const VehicleParams& p) {
  const double x = is_front(wheel) ? p.a : -p.b;
  const double y = is_left(wheel) ? p.B / 2.0 : -p.B / 2.0;
  return Vec2(x, y);
}

Mat3x8 effectiveness_matrix(const std::array<double, 4>& delta, const VehicleParams& p) {
  Mat3x8 M;
  for (int w = 0; w < 4; ++w) {
    const Vec2 pos = wheel_position(w, p);
    const double c = std::cos(delta[w]);
    const double s = std::sin(delta[w]);
    // Column for the longitudinal tire force: body-frame force (c, s).
    M(0, fx_index(w)) = c;
    M(1, fx_index(w)) = s;
    M(2, fx_index(w)) = pos.x() * s - pos.y() * c;
    // Column for the lateral tire force: body-frame force (-s, c).
    M(0, fy_index(w)) = -s;
    M(1, fy_index(w)) = c;
    M(2, fy_index(w)) = pos.x() * c + pos.y() * s;
  }
  return M;
}

Vec3 generalized_forces(const Vec8& f, const std::array<double, 4>& delta,
                        const VehicleParams& p) {
  return effectiveness_matrix(delta, p) * f;
}

double wheel_velocity_angle(const VehicleState& s, int wheel, const VehicleParams& p) {
  const Vec2 pos = wheel_position(wheel, p);
  const double vx_w = s.v_x - pos.y() * s.omega_r;
  const double vy_w = s.v_y + pos.x() * s.omega_r;
  if (!(std::abs(vx_w) > 0.05))
    throw KinematicSingularity("wheel_velocity_angle: contact speed below valid range");
  return std::atan(vy_w / vx_w);
}

WheelSlip wheel_kinematics(const VehicleState& s, const std::array<double, 4>& delta,
                           const VehicleParams& p) {
  if (!(s.v_x > 0.1))
    throw KinematicSingularity("wheel_kinematics: v_x below valid range");
  WheelSlip slip;
  for (int w = 0; w < 4; ++w) {
    slip.kappa[w] = (s.omega_i[w] * p.r - s.v_x) / std::abs(s.v_x);
    slip.alpha[w] = wheel_velocity_angle(s, w, p) - delta[w];
  }
  return slip;
}

double roll_steady_state(double a_y, const VehicleParams& p) {
  return p.m_s * a_y * p.roll_arm / (p.K1_rad() + p.K2_rad());
}

double pitch_steady_state(double a_x, const VehicleParams& p) {
  return p.pitch_coeff * a_x;
}

VehicleState step_dynamics(const VehicleState& s, const Vec8& f, const std::array<double, 4>& f_z,
                           const std::array<double, 4>& T, const std::array<double, 4>& delta,
                           double dt, const VehicleParams& p, const SanityBounds& sanity) {
  if (!(dt > 0.0) || dt > 2e-3)
    throw ModelError("step_dynamics: dt must lie in (0, 2 ms]");
  auto finite = [](double v) { return std::isfinite(v); };
  for (int i = 0; i < 8; ++i)
    if (!finite(f(i)))
      throw ModelError("step_dynamics: non-finite force input");
  for (int w = 0; w < 4; ++w)
    if (!finite(T[w]) || !finite(delta[w]) || !finite(f_z[w]))
      throw ModelError("step_dynamics: non-finite wheel input");
  (void)f_z;  // resistance model is chassis-level

  const double m = p.m();
  const Vec3 F = generalized_forces(f, delta, p);

  const double drag = 0.5 * p.C_D * p.A_f * p.rho * s.v_x * s.v_x;
  const double roll_res = m * p.g * p.f_roll;

  const double ax = (F(0) - roll_res - drag) / m;
  const double ay = F(1) / m;

  VehicleState n = s;
  n.v_x = s.v_x + dt * (ax + s.omega_r * s.v_y);
  n.v_y = s.v_y + dt * (ay - s.omega_r * s.v_x);
  n.omega_r = s.omega_r + dt * F(2) / p.I_z;
  n.phi = s.phi + dt * s.omega_r;
  n.X = s.X + dt * (s.v_x * std::cos(s.phi) - s.v_y * std::sin(s.phi));
  n.Y = s.Y + dt * (s.v_x * std::sin(s.phi) + s.v_y * std::cos(s.phi));
  for (int w = 0; w < 4; ++w) {
    n.omega_i[w] = s.omega_i[w] + dt * (T[w] - f(fx_index(w)) * p.r) / p.I_w;
    n.omega_i[w] = std::max(n.omega_i[w], 0.0);
  }

  n.a_x = ax;
  n.a_y = ay;
  n.a_z = 0.0;  // flat road, quasi-static heave

  n.gamma = first_order_step(s.gamma, roll_steady_state(ay, p), p.attitude_lag, dt);
  n.theta = first_order_step(s.theta, pitch_steady_state(ax, p), p.attitude_lag, dt);

  if (!finite(n.v_x) || !finite(n.v_y) || !finite(n.omega_r) ||
      std::abs(n.v_x) > sanity.v || std::abs(n.v_y) > sanity.v ||
      std::abs(n.omega_r) > sanity.omega_r)
    throw PlantDivergence("step_dynamics: state exceeded sanity bounds");
  return n;
}

std::array<double, 4> true_vertical_loads(const VehicleState& s, const VehicleParams& p) {
  const LoadEstimate e = estimate_ltrpz(s.a_x, s.a_y, p.g + s.a_z, s.theta, s.gamma, p,
                                        UnsprungTerm::Antisymmetric);
  std::array<double, 4> out{};
  for (int w = 0; w < 4; ++w)
    out[w] = std::max(e.f_z[w], 0.0);
  return out;
}

TrackingErrors tracking_errors(const VehicleState& s, const ReferencePath& path) {
  const auto proj = path.project(s.X, s.Y);
  if (proj.past_end)
    throw ReferenceExhausted("tracking_errors: vehicle passed the end of the reference");

  TrackingErrors e;
  e.e_vx = path.v_ref() - s.v_x;
  double dphi = proj.psi_ref - s.phi;
  while (dphi > M_PI) dphi -= 2.0 * M_PI;
  while (dphi < -M_PI) dphi += 2.0 * M_PI;
  e.e_phi = dphi;
  if (!(std::abs(e.e_phi) < M_PI / 2.0))
    throw ModelError("tracking_errors: heading error outside (-pi/2, pi/2)");
  e.e_y = proj.e_y;
  e.k_ref = proj.curvature;
  e.e_omega_r = s.omega_r - path.v_ref() * proj.curvature / std::cos(e.e_phi);
  return e;
}

double lateral_error_rate(const VehicleState& s, const TrackingErrors& e) {
  return -s.v_x * std::sin(e.e_phi) + s.v_y * std::cos(e.e_phi);
}

}  // namespace tfa
