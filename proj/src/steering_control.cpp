#include "tfa/steering_control.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace tfa {

SuspensionKinematics::SuspensionKinematics(double linear_coeff) {
  table_ = {{-1.0, -linear_coeff}, {0.0, 0.0}, {1.0, linear_coeff}};
}

SuspensionKinematics::SuspensionKinematics(std::vector<std::pair<double, double>> table)
    : table_(std::move(table)) {
  if (table_.size() < 2)
    throw ModelError("SuspensionKinematics: need at least two table points");
  std::sort(table_.begin(), table_.end());
  bool through_zero = false;
  for (const auto& [s, t] : table_)
    if (s == 0.0 && t == 0.0)
      through_zero = true;
  if (!through_zero)
    throw ModelError("SuspensionKinematics: map must pass through (0, 0)");
}

SuspensionKinematics SuspensionKinematics::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ModelError("SuspensionKinematics::from_csv: cannot open " + path);
  std::vector<std::pair<double, double>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
      continue;
    std::istringstream ls(line);
    double s, t;
    char comma;
    if (ls >> s >> comma >> t)
      table.emplace_back(s, t);
  }
  return SuspensionKinematics(std::move(table));
}

double SuspensionKinematics::toe(double jounce) const {
  if (jounce <= table_.front().first) {
    const auto& [s0, t0] = table_[0];
    const auto& [s1, t1] = table_[1];
    return t0 + (jounce - s0) * (t1 - t0) / (s1 - s0);
  }
  for (size_t i = 1; i < table_.size(); ++i) {
    if (jounce <= table_[i].first) {
      const auto& [s0, t0] = table_[i - 1];
      const auto& [s1, t1] = table_[i];
      return t0 + (jounce - s0) * (t1 - t0) / (s1 - s0);
    }
  }
  const auto& [s0, t0] = table_[table_.size() - 2];
  const auto& [s1, t1] = table_.back();
  return t0 + (jounce - s0) * (t1 - t0) / (s1 - s0);
}

std::array<double, 4> suspension_jounce(const VehicleState& s, const VehicleParams& p) {
  std::array<double, 4> j{};
  for (int w = 0; w < 4; ++w) {
    const double side = is_left(w) ? -1.0 : 1.0;   // lean right compresses the right side
    const double axis = is_front(w) ? -p.a : p.b;  // nose-up extends the front
    j[w] = side * (p.B / 2.0) * s.gamma + axis * s.theta;
  }
  return j;
}

double torque_command(double f_x_alloc, double omega_wheel, const VehicleParams& p,
                      bool inertia_hold, double omega_dot_ref) {
  (void)omega_wheel;
  double T = f_x_alloc * p.r;
  if (inertia_hold)
    T += p.I_w * omega_dot_ref;
  return T;
}

double nominal_steer(double f_y_alloc, double f_z_hat, const VehicleState& s, int wheel,
                     const VehicleParams& p, const InverseLateralTable& table) {
  const double alpha_req = table.query(f_y_alloc, f_z_hat);
  return wheel_velocity_angle(s, wheel, p) - alpha_req;
}

double bump_steer_feedforward(double delta_n, double s_j, int wheel,
                              const SuspensionKinematics& kin) {
  return delta_n - kin.steer_disturbance(wheel, s_j);
}

}  // namespace tfa
