#include "tfa/config.hpp"
#include <cstdlib>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tfa {

void Config::validate() const {
  vehicle.validate();
  tire.validate();
  actuators.validate();
  gains.validate();
  allocation.validate();
  if (!(plant_dt > 0.0) || !(control_period >= plant_dt))
    throw ModelError("Config: control period must be at least the plant step");
}

namespace {

struct Binding {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

std::string fmt(double v) {
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v)
      break;
  }
  return buf;
}

std::map<std::string, Binding> bindings(Config& c) {
  std::map<std::string, Binding> m;
  auto num = [&m](const std::string& key, double& ref) {
    m[key] = {[&ref](const std::string& s) { ref = std::stod(s); },
              [&ref] { return fmt(ref); }};
  };
  auto flag = [&m](const std::string& key, bool& ref) {
    m[key] = {[&ref](const std::string& s) { ref = (s == "on" || s == "true" || s == "1"); },
              [&ref] { return std::string(ref ? "on" : "off"); }};
  };

  num("vehicle.sprung_mass", c.vehicle.m_s);
  num("vehicle.unsprung_mass_per_axle", c.vehicle.m_u);
  num("vehicle.yaw_inertia", c.vehicle.I_z);
  num("vehicle.wheel_inertia", c.vehicle.I_w);
  num("vehicle.cg_to_front_axle", c.vehicle.a);
  num("vehicle.cg_to_rear_axle", c.vehicle.b);
  num("vehicle.track_width", c.vehicle.B);
  num("vehicle.cg_height", c.vehicle.h);
  num("vehicle.roll_center_height", c.vehicle.h_r);
  num("vehicle.roll_arm", c.vehicle.roll_arm);
  num("vehicle.front_roll_stiffness_nm_per_deg", c.vehicle.K_1);
  num("vehicle.rear_roll_stiffness_nm_per_deg", c.vehicle.K_2);
  num("vehicle.rolling_radius", c.vehicle.r);
  num("vehicle.rolling_resistance", c.vehicle.f_roll);
  num("vehicle.drag_coefficient", c.vehicle.C_D);
  num("vehicle.frontal_area", c.vehicle.A_f);
  num("vehicle.air_density", c.vehicle.rho);
  num("vehicle.gravity", c.vehicle.g);
  num("vehicle.road_adhesion", c.vehicle.mu);
  num("vehicle.attitude_lag", c.vehicle.attitude_lag);
  num("vehicle.pitch_coeff", c.vehicle.pitch_coeff);

  num("tire.longitudinal_stiffness", c.tire.K_s);
  num("tire.cornering_stiffness", c.tire.K_alpha);
  num("tire.tau_fx_front", c.tire.tau_fx_front);
  num("tire.tau_fy_front", c.tire.tau_fy_front);
  num("tire.tau_fx_rear", c.tire.tau_fx_rear);
  num("tire.tau_fy_rear", c.tire.tau_fy_rear);

  num("actuator.tau_drive", c.actuators.tau_d);
  num("actuator.tau_brake", c.actuators.tau_b);
  num("actuator.tau_steer", c.actuators.tau_s);
  num("actuator.torque_max", c.actuators.T_max);
  num("actuator.torque_min", c.actuators.T_min);
  num("actuator.torque_rate_per_10ms", c.actuators.T_rate);
  num("actuator.steer_max", c.actuators.delta_max);
  num("actuator.steer_min", c.actuators.delta_min);
  num("actuator.steer_rate_per_10ms", c.actuators.delta_rate);

  num("control.kp_vx", c.gains.kp_vx);
  num("control.ki_vx", c.gains.ki_vx);
  num("control.vx_integral_max", c.gains.vx_integral_max);
  num("control.kp_wr", c.gains.kp_wr);
  num("control.ki_wr", c.gains.ki_wr);
  num("control.wr_integral_max", c.gains.wr_integral_max);
  num("control.lambda_smc", c.gains.lambda_smc);
  num("control.eta_smc", c.gains.eta_smc);
  num("control.phi_boundary", c.gains.phi_boundary);
  flag("control.coupling_feedforward", c.gains.coupling_feedforward);

  num("allocation.k_gamma", c.allocation.k_gamma);
  num("allocation.k_d", c.allocation.k_d);
  num("allocation.load_floor", c.allocation.load_floor);

  num("sim.plant_dt", c.plant_dt);
  num("sim.control_period", c.control_period);
  num("sim.bump_steer_coeff", c.bump_steer_coeff);
  m["sim.suspension_map_csv"] = {[&c](const std::string& v) { c.suspension_map_csv = v; },
                                 [&c] { return c.suspension_map_csv; }};
  flag("sim.plant_bump_steer", c.plant_bump_steer);
  flag("sim.torque_inertia_hold", c.torque_inertia_hold);
  num("sim.sensor_noise_std", c.sensor_noise_std);

  m["estimation.ltrpz_unsprung"] = {
      [&c](const std::string& s) {
        if (s == "uniform") c.ltrpz_unsprung = UnsprungTerm::Uniform;
        else if (s == "antisymmetric") c.ltrpz_unsprung = UnsprungTerm::Antisymmetric;
        else if (s == "off") c.ltrpz_unsprung = UnsprungTerm::Off;
        else throw ModelError("config: unknown ltrpz_unsprung mode " + s);
      },
      [&c] {
        switch (c.ltrpz_unsprung) {
          case UnsprungTerm::Uniform: return std::string("uniform");
          case UnsprungTerm::Antisymmetric: return std::string("antisymmetric");
          default: return std::string("off");
        }
      }};
  m["estimation.error_metric"] = {
      [&c](const std::string& s) {
        if (s == "mean") c.load_error_metric = ErrorMetric::MeanRelative;
        else if (s == "rms") c.load_error_metric = ErrorMetric::RmsRelative;
        else throw ModelError("config: unknown error metric " + s);
      },
      [&c] {
        return std::string(c.load_error_metric == ErrorMetric::MeanRelative ? "mean" : "rms");
      }};
  return m;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ModelError("load_config: cannot open " + path);
  Config cfg;
  auto map = bindings(cfg);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ModelError("load_config: missing '=' at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = map.find(key);
    if (it == map.end())
      throw ModelError("load_config: unknown key '" + key + "'");
    it->second.set(value);
  }
  cfg.validate();
  return cfg;
}

void save_config(const Config& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ModelError("save_config: cannot open " + path);
  Config copy = cfg;
  out << "# 4WID-4WIS allocation toolkit configuration\n";
  for (const auto& [key, binding] : bindings(copy))
    out << key << " = " << binding.get() << "\n";
}

}  // namespace tfa
