#ifndef TFA_CONFIG_HPP
#define TFA_CONFIG_HPP

#include <string>

#include "tfa/allocation.hpp"
#include "tfa/load_estimation.hpp"
#include "tfa/motion_control.hpp"
#include "tfa/types.hpp"

namespace tfa {

// Full toolkit configuration with the reference vehicle and actuator
// parameters as defaults. Serialized as `key = value` lines.
struct Config {
  VehicleParams vehicle;
  TireParams tire;
  ActuatorParams actuators;
  MotionGains gains;
  AllocationWeights allocation;

  double plant_dt = 1e-3;       // [s]
  double control_period = 1e-2; // [s]

  double bump_steer_coeff = 0.2;   // toe per jounce [rad/m]
  std::string suspension_map_csv;  // optional (jounce, toe) table; overrides the coefficient
  bool plant_bump_steer = true;    // apply the toe disturbance in the plant
  bool torque_inertia_hold = false;

  // LTRPZ unsprung term handling: uniform | antisymmetric | off
  UnsprungTerm ltrpz_unsprung = UnsprungTerm::Uniform;
  ErrorMetric load_error_metric = ErrorMetric::MeanRelative;

  double sensor_noise_std = 0.0;  // accel measurement noise [m/s^2]

  void validate() const;
};

Config load_config(const std::string& path);
void save_config(const Config& cfg, const std::string& path);

}  // namespace tfa

#endif
