#ifndef TFA_REFERENCE_PATH_HPP
#define TFA_REFERENCE_PATH_HPP

#include <string>
#include <vector>

#include "tfa/types.hpp"

namespace tfa {

enum class Scenario { StepYaw, DoubleLaneChange, Slalom };

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct ScenarioConfig {
  Scenario scenario = Scenario::StepYaw;
  double speed = 80.0 / 3.6;  // [m/s]
  double duration = 8.0;      // [s]
  double mu = 1.0;

  // step yaw rate input
  double yaw_rate_target = deg2rad(22.0);  // [rad/s]
  double step_time = 1.0;                  // [s]

  // double lane change (ISO 3888-1 style section lengths)
  double lane_offset = 3.5;  // [m]

  // slalom
  double cone_spacing = 30.0;      // [m] between adjacent cones
  double slalom_amplitude = 1.7;   // [m], keeps peak lateral demand near mu g

  // metrics window (maneuver-active portion of the run)
  double window_start = 0.0;
  double window_end = 1e9;

  void validate() const {
    if (!(speed > 0.0) || !(duration > 0.0) || !(mu > 0.0))
      throw ModelError("ScenarioConfig: speed, duration and mu must be positive");
  }
};

// Baseline configs for the three maneuvers (window bounds filled in).
ScenarioConfig make_scenario(Scenario s);

struct PathSample {
  double s = 0.0;
  double X = 0.0;
  double Y = 0.0;
  double psi = 0.0;        // heading [rad]
  double curvature = 0.0;  // signed, left positive [1/m]
};

// Arc-length sampled reference with constant speed profile.
class ReferencePath {
 public:
  ReferencePath(std::vector<PathSample> samples, double v_ref);

  struct Projection {
    double s = 0.0;
    double e_y = 0.0;  // vehicle offset, positive left of the path
    double psi_ref = 0.0;
    double curvature = 0.0;
    bool past_end = false;
  };

  // Closest-point projection of a global position.
  Projection project(double X, double Y) const;

  double v_ref() const { return v_ref_; }
  double length() const { return samples_.back().s; }
  const std::vector<PathSample>& samples() const { return samples_; }

 private:
  std::vector<PathSample> samples_;
  double v_ref_;
};

ReferencePath reference_path(const ScenarioConfig& cfg);

}  // namespace tfa

#endif
