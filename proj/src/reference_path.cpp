#include "tfa/reference_path.hpp"

#include <algorithm>
#include <cmath>

namespace tfa {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::StepYaw: return "step_yaw";
    case Scenario::DoubleLaneChange: return "dlc";
    case Scenario::Slalom: return "slalom";
  }
  return "?";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "step_yaw") return Scenario::StepYaw;
  if (s == "dlc") return Scenario::DoubleLaneChange;
  if (s == "slalom") return Scenario::Slalom;
  throw ModelError("unknown scenario: " + s);
}

ScenarioConfig make_scenario(Scenario s) {
  ScenarioConfig cfg;
  cfg.scenario = s;
  switch (s) {
    case Scenario::StepYaw:
      cfg.duration = 8.0;
      cfg.window_start = cfg.step_time;
      cfg.window_end = cfg.duration;
      break;
    case Scenario::DoubleLaneChange:
      cfg.duration = 9.0;
      // lead-in 30 m plus the first 15 m section.
      cfg.window_start = 45.0 / cfg.speed;
      cfg.window_end = 150.0 / cfg.speed;
      break;
    case Scenario::Slalom:
      cfg.duration = 14.0;
      // 30 m lead plus one wavelength of amplitude ramp.
      cfg.window_start = (30.0 + 2.0 * cfg.cone_spacing) / cfg.speed;
      cfg.window_end = cfg.duration;
      break;
  }
  return cfg;
}

ReferencePath::ReferencePath(std::vector<PathSample> samples, double v_ref)
    : samples_(std::move(samples)), v_ref_(v_ref) {
  if (samples_.size() < 2)
    throw ModelError("ReferencePath: need at least two samples");
}

ReferencePath::Projection ReferencePath::project(double X, double Y) const {
  const int n = static_cast<int>(samples_.size());
  int best = 0;
  double best_d = 1e300;
  for (int i = 0; i < n; ++i) {
    const double dx = X - samples_[i].X;
    const double dy = Y - samples_[i].Y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }

  // Project onto the two segments adjacent to the nearest sample.
  Projection out;
  double seg_best = 1e300;
  for (int i = std::max(0, best - 1); i <= std::min(n - 2, best); ++i) {
    const PathSample& p0 = samples_[i];
    const PathSample& p1 = samples_[i + 1];
    const double dx = p1.X - p0.X, dy = p1.Y - p0.Y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((X - p0.X) * dx + (Y - p0.Y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = p0.X + t * dx, cy = p0.Y + t * dy;
    const double d = (X - cx) * (X - cx) + (Y - cy) * (Y - cy);
    if (d < seg_best) {
      seg_best = d;
      out.s = p0.s + t * (p1.s - p0.s);
      out.psi_ref = p0.psi + t * (p1.psi - p0.psi);
      out.curvature = p0.curvature + t * (p1.curvature - p0.curvature);
      const double nx = -std::sin(out.psi_ref), ny = std::cos(out.psi_ref);
      out.e_y = (X - cx) * nx + (Y - cy) * ny;
      out.past_end = (i == n - 2 && t >= 1.0);
    }
  }
  return out;
}

namespace {

double quintic(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double quintic_d(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }
double quintic_dd(double u) { return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u); }

// Builds a path from a lateral profile y(x) with analytic derivatives.
template <typename F>
std::vector<PathSample> from_profile(double x_max, double dx, F&& eval) {
  std::vector<PathSample> out;
  double s = 0.0, prev_x = 0.0, prev_y = 0.0;
  for (double x = 0.0; x <= x_max + 0.5 * dx; x += dx) {
    auto [y, yp, ypp] = eval(x);
    if (!out.empty())
      s += std::hypot(x - prev_x, y - prev_y);
    PathSample ps;
    ps.s = s;
    ps.X = x;
    ps.Y = y;
    ps.psi = std::atan(yp);
    ps.curvature = ypp / std::pow(1.0 + yp * yp, 1.5);
    out.push_back(ps);
    prev_x = x;
    prev_y = y;
  }
  return out;
}

std::vector<PathSample> step_yaw_samples(const ScenarioConfig& cfg) {
  const double s0 = cfg.speed * cfg.step_time;
  const double R = cfg.speed / cfg.yaw_rate_target;
  const double total = cfg.speed * (cfg.duration + 2.0);
  std::vector<PathSample> out;
  const double ds = 0.25;
  for (double s = 0.0; s <= total; s += ds) {
    PathSample ps;
    ps.s = s;
    if (s <= s0) {
      ps.X = s;
      ps.Y = 0.0;
      ps.psi = 0.0;
      ps.curvature = 0.0;
    } else {
      const double th = (s - s0) / R;
      ps.X = s0 + R * std::sin(th);
      ps.Y = R * (1.0 - std::cos(th));
      ps.psi = th;
      ps.curvature = 1.0 / R;
    }
    out.push_back(ps);
  }
  return out;
}

}  // namespace

ReferencePath reference_path(const ScenarioConfig& cfg) {
  cfg.validate();
  switch (cfg.scenario) {
    case Scenario::StepYaw:
      return ReferencePath(step_yaw_samples(cfg), cfg.speed);

    case Scenario::DoubleLaneChange: {
      // 30 m lead-in, then 15 / 30 / 25 / 25 / 15 m sections with the lane
      // offset held over the middle section.
      const double lead = 30.0;
      const double x1 = lead + 15.0;        // start of first transition
      const double x2 = x1 + 30.0;          // start of offset lane
      const double x3 = x2 + 25.0;          // start of return transition
      const double x4 = x3 + 25.0;          // back in lane
      const double off = cfg.lane_offset;
      const double x_max = std::max(cfg.speed * (cfg.duration + 2.0), x4 + 15.0 + 40.0);
      auto eval = [&](double x) -> std::array<double, 3> {
        if (x < x1) return {0.0, 0.0, 0.0};
        if (x < x2) {
          const double L = x2 - x1, u = (x - x1) / L;
          return {off * quintic(u), off * quintic_d(u) / L, off * quintic_dd(u) / (L * L)};
        }
        if (x < x3) return {off, 0.0, 0.0};
        if (x < x4) {
          const double L = x4 - x3, u = (x - x3) / L;
          return {off * (1.0 - quintic(u)), -off * quintic_d(u) / L,
                  -off * quintic_dd(u) / (L * L)};
        }
        return {0.0, 0.0, 0.0};
      };
      return ReferencePath(from_profile(x_max, 0.25, eval), cfg.speed);
    }

    case Scenario::Slalom: {
      const double lead = 30.0;
      const double wavelength = 2.0 * cfg.cone_spacing;
      const double A = cfg.slalom_amplitude;
      const double w = 2.0 * M_PI / wavelength;
      const double x_max = cfg.speed * (cfg.duration + 2.0);
      auto eval = [&](double x) -> std::array<double, 3> {
        if (x < lead) return {0.0, 0.0, 0.0};
        const double xi = x - lead;
        const double sn = std::sin(w * xi), cn = std::cos(w * xi);
        if (xi < wavelength) {
          // amplitude ramp over the first wavelength
          const double u = xi / wavelength;
          const double E = quintic(u);
          const double Ep = quintic_d(u) / wavelength;
          const double Epp = quintic_dd(u) / (wavelength * wavelength);
          const double y = A * E * sn;
          const double yp = A * (Ep * sn + E * w * cn);
          const double ypp = A * (Epp * sn + 2.0 * Ep * w * cn - E * w * w * sn);
          return {y, yp, ypp};
        }
        return {A * sn, A * w * cn, -A * w * w * sn};
      };
      return ReferencePath(from_profile(x_max, 0.25, eval), cfg.speed);
    }
  }
  throw ModelError("reference_path: unknown scenario");
}

}  // namespace tfa
