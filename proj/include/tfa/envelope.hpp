#ifndef TFA_ENVELOPE_HPP
#define TFA_ENVELOPE_HPP

#include <string>
#include <utility>
#include <vector>

#include "tfa/tire.hpp"
#include "tfa/types.hpp"

namespace tfa {

struct SlipBounds {
  double kappa_lo = 0.0;
  double kappa_hi = 0.0;
  double alpha_lo = 0.0;  // [rad]
  double alpha_hi = 0.0;

  bool valid() const { return kappa_lo <= kappa_hi && alpha_lo <= alpha_hi; }
};

// f * n <= b with |n| = 1.
struct Halfspace {
  Vec2 n = Vec2::Zero();
  double b = 0.0;
};

enum class EnvelopeKind { Extremum, Circle, Octagon, Polygon, Segment, Point, Unbounded };

const char* to_string(EnvelopeKind k);

// Per-wheel feasible tire-force region. Polygon-like variants carry their
// counterclockwise vertex ring and matching outward halfspaces; circle keeps
// only the radius; degenerate segment/point envelopes carry 2/1 vertices.
struct ForceEnvelope {
  EnvelopeKind kind = EnvelopeKind::Unbounded;
  double radius = 0.0;           // circle only: mu * f_z_hat
  std::vector<Vec2> vertices;    // CCW ring (polygon/octagon/extremum), 2 (segment) or 1 (point)
  std::vector<Halfspace> halfspaces;
};

// Reachable net torque over the next control interval, from magnitude and
// rate limits around the current realized torque.
std::pair<double, double> torque_bounds(double T_current, const ActuatorParams& params, double dt,
                                        bool rate_limited = true);

// Reachable steer angle over the next control interval.
std::pair<double, double> steer_bounds(double delta_current, const ActuatorParams& params,
                                       double dt, bool rate_limited = true);

// Slip-ratio interval reachable at the next control tick: one explicit Euler
// step of the wheel dynamics at each torque bound, with the chassis speed
// held constant. Throws KinematicSingularity below the valid speed range.
std::pair<double, double> slip_ratio_bounds(double v_x, double omega_wheel, double f_x_current,
                                            std::pair<double, double> torque_range,
                                            const VehicleParams& params, double dt);

// Slip-angle interval from the kinematic wheel-velocity angle and the steer
// interval (alpha_hi pairs with delta_lo).
std::pair<double, double> slip_angle_bounds(double kinematic_angle,
                                            std::pair<double, double> steer_range);

// Attainable force volume: the eight vertex rules evaluated on the slip box,
// mapped through the brush model, deduplicated and hulled counterclockwise.
// Degenerate boxes produce segment or point envelopes.
ForceEnvelope polygon_vertices(const SlipBounds& bounds, double f_z_hat, double mu,
                               const TireParams& tire);

ForceEnvelope circle_envelope(double f_z_hat, double mu);
ForceEnvelope octagon_envelope(double f_z_hat, double mu);   // inscribed, vertex on +f_x axis
ForceEnvelope extremum_envelope(double f_z_hat, double mu);  // axis-aligned square
ForceEnvelope unbounded_envelope();

// Membership test with an absolute tolerance in Newtons.
bool contains(const ForceEnvelope& env, const Vec2& f, double tol = 0.0);

// Nearest feasible point (used to seed the allocator).
Vec2 project(const ForceEnvelope& env, const Vec2& f);

// Slip states behind each polygon vertex, in ring order (diagnostics).
struct PolygonDebug {
  std::vector<Vec2> slip;        // (kappa, alpha) per raw rule A1..A8
  std::vector<int> rule_branch;  // branch taken per rule (0-based, -1 replaced)
};
ForceEnvelope polygon_vertices_debug(const SlipBounds& bounds, double f_z_hat, double mu,
                                     const TireParams& tire, PolygonDebug* debug);

// Minimal SVG snapshot of one or more envelopes plus marker points.
void write_envelope_svg(const std::string& path,
                        const std::vector<std::pair<ForceEnvelope, std::string>>& envelopes,
                        const std::vector<std::pair<Vec2, std::string>>& points, double scale);

}  // namespace tfa

#endif
