#include "tfa/envelope.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace tfa {

const char* to_string(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::Extremum: return "extremum";
    case EnvelopeKind::Circle: return "circle";
    case EnvelopeKind::Octagon: return "octagon";
    case EnvelopeKind::Polygon: return "polygon";
    case EnvelopeKind::Segment: return "segment";
    case EnvelopeKind::Point: return "point";
    case EnvelopeKind::Unbounded: return "unbounded";
  }
  return "?";
}

std::pair<double, double> torque_bounds(double T_current, const ActuatorParams& params, double dt,
                                        bool rate_limited) {
  if (!rate_limited)
    return {params.T_min, params.T_max};
  const double budget = params.T_rate * dt / ActuatorParams::kRateRefDt;
  return {std::max(params.T_min, T_current - budget), std::min(params.T_max, T_current + budget)};
}

std::pair<double, double> steer_bounds(double delta_current, const ActuatorParams& params,
                                       double dt, bool rate_limited) {
  if (!rate_limited)
    return {params.delta_min, params.delta_max};
  const double budget = params.delta_rate * dt / ActuatorParams::kRateRefDt;
  return {std::max(params.delta_min, delta_current - budget),
          std::min(params.delta_max, delta_current + budget)};
}

std::pair<double, double> slip_ratio_bounds(double v_x, double omega_wheel, double f_x_current,
                                            std::pair<double, double> torque_range,
                                            const VehicleParams& params, double dt) {
  if (!(v_x > 0.1))
    throw KinematicSingularity("slip_ratio_bounds: v_x below valid range");
  auto kappa_after = [&](double T) {
    const double omega_next = omega_wheel + dt * (T - f_x_current * params.r) / params.I_w;
    return (omega_next * params.r - v_x) / std::abs(v_x);
  };
  return {kappa_after(torque_range.first), kappa_after(torque_range.second)};
}

std::pair<double, double> slip_angle_bounds(double kinematic_angle,
                                            std::pair<double, double> steer_range) {
  return {kinematic_angle - steer_range.second, kinematic_angle - steer_range.first};
}

namespace {

// Root of gamma_t(alpha, kappa) = 3 mu f_z along a fixed-alpha line, on the
// corner's side of the gamma_t minimum at kappa = (K_alpha tan(alpha)/K_s)^2.
// Returns the original corner when the whole line is saturated.
double saturation_replacement(double alpha, double kappa_corner, double cap,
                              const TireParams& tire) {
  const double c = tire.K_alpha * std::abs(std::tan(alpha));
  const double kappa_min = (c / tire.K_s) * (c / tire.K_s);
  if (brush_slip_magnitude(kappa_min, alpha, tire) > cap)
    return kappa_corner;  // saturated everywhere along this line

  double lo = kappa_min, hi = kappa_corner;  // gamma_t(lo) <= cap < gamma_t(hi)
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (brush_slip_magnitude(mid, alpha, tire) <= cap ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct RawVertex {
  double kappa;
  double alpha;
  int branch;  // index of the rule branch taken, -1 when saturation-replaced
};

// Table of vertex rules: A1, A3, A5, A7 are the slip-box edge extremes
// (nearest-to-zero coordinate on the free axis); A2, A4, A6, A8 are the box
// corners with the saturation replacement on kappa.
std::array<RawVertex, 8> rule_vertices(const SlipBounds& b, double cap, const TireParams& tire) {
  auto nearest_zero = [](double lo, double hi, int& branch) {
    if (lo <= 0.0 && 0.0 <= hi) { branch = 0; return 0.0; }
    if (lo > 0.0) { branch = 1; return lo; }
    branch = 2;
    return hi;
  };
  auto corner = [&](double alpha, double kappa, RawVertex& v) {
    v.alpha = alpha;
    if (brush_slip_magnitude(kappa, alpha, tire) <= cap) {
      v.kappa = kappa;
      v.branch = 0;
    } else {
      v.kappa = saturation_replacement(alpha, kappa, cap, tire);
      v.branch = -1;
    }
  };

  std::array<RawVertex, 8> v{};
  v[0].alpha = b.alpha_hi;
  v[0].kappa = nearest_zero(b.kappa_lo, b.kappa_hi, v[0].branch);
  corner(b.alpha_hi, b.kappa_hi, v[1]);
  v[2].kappa = b.kappa_hi;
  v[2].alpha = nearest_zero(b.alpha_lo, b.alpha_hi, v[2].branch);
  corner(b.alpha_lo, b.kappa_hi, v[3]);
  v[4].alpha = b.alpha_lo;
  v[4].kappa = nearest_zero(b.kappa_lo, b.kappa_hi, v[4].branch);
  corner(b.alpha_lo, b.kappa_lo, v[5]);
  v[6].kappa = b.kappa_lo;
  v[6].alpha = nearest_zero(b.alpha_lo, b.alpha_hi, v[6].branch);
  corner(b.alpha_hi, b.kappa_lo, v[7]);
  return v;
}

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew monotone chain, counterclockwise output.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& p, const Vec2& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  const int n = static_cast<int>(pts.size());
  if (n <= 2)
    return pts;
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
      --k;
    hull[k++] = pts[i];
  }
  const int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

void build_halfspaces(ForceEnvelope& env) {
  env.halfspaces.clear();
  const auto& v = env.vertices;
  const int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i) {
    const Vec2 d = v[(i + 1) % n] - v[i];
    const double len = d.norm();
    if (len < 1e-12)
      continue;
    Halfspace h;
    h.n = Vec2(d.y() / len, -d.x() / len);  // outward normal of a CCW ring
    h.b = h.n.dot(v[i]);
    env.halfspaces.push_back(h);
  }
}

}  // namespace

ForceEnvelope polygon_vertices_debug(const SlipBounds& bounds, double f_z_hat, double mu,
                                     const TireParams& tire, PolygonDebug* debug) {
  if (!bounds.valid())
    throw ModelError("polygon_vertices: bounds must satisfy lo <= hi");
  if (!(f_z_hat > 0.0))
    throw ModelError("polygon_vertices: f_z_hat must be positive");

  const double cap = 3.0 * mu * f_z_hat;
  const auto raw = rule_vertices(bounds, cap, tire);

  std::vector<Vec2> forces;
  forces.reserve(8);
  for (const auto& rv : raw) {
    forces.push_back(brush_force(rv.kappa, rv.alpha, f_z_hat, mu, tire));
    if (debug) {
      debug->slip.emplace_back(rv.kappa, rv.alpha);
      debug->rule_branch.push_back(rv.branch);
    }
  }

  // Deduplicate within 1 N.
  std::vector<Vec2> unique;
  for (const auto& f : forces) {
    bool dup = false;
    for (const auto& u : unique)
      if ((f - u).norm() < 1.0)
        dup = true;
    if (!dup)
      unique.push_back(f);
  }

  ForceEnvelope env;
  if (unique.size() == 1) {
    env.kind = EnvelopeKind::Point;
    env.vertices = unique;
    return env;
  }
  if (unique.size() == 2) {
    env.kind = EnvelopeKind::Segment;
    env.vertices = unique;
    return env;
  }

  std::vector<Vec2> hull = convex_hull(unique);
  if (hull.size() < 3) {
    env.kind = hull.size() == 2 ? EnvelopeKind::Segment : EnvelopeKind::Point;
    env.vertices = hull;
    return env;
  }
  env.kind = EnvelopeKind::Polygon;
  env.vertices = std::move(hull);
  build_halfspaces(env);
  return env;
}

ForceEnvelope polygon_vertices(const SlipBounds& bounds, double f_z_hat, double mu,
                               const TireParams& tire) {
  return polygon_vertices_debug(bounds, f_z_hat, mu, tire, nullptr);
}

ForceEnvelope circle_envelope(double f_z_hat, double mu) {
  if (!(f_z_hat > 0.0))
    throw ModelError("circle_envelope: f_z_hat must be positive");
  ForceEnvelope env;
  env.kind = EnvelopeKind::Circle;
  env.radius = mu * f_z_hat;
  return env;
}

ForceEnvelope octagon_envelope(double f_z_hat, double mu) {
  if (!(f_z_hat > 0.0))
    throw ModelError("octagon_envelope: f_z_hat must be positive");
  ForceEnvelope env;
  env.kind = EnvelopeKind::Octagon;
  const double R = mu * f_z_hat;
  for (int k = 0; k < 8; ++k) {
    const double th = k * M_PI / 4.0;
    env.vertices.emplace_back(R * std::cos(th), R * std::sin(th));
  }
  build_halfspaces(env);
  return env;
}

ForceEnvelope extremum_envelope(double f_z_hat, double mu) {
  if (!(f_z_hat > 0.0))
    throw ModelError("extremum_envelope: f_z_hat must be positive");
  ForceEnvelope env;
  env.kind = EnvelopeKind::Extremum;
  const double R = mu * f_z_hat;
  env.vertices = {Vec2(R, -R), Vec2(R, R), Vec2(-R, R), Vec2(-R, -R)};
  build_halfspaces(env);
  return env;
}

ForceEnvelope unbounded_envelope() {
  return {};
}

namespace {

Vec2 closest_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 < 1e-24)
    return a;
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return a + t * d;
}

}  // namespace

bool contains(const ForceEnvelope& env, const Vec2& f, double tol) {
  switch (env.kind) {
    case EnvelopeKind::Unbounded:
      return true;
    case EnvelopeKind::Circle:
      return f.norm() <= env.radius + tol;
    case EnvelopeKind::Point:
      return (f - env.vertices[0]).norm() <= tol;
    case EnvelopeKind::Segment:
      return (f - closest_on_segment(env.vertices[0], env.vertices[1], f)).norm() <= tol;
    default:
      for (const auto& h : env.halfspaces)
        if (h.n.dot(f) > h.b + tol)
          return false;
      return true;
  }
}

Vec2 project(const ForceEnvelope& env, const Vec2& f) {
  switch (env.kind) {
    case EnvelopeKind::Unbounded:
      return f;
    case EnvelopeKind::Circle: {
      const double r = f.norm();
      return r <= env.radius ? f : Vec2(f * (env.radius / r));
    }
    case EnvelopeKind::Point:
      return env.vertices[0];
    case EnvelopeKind::Segment:
      return closest_on_segment(env.vertices[0], env.vertices[1], f);
    default: {
      if (contains(env, f, 0.0))
        return f;
      const int n = static_cast<int>(env.vertices.size());
      Vec2 best = env.vertices[0];
      double best_d = (f - best).squaredNorm();
      for (int i = 0; i < n; ++i) {
        const Vec2 c = closest_on_segment(env.vertices[i], env.vertices[(i + 1) % n], f);
        const double d = (f - c).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      return best;
    }
  }
}

void write_envelope_svg(const std::string& path,
                        const std::vector<std::pair<ForceEnvelope, std::string>>& envelopes,
                        const std::vector<std::pair<Vec2, std::string>>& points, double scale) {
  std::ofstream out(path);
  if (!out)
    throw ModelError("write_envelope_svg: cannot open " + path);
  const double half = 260.0;
  auto sx = [&](double v) { return half + v / scale * 240.0; };
  auto sy = [&](double v) { return half - v / scale * 240.0; };

  out << "<svg xmlns='http://www.w3.org/2000/svg' width='520' height='520' "
         "viewBox='0 0 520 520'>\n";
  out << "<line x1='0' y1='" << half << "' x2='520' y2='" << half
      << "' stroke='#ccc'/>\n<line x1='" << half << "' y1='0' x2='" << half
      << "' y2='520' stroke='#ccc'/>\n";
  for (const auto& [env, color] : envelopes) {
    if (env.kind == EnvelopeKind::Circle) {
      out << "<circle cx='" << half << "' cy='" << half << "' r='" << env.radius / scale * 240.0
          << "' fill='none' stroke='" << color << "'/>\n";
    } else if (!env.vertices.empty()) {
      out << "<polygon points='";
      for (const auto& v : env.vertices)
        out << sx(v.x()) << "," << sy(v.y()) << " ";
      out << "' fill='none' stroke='" << color << "'/>\n";
    }
  }
  for (const auto& [p, color] : points)
    out << "<circle cx='" << sx(p.x()) << "' cy='" << sy(p.y()) << "' r='3' fill='" << color
        << "'/>\n";
  out << "</svg>\n";
}

}  // namespace tfa
