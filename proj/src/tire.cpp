#include "tfa/tire.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace tfa {

double brush_slip_magnitude(double kappa, double alpha, const TireParams& tire) {
  const double sx = kappa / (1.0 + kappa);
  const double sy = std::tan(alpha) / (1.0 + kappa);
  return std::hypot(tire.K_s * sx, tire.K_alpha * sy);
}

Vec2 brush_force(double kappa, double alpha, double f_z, double mu, const TireParams& tire) {
  if (!(kappa > -1.0))
    throw ModelError("brush_force: kappa must exceed -1");
  if (!(std::abs(alpha) < M_PI / 2.0))
    throw ModelError("brush_force: |alpha| must be below pi/2");
  if (!(f_z >= 0.0))
    throw ModelError("brush_force: f_z must be nonnegative");
  if (f_z == 0.0)
    return Vec2::Zero();

  const double sx = kappa / (1.0 + kappa);
  const double sy = std::tan(alpha) / (1.0 + kappa);
  const double gx = tire.K_s * sx;
  const double gy = tire.K_alpha * sy;
  const double gamma_t = std::hypot(gx, gy);
  if (gamma_t == 0.0)
    return Vec2::Zero();

  const double cap = 3.0 * mu * f_z;
  double f;
  if (gamma_t <= cap) {
    f = gamma_t - gamma_t * gamma_t / cap + gamma_t * gamma_t * gamma_t / (cap * cap * 3.0);
  } else {
    f = mu * f_z;
  }
  return Vec2(gx / gamma_t * f, -gy / gamma_t * f);
}

double pure_lateral_slip_angle(double u, double f_z, double mu, const TireParams& tire) {
  const double au = std::min(std::abs(u), 1.0 - 1e-12);
  // Invert f = mu f_z (1 - (1 - gamma_t/(3 mu f_z))^3) at gamma_t = K_alpha tan(alpha).
  const double gamma_t = 3.0 * mu * f_z * (1.0 - std::cbrt(1.0 - au));
  const double alpha = std::atan(gamma_t / tire.K_alpha);
  return u > 0 ? -alpha : alpha;
}

double relaxation_component(double f_steady, double f_prev, double tau, double dt) {
  const double lam = std::exp(-dt / tau);
  return lam * f_prev + (1.0 - lam) * f_steady;
}

Vec2 relaxation_step(const Vec2& f_steady, const Vec2& f_prev, bool front_axle, double dt,
                     const TireParams& tire) {
  if (!(dt > 0.0))
    throw ModelError("relaxation_step: dt must be positive");
  const double tx = front_axle ? tire.tau_fx_front : tire.tau_fx_rear;
  const double ty = front_axle ? tire.tau_fy_front : tire.tau_fy_rear;
  return Vec2(relaxation_component(f_steady.x(), f_prev.x(), tx, dt),
              relaxation_component(f_steady.y(), f_prev.y(), ty, dt));
}

namespace {

// Bisection on the pure-lateral forward curve: find alpha >= 0 with
// brush lateral magnitude == target at the given load.
double invert_pure_lateral(double target, double f_z, double mu, const TireParams& tire,
                           double alpha_hi) {
  double lo = 0.0, hi = alpha_hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = -brush_force(0.0, mid, f_z, mu, tire).y();
    (f < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

InverseLateralTable::InverseLateralTable(const TireParams& tire, double mu, double f_z_min,
                                         double f_z_max, int n_fz, int n_u)
    : mu_(mu), f_z_min_(f_z_min), f_z_max_(f_z_max), u_max_(0.999), n_fz_(n_fz), n_u_(n_u) {
  if (!(f_z_min > 0.0) || !(f_z_max > f_z_min))
    throw ModelError("InverseLateralTable: f_z range must be a positive interval");
  if (n_fz < 2 || n_u < 3 || n_u % 2 == 0)
    throw ModelError("InverseLateralTable: grid must have >=2 loads and an odd u count >= 3");

  alpha_.resize(static_cast<size_t>(n_fz_) * n_u_);
  for (int i = 0; i < n_fz_; ++i) {
    const double f_z = fz_node(i);
    // Peak-force angle: slip angle achieving 0.999 mu f_z, used as the clamp.
    const double gamma_peak = 3.0 * mu_ * f_z * (1.0 - std::cbrt(1.0 - u_max_));
    const double alpha_peak = std::atan(gamma_peak / tire.K_alpha) * 1.05;

    double prev = -1.0;
    for (int j = 0; j <= n_u_ / 2; ++j) {
      const double u = u_max_ * static_cast<double>(j) / (n_u_ / 2);
      const double al = invert_pure_lateral(u * mu_ * f_z, f_z, mu_, tire, alpha_peak);
      if (al < prev)
        throw ModelError("InverseLateralTable: pure-lateral curve not monotone on grid line");
      prev = al;
      // Odd symmetry by construction: alpha(f_z, -u) = -alpha(f_z, u);
      // positive u (leftward force) needs negative slip angle.
      alpha_[idx(i, n_u_ / 2 + j)] = -al;
      alpha_[idx(i, n_u_ / 2 - j)] = al;
    }
  }
}

double InverseLateralTable::fz_node(int i) const {
  return f_z_min_ + (f_z_max_ - f_z_min_) * static_cast<double>(i) / (n_fz_ - 1);
}

double InverseLateralTable::u_node(int j) const {
  return -u_max_ + 2.0 * u_max_ * static_cast<double>(j) / (n_u_ - 1);
}

double InverseLateralTable::query(double f_y, double f_z) const {
  if (!(f_z >= f_z_min_ && f_z <= f_z_max_))
    throw ModelError("InverseLateralTable::query: f_z out of table range");

  double u = f_y / (mu_ * f_z);
  u = std::clamp(u, -u_max_, u_max_);

  const double fi = (f_z - f_z_min_) / (f_z_max_ - f_z_min_) * (n_fz_ - 1);
  const double fj = (u + u_max_) / (2.0 * u_max_) * (n_u_ - 1);
  const int i0 = std::min(static_cast<int>(fi), n_fz_ - 2);
  const int j0 = std::min(static_cast<int>(fj), n_u_ - 2);
  const double wi = fi - i0;
  const double wj = fj - j0;

  const double a00 = alpha_[idx(i0, j0)];
  const double a01 = alpha_[idx(i0, j0 + 1)];
  const double a10 = alpha_[idx(i0 + 1, j0)];
  const double a11 = alpha_[idx(i0 + 1, j0 + 1)];
  return (1 - wi) * ((1 - wj) * a00 + wj * a01) + wi * ((1 - wj) * a10 + wj * a11);
}

void InverseLateralTable::dump_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out)
    throw ModelError("InverseLateralTable::dump_csv: cannot open " + path);
  out << "f_z,u,alpha\n";
  char buf[96];
  for (int i = 0; i < n_fz_; ++i)
    for (int j = 0; j < n_u_; ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.17g\n", fz_node(i), u_node(j), at_node(i, j));
      out << buf;
    }
}

}  // namespace tfa
