#ifndef TFA_TIRE_HPP
#define TFA_TIRE_HPP

#include <string>
#include <vector>

#include "tfa/types.hpp"

namespace tfa {

// Combined-slip brush model. Returns (f_x, f_y) in the tire frame.
// Positive kappa drives, positive alpha produces negative f_y.
// Preconditions: kappa > -1, |alpha| < pi/2, f_z >= 0.
Vec2 brush_force(double kappa, double alpha, double f_z, double mu, const TireParams& tire);

// Theoretical combined slip magnitude gamma_t at the given slip state.
double brush_slip_magnitude(double kappa, double alpha, const TireParams& tire);

// Slip angle that produces lateral force u * mu * f_z at zero longitudinal
// slip (closed form of the pure-lateral brush curve). |u| < 1.
double pure_lateral_slip_angle(double u, double f_z, double mu, const TireParams& tire);

// Discrete first-order relaxation of one force component.
double relaxation_component(double f_steady, double f_prev, double tau, double dt);

// One relaxation step for a (f_x, f_y) pair with the axle's time constants.
Vec2 relaxation_step(const Vec2& f_steady, const Vec2& f_prev, bool front_axle, double dt,
                     const TireParams& tire);

// Inverse of the pure-lateral brush curve, tabulated over vertical load and
// normalized lateral force u = f_y / (mu f_z). Immutable after construction.
class InverseLateralTable {
 public:
  // Builds the table by numerically inverting the pure-lateral curve on each
  // f_z grid line. Throws if a grid line fails the monotonicity check.
  InverseLateralTable(const TireParams& tire, double mu, double f_z_min, double f_z_max,
                      int n_fz = 64, int n_u = 129);

  // Required slip angle for lateral force f_y at load f_z. |f_y| >= mu f_z is
  // clamped to the peak-force slip angle. Throws if f_z is out of range.
  double query(double f_y, double f_z) const;

  double f_z_min() const { return f_z_min_; }
  double f_z_max() const { return f_z_max_; }
  double u_max() const { return u_max_; }
  double mu() const { return mu_; }
  double at_node(int i_fz, int i_u) const { return alpha_[idx(i_fz, i_u)]; }
  double fz_node(int i) const;
  double u_node(int j) const;
  int n_fz() const { return n_fz_; }
  int n_u() const { return n_u_; }

  // CSV dump (f_z, u, alpha) for inspection.
  void dump_csv(const std::string& path) const;

 private:
  int idx(int i, int j) const { return i * n_u_ + j; }

  double mu_;
  double f_z_min_, f_z_max_;
  double u_max_;
  int n_fz_, n_u_;
  std::vector<double> alpha_;
};

}  // namespace tfa

#endif
