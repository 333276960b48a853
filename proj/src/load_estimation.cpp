#include "tfa/load_estimation.hpp"

#include <algorithm>

namespace tfa {

const char* to_string(LoadMethod m) {
  switch (m) {
    case LoadMethod::ST: return "st";
    case LoadMethod::LTXY: return "ltxy";
    case LoadMethod::LTRPZ: return "ltrpz";
    case LoadMethod::TRUE_LOAD: return "true";
  }
  return "?";
}

LoadEstimate estimate_st(const VehicleParams& p) {
  LoadEstimate e;
  e.method = LoadMethod::ST;
  const double m = p.m();
  const double front = m * p.g * p.b / (2.0 * p.L());
  const double rear = m * p.g * p.a / (2.0 * p.L());
  e.f_z = {front, front, rear, rear};
  return e;
}

LoadEstimate estimate_ltxy(double a_x, double a_y, const VehicleParams& p) {
  LoadEstimate e;
  e.method = LoadMethod::LTXY;
  const double m = p.m();
  const double L = p.L();
  const double cf = m * p.b / (2.0 * L);
  const double cr = m * p.a / (2.0 * L);
  const double lat = 2.0 * a_y * p.h / p.B;
  e.f_z[FL] = cf * (p.g - a_x * p.h / p.b - lat);
  e.f_z[FR] = cf * (p.g - a_x * p.h / p.b + lat);
  e.f_z[RL] = cr * (p.g + a_x * p.h / p.a - lat);
  e.f_z[RR] = cr * (p.g + a_x * p.h / p.a + lat);
  return e;
}

LoadEstimate estimate_ltrpz(double a_x, double a_y, double a_z_meas, double theta, double gamma,
                            const VehicleParams& p, UnsprungTerm unsprung) {
  LoadEstimate e;
  e.method = LoadMethod::LTRPZ;
  const double m = p.m();
  const double L = p.L();
  const double ct = std::cos(theta);

  // Static unsprung share plus the sprung mass carried through pitch, heave
  // and longitudinal transfer. a_z_meas = g reproduces the static split.
  const double common_f = ((m - p.m_s) * p.b * p.g + p.m_s * ct * (p.b * a_z_meas - a_x * p.h)) /
                          (2.0 * L);
  const double common_r = ((m - p.m_s) * p.a * p.g + p.m_s * ct * (p.a * a_z_meas + a_x * p.h)) /
                          (2.0 * L);

  // Sprung lateral transfer through the roll center, per wheel.
  const double lat_f = p.m_s * a_y * p.b * p.h_r / (L * p.B);
  const double lat_r = p.m_s * a_y * p.a * p.h_r / (L * p.B);

  // Elastic roll couple reacted across the track.
  const double roll_f = p.K1_rad() * gamma / p.B;
  const double roll_r = p.K2_rad() * gamma / p.B;

  double uns_left = 0.0, uns_right = 0.0;
  switch (unsprung) {
    case UnsprungTerm::Uniform:
      uns_left = uns_right = p.m_u * a_y * p.r;
      break;
    case UnsprungTerm::Antisymmetric:
      uns_right = p.m_u * a_y * p.r / p.B;
      uns_left = -uns_right;
      break;
    case UnsprungTerm::Off:
      break;
  }

  e.f_z[FL] = common_f - lat_f - roll_f + uns_left;
  e.f_z[FR] = common_f + lat_f + roll_f + uns_right;
  e.f_z[RL] = common_r - lat_r - roll_r + uns_left;
  e.f_z[RR] = common_r + lat_r + roll_r + uns_right;
  return e;
}

LoadEstimate floor_clamped(const LoadEstimate& e, double floor_n) {
  LoadEstimate out = e;
  for (double& v : out.f_z)
    v = std::max(v, floor_n);
  return out;
}

double estimation_error(const std::vector<std::array<double, 4>>& estimated,
                        const std::vector<std::array<double, 4>>& truth, ErrorMetric metric) {
  if (estimated.empty() || estimated.size() != truth.size())
    throw ModelError("estimation_error: series must be nonempty and equal length");

  double acc = 0.0;
  size_t n = 0;
  for (size_t k = 0; k < estimated.size(); ++k) {
    for (int w = 0; w < 4; ++w) {
      if (!(truth[k][w] > 0.0))
        throw ModelError("estimation_error: true loads must be positive");
      const double rel = (estimated[k][w] - truth[k][w]) / truth[k][w];
      acc += metric == ErrorMetric::MeanRelative ? std::abs(rel) : rel * rel;
      ++n;
    }
  }
  const double mean = acc / static_cast<double>(n);
  return 100.0 * (metric == ErrorMetric::MeanRelative ? mean : std::sqrt(mean));
}

}  // namespace tfa
