#ifndef TFA_LOAD_ESTIMATION_HPP
#define TFA_LOAD_ESTIMATION_HPP

#include <vector>

#include "tfa/types.hpp"

namespace tfa {

enum class LoadMethod { ST, LTXY, LTRPZ, TRUE_LOAD };

const char* to_string(LoadMethod m);

struct LoadEstimate {
  std::array<double, 4> f_z{};
  LoadMethod method = LoadMethod::ST;
};

// Handling of the unsprung lateral term: `Uniform` adds m_u a_y r with the
// same sign on all wheels; `Antisymmetric` applies the load-conserving
// couple m_u a_y r / B across each axle; `Off` drops the term.
enum class UnsprungTerm { Uniform, Antisymmetric, Off };

// Static split, no load transfer.
LoadEstimate estimate_st(const VehicleParams& p);

// Longitudinal/lateral acceleration transfer, no body attitude.
LoadEstimate estimate_ltxy(double a_x, double a_y, const VehicleParams& p);

// Full estimator with roll, pitch and vertical acceleration. `a_z_meas` is
// the measured vertical acceleration of the sprung mass (g at rest on a
// level road). The roll-stiffness terms enter as the anti-symmetric couple
// K_i gamma / B, so roll transfers load across the axle instead of creating
// weight from nothing.
LoadEstimate estimate_ltrpz(double a_x, double a_y, double a_z_meas, double theta, double gamma,
                            const VehicleParams& p,
                            UnsprungTerm unsprung = UnsprungTerm::Uniform);

// Clamp every entry to at least `floor_n` (QP weights divide by these).
LoadEstimate floor_clamped(const LoadEstimate& e, double floor_n = 50.0);

enum class ErrorMetric { MeanRelative, RmsRelative };

// Percent error of an estimate series against the true series, averaged over
// time and wheels. Series must be nonempty and equal length, true loads > 0.
double estimation_error(const std::vector<std::array<double, 4>>& estimated,
                        const std::vector<std::array<double, 4>>& truth,
                        ErrorMetric metric = ErrorMetric::MeanRelative);

}  // namespace tfa

#endif
