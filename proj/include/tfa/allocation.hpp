#ifndef TFA_ALLOCATION_HPP
#define TFA_ALLOCATION_HPP

#include "tfa/envelope.hpp"
#include "tfa/qp.hpp"
#include "tfa/vehicle_plant.hpp"

namespace tfa {

enum class AllocMode { Static, Dynamic };
enum class ConstraintVariant { Extremum, Circle, Octagon, Polygon, None };

const char* to_string(AllocMode m);
const char* to_string(ConstraintVariant v);
AllocMode alloc_mode_from_string(const std::string& s);
ConstraintVariant constraint_from_string(const std::string& s);

struct AllocationWeights {
  double k_gamma = 0.05;  // adhesion-utilization weight
  double k_d = 0.3;       // actuator-rate weight (dynamic mode)
  double load_floor = 50.0;  // [N] floor on f_z_hat before weighting

  void validate() const {
    if (!(k_gamma > 0) || !(k_d >= 0) || !(load_floor > 0))
      throw ModelError("AllocationWeights: weights must be positive");
  }
};

// Quadratic allocation problem in solver scaling: utilization variables
// u_i = f_i / (mu f_z_hat), demand rows divided by mu m g with the moment row
// additionally divided by B/2, rate weights per control period.
struct AllocationProblem {
  ForceDemand demand;
  Mat3x8 M_f;                 // effectiveness matrix, physical units
  Vec8 W_f;                   // adhesion weights 1/(mu f_z_hat_i)
  Vec8 W_df;                  // rate weights 1/omega_i [s]
  double k_gamma = 0.05;
  double k_d = 0.3;
  Vec8 f_prev = Vec8::Zero();
  std::array<ForceEnvelope, 4> envelopes;
  AllocMode mode = AllocMode::Static;

  // scaling context
  std::array<double, 4> f_z_hat{};
  double mu = 1.0;
  double force_scale = 1.0;   // mu m g
  double moment_scale = 1.0;  // B/2
  double period = 0.01;       // control period [s]

  // Scaled Hessian and gradient of the objective.
  void quadratic(Mat8& H, Vec8& g) const;
  // Scaled demand matrix (3x8) and vector.
  void scaled_demand(Eigen::Matrix<double, 3, 8>& Ms, Vec3& ds) const;
  double load_scale(int wheel) const { return mu * f_z_hat[wheel]; }
};

struct AllocationResult {
  Vec8 f = Vec8::Zero();              // per-wheel force commands, Eq-8 layout
  double residual = 0.0;              // ||demand - M_f f|| with moment row / (B/2)
  std::vector<int> active_set;
  int iterations = 0;
  int sqp_iterations = 0;
  QpStatus status = QpStatus::Optimal;
  bool fallback = false;              // previous allocation reused after a failure

  double kkt_stationarity = 0.0;
  double kkt_primal = 0.0;
  double kkt_dual = 0.0;
  double kkt_complementarity = 0.0;
};

// Assemble the weighted allocation problem. f_z_hat entries are floored
// before use; W_df bandwidths pick the drive or brake channel from the sign
// of the previous longitudinal allocation.
AllocationProblem build_problem(const ForceDemand& demand, const std::array<double, 4>& delta,
                                const std::array<double, 4>& f_z_hat, const Vec8& f_prev,
                                const std::array<ForceEnvelope, 4>& envelopes,
                                const AllocationWeights& weights, AllocMode mode,
                                const VehicleParams& vehicle, const ActuatorParams& act,
                                const TireParams& tire, double period);

// Active-set solve over linear envelopes (throws on a circle envelope).
AllocationResult solve_active_set(const AllocationProblem& prob);

// Sequential tangent-cut solve for friction-circle envelopes.
AllocationResult solve_sqp_circle(const AllocationProblem& prob);

// Stateful dispatcher holding the previous allocation for warm starts and
// rate penalties. One owner per control loop.
class Allocator {
 public:
  Allocator(const VehicleParams& vehicle, const ActuatorParams& act, const TireParams& tire,
            AllocationWeights weights, AllocMode mode, double period);

  AllocationResult allocate(const ForceDemand& demand, const std::array<double, 4>& delta,
                            const std::array<double, 4>& f_z_hat,
                            const std::array<ForceEnvelope, 4>& envelopes);

  const Vec8& previous() const { return f_prev_; }
  void reset(const Vec8& f = Vec8::Zero()) { f_prev_ = f; }

 private:
  const VehicleParams& vehicle_;
  const ActuatorParams& act_;
  const TireParams& tire_;
  AllocationWeights weights_;
  AllocMode mode_;
  double period_;
  Vec8 f_prev_ = Vec8::Zero();
};

}  // namespace tfa

#endif
