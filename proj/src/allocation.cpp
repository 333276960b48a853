#include "tfa/allocation.hpp"

#include <algorithm>

namespace tfa {

const char* to_string(AllocMode m) {
  return m == AllocMode::Static ? "static" : "dynamic";
}

const char* to_string(ConstraintVariant v) {
  switch (v) {
    case ConstraintVariant::Extremum: return "extremum";
    case ConstraintVariant::Circle: return "circle";
    case ConstraintVariant::Octagon: return "octagon";
    case ConstraintVariant::Polygon: return "polygon";
    case ConstraintVariant::None: return "none";
  }
  return "?";
}

AllocMode alloc_mode_from_string(const std::string& s) {
  if (s == "static") return AllocMode::Static;
  if (s == "dynamic") return AllocMode::Dynamic;
  throw ModelError("unknown allocation mode: " + s);
}

ConstraintVariant constraint_from_string(const std::string& s) {
  if (s == "extremum") return ConstraintVariant::Extremum;
  if (s == "circle") return ConstraintVariant::Circle;
  if (s == "octagon") return ConstraintVariant::Octagon;
  if (s == "polygon") return ConstraintVariant::Polygon;
  if (s == "none") return ConstraintVariant::None;
  throw ModelError("unknown constraint variant: " + s);
}

void AllocationProblem::scaled_demand(Eigen::Matrix<double, 3, 8>& Ms, Vec3& ds) const {
  const Vec3 row_scale(force_scale, force_scale, force_scale * moment_scale);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 8; ++c)
      Ms(r, c) = M_f(r, c) * load_scale(c / 2) / row_scale(r);
    ds(r) = demand.vec()(r) / row_scale(r);
  }
}

void AllocationProblem::quadratic(Mat8& H, Vec8& g) const {
  Eigen::Matrix<double, 3, 8> Ms;
  Vec3 ds;
  scaled_demand(Ms, ds);

  H = 2.0 * (Ms.transpose() * Ms);
  H.diagonal().array() += 2.0 * k_gamma * k_gamma;
  g = -2.0 * Ms.transpose() * ds;

  if (mode == AllocMode::Dynamic) {
    // Normalized by the slowest channel: the rate penalty stays subordinate
    // to the demand term while keeping the relative bandwidth ratios.
    const double w_max = W_df.maxCoeff();
    for (int i = 0; i < 8; ++i) {
      const double rate_w = k_d * W_df(i) / w_max;
      const double u_prev = f_prev(i) / load_scale(i / 2);
      H(i, i) += 2.0 * rate_w * rate_w;
      g(i) += -2.0 * rate_w * rate_w * u_prev;
    }
  }
}

AllocationProblem build_problem(const ForceDemand& demand, const std::array<double, 4>& delta,
                                const std::array<double, 4>& f_z_hat, const Vec8& f_prev,
                                const std::array<ForceEnvelope, 4>& envelopes,
                                const AllocationWeights& weights, AllocMode mode,
                                const VehicleParams& vehicle, const ActuatorParams& act,
                                const TireParams& tire, double period) {
  weights.validate();
  if (!demand.vec().allFinite() || !f_prev.allFinite())
    throw ModelError("build_problem: non-finite demand or previous allocation");
  for (double fz : f_z_hat)
    if (!std::isfinite(fz))
      throw ModelError("build_problem: non-finite vertical load estimate");

  AllocationProblem prob;
  prob.demand = demand;
  prob.M_f = effectiveness_matrix(delta, vehicle);
  prob.k_gamma = weights.k_gamma;
  prob.k_d = weights.k_d;
  prob.f_prev = f_prev;
  prob.envelopes = envelopes;
  prob.mode = mode;
  prob.mu = vehicle.mu;
  prob.force_scale = vehicle.mu * vehicle.m() * vehicle.g;
  prob.moment_scale = vehicle.B / 2.0;
  prob.period = period;

  for (int w = 0; w < 4; ++w) {
    prob.f_z_hat[w] = std::max(f_z_hat[w], weights.load_floor);
    const double wf = 1.0 / (vehicle.mu * prob.f_z_hat[w]);
    prob.W_f(fx_index(w)) = wf;
    prob.W_f(fy_index(w)) = wf;
    const bool braking = f_prev(fx_index(w)) < 0.0;
    prob.W_df(fx_index(w)) = 1.0 / act.omega_x(w, braking, tire);
    prob.W_df(fy_index(w)) = 1.0 / act.omega_y(w, tire);
  }
  return prob;
}

namespace {

// Constraint rows of one wheel's envelope in scaled coordinates, appended to
// the inequality/equality lists. `extra_cuts` carries SQP tangent planes.
struct ScaledConstraints {
  std::vector<Eigen::Matrix<double, 1, 8>> A;
  std::vector<double> b;
  std::vector<Eigen::Matrix<double, 1, 8>> A_eq;
  std::vector<double> b_eq;
};

void append_wheel(ScaledConstraints& sc, const AllocationProblem& prob, int w,
                  const std::vector<Halfspace>& extra_cuts) {
  const ForceEnvelope& env = prob.envelopes[w];
  const double scale = prob.load_scale(w);
  auto ineq = [&](const Vec2& n, double b) {
    Eigen::Matrix<double, 1, 8> row = Eigen::Matrix<double, 1, 8>::Zero();
    row(fx_index(w)) = n.x() * scale;
    row(fy_index(w)) = n.y() * scale;
    sc.A.push_back(row);
    sc.b.push_back(b);
  };
  auto eq = [&](const Vec2& n, double b) {
    Eigen::Matrix<double, 1, 8> row = Eigen::Matrix<double, 1, 8>::Zero();
    row(fx_index(w)) = n.x() * scale;
    row(fy_index(w)) = n.y() * scale;
    sc.A_eq.push_back(row);
    sc.b_eq.push_back(b);
  };

  switch (env.kind) {
    case EnvelopeKind::Unbounded:
      break;
    case EnvelopeKind::Circle:
      for (const auto& h : extra_cuts)
        ineq(h.n, h.b);
      break;
    case EnvelopeKind::Point:
      eq(Vec2(1, 0), env.vertices[0].x());
      eq(Vec2(0, 1), env.vertices[0].y());
      break;
    case EnvelopeKind::Segment: {
      const Vec2 d = env.vertices[1] - env.vertices[0];
      const Vec2 t = d.normalized();
      const Vec2 n(-t.y(), t.x());
      eq(n, n.dot(env.vertices[0]));
      ineq(t, t.dot(env.vertices[1]));
      ineq(-t, -t.dot(env.vertices[0]));
      break;
    }
    default:
      for (const auto& h : env.halfspaces)
        ineq(h.n, h.b);
      break;
  }
}

QpProblem assemble_qp(const AllocationProblem& prob,
                      const std::array<std::vector<Halfspace>, 4>& cuts) {
  ScaledConstraints sc;
  for (int w = 0; w < 4; ++w)
    append_wheel(sc, prob, w, cuts[w]);

  QpProblem qp;
  Mat8 H;
  Vec8 g;
  prob.quadratic(H, g);
  qp.H = H;
  qp.g = g;
  qp.A.resize(static_cast<int>(sc.A.size()), 8);
  qp.b.resize(static_cast<int>(sc.b.size()));
  for (size_t i = 0; i < sc.A.size(); ++i) {
    qp.A.row(static_cast<int>(i)) = sc.A[i];
    qp.b(static_cast<int>(i)) = sc.b[i];
  }
  qp.A_eq.resize(static_cast<int>(sc.A_eq.size()), 8);
  qp.b_eq.resize(static_cast<int>(sc.b_eq.size()));
  for (size_t i = 0; i < sc.A_eq.size(); ++i) {
    qp.A_eq.row(static_cast<int>(i)) = sc.A_eq[i];
    qp.b_eq(static_cast<int>(i)) = sc.b_eq[i];
  }
  return qp;
}

// Feasible start: previous allocation projected per wheel onto its envelope,
// in scaled coordinates.
Eigen::VectorXd scaled_start(const AllocationProblem& prob) {
  Eigen::VectorXd x0(8);
  for (int w = 0; w < 4; ++w) {
    const Vec2 prev(prob.f_prev(fx_index(w)), prob.f_prev(fy_index(w)));
    const Vec2 proj = project(prob.envelopes[w], prev);
    x0(fx_index(w)) = proj.x() / prob.load_scale(w);
    x0(fy_index(w)) = proj.y() / prob.load_scale(w);
  }
  return x0;
}

AllocationResult finish(const AllocationProblem& prob, const QpResult& qr) {
  AllocationResult res;
  for (int i = 0; i < 8; ++i)
    res.f(i) = qr.x(i) * prob.load_scale(i / 2);
  Vec3 r = prob.demand.vec() - prob.M_f * res.f;
  r(2) /= prob.moment_scale;
  res.residual = r.norm();
  res.active_set = qr.active_set;
  res.iterations = qr.iterations;
  res.status = qr.status;
  res.kkt_stationarity = qr.stationarity;
  res.kkt_primal = qr.primal_feasibility;
  res.kkt_dual = qr.dual_feasibility;
  res.kkt_complementarity = qr.complementarity;
  return res;
}

}  // namespace

AllocationResult solve_active_set(const AllocationProblem& prob) {
  for (const auto& env : prob.envelopes)
    if (env.kind == EnvelopeKind::Circle)
      throw ModelError("solve_active_set: circle envelopes require the SQP path");

  std::array<std::vector<Halfspace>, 4> no_cuts;
  const QpProblem qp = assemble_qp(prob, no_cuts);
  return finish(prob, solve_qp(qp, scaled_start(prob)));
}

AllocationResult solve_sqp_circle(const AllocationProblem& prob) {
  std::array<std::vector<Halfspace>, 4> cuts;
  AllocationResult res;
  Vec8 f_last = Vec8::Zero();

  for (int outer = 0; outer < 30; ++outer) {
    const QpProblem qp = assemble_qp(prob, cuts);
    const QpResult qr = solve_qp(qp, scaled_start(prob));
    res = finish(prob, qr);
    res.sqp_iterations = outer + 1;
    if (qr.status != QpStatus::Optimal)
      return res;

    bool cut_added = false;
    for (int w = 0; w < 4; ++w) {
      if (prob.envelopes[w].kind != EnvelopeKind::Circle)
        continue;
      const Vec2 f(res.f(fx_index(w)), res.f(fy_index(w)));
      const double R = prob.envelopes[w].radius;
      if (f.norm() > R + 1e-6) {
        cuts[w].push_back({f.normalized(), R});
        cut_added = true;
      }
    }
    const double step = (res.f - f_last).norm();
    f_last = res.f;
    // All circles satisfied within the 1e-4 N contract, or stationary.
    if (!cut_added || (outer > 0 && step < 1e-6))
      return res;
  }
  res.status = QpStatus::IterationLimit;
  return res;
}

Allocator::Allocator(const VehicleParams& vehicle, const ActuatorParams& act,
                     const TireParams& tire, AllocationWeights weights, AllocMode mode,
                     double period)
    : vehicle_(vehicle), act_(act), tire_(tire), weights_(weights), mode_(mode),
      period_(period) {}

AllocationResult Allocator::allocate(const ForceDemand& demand,
                                     const std::array<double, 4>& delta,
                                     const std::array<double, 4>& f_z_hat,
                                     const std::array<ForceEnvelope, 4>& envelopes) {
  const AllocationProblem prob = build_problem(demand, delta, f_z_hat, f_prev_, envelopes,
                                               weights_, mode_, vehicle_, act_, tire_, period_);
  bool circle = false;
  for (const auto& env : envelopes)
    circle = circle || env.kind == EnvelopeKind::Circle;

  AllocationResult res = circle ? solve_sqp_circle(prob) : solve_active_set(prob);
  if (res.status != QpStatus::Optimal) {
    res.fallback = true;
    res.f = f_prev_;
  }
  f_prev_ = res.f;
  return res;
}

}  // namespace tfa
