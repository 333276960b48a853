#include "tfa/outputs.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tfa {

namespace {

const char* const kWheelColumns[] = {"kappa", "alpha", "delta", "T",
                                     "f_x",   "f_y",   "f_z_true", "f_z_est"};

void append_fields(std::vector<double*>& out, LogRow& row) {
  out = {&row.t, &row.X, &row.Y, &row.v_x, &row.v_y, &row.omega_r, &row.e_y, &row.e_omega_r};
  for (int w = 0; w < 4; ++w) {
    out.push_back(&row.kappa[w]);
    out.push_back(&row.alpha[w]);
    out.push_back(&row.delta[w]);
    out.push_back(&row.T[w]);
    out.push_back(&row.f_x[w]);
    out.push_back(&row.f_y[w]);
    out.push_back(&row.f_z_true[w]);
    out.push_back(&row.f_z_est[w]);
  }
  out.push_back(&row.dem_fx);
  out.push_back(&row.dem_fy);
  out.push_back(&row.dem_mz);
  for (int i = 0; i < 8; ++i)
    out.push_back(&row.alloc[i]);
}

constexpr int kColumns = 8 + 32 + 3 + 8 + 1;

}  // namespace

std::string csv_header() {
  std::ostringstream os;
  os << "t,X,Y,v_x,v_y,omega_r,e_y,e_omega_r";
  for (int w = 0; w < 4; ++w)
    for (const char* col : kWheelColumns)
      os << "," << col << "_" << kWheelNames[w];
  os << ",dem_fx,dem_fy,dem_mz";
  for (int w = 0; w < 4; ++w)
    os << ",alloc_fx_" << kWheelNames[w] << ",alloc_fy_" << kWheelNames[w];
  os << ",active_set_size";
  return os.str();
}

void write_csv(const RunResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ModelError("write_csv: cannot open " + path);
  out << csv_header() << "\n";
  char buf[32];
  for (const auto& row : result.series) {
    LogRow copy = row;
    std::vector<double*> fields;
    append_fields(fields, copy);
    std::string line;
    line.reserve(kColumns * 16);
    for (size_t i = 0; i < fields.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", *fields[i]);
      if (i > 0)
        line += ',';
      line += buf;
    }
    line += ',';
    line += std::to_string(row.active_set_size);
    line += '\n';
    out << line;
  }
}

std::vector<LogRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ModelError("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ModelError("read_csv: empty file " + path);
  if (line != csv_header())
    throw ModelError("read_csv: header does not match the documented schema");

  std::vector<LogRow> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    LogRow row;
    std::vector<double*> fields;
    append_fields(fields, row);
    const char* p = line.c_str();
    char* end = nullptr;
    for (size_t i = 0; i < fields.size(); ++i) {
      *fields[i] = std::strtod(p, &end);
      if (end == p || *end != ',')
        throw ModelError("read_csv: malformed row");
      p = end + 1;
    }
    row.active_set_size = static_cast<int>(std::strtol(p, &end, 10));
    rows.push_back(row);
  }
  return rows;
}

void write_metrics_json(const RunResult& result, const std::string& path) {
  nlohmann::json j;
  j["scenario"] = {{"name", to_string(result.scenario.scenario)},
                   {"speed", result.scenario.speed},
                   {"duration", result.scenario.duration},
                   {"mu", result.scenario.mu},
                   {"window_start", result.metrics.window_start},
                   {"window_end", result.metrics.window_end}};
  j["ablation"] = {{"load_estimator", to_string(result.ablation.load_estimator)},
                   {"allocation_mode", to_string(result.ablation.allocation_mode)},
                   {"constraint", to_string(result.ablation.constraint)},
                   {"actuator_dynamics", result.ablation.actuator_dynamics},
                   {"rate_limits", result.ablation.rate_limits},
                   {"bump_compensation", result.ablation.bump_compensation}};
  const RunMetrics& m = result.metrics;
  j["metrics"] = {{"max_lateral_error", m.max_lateral_error},
                  {"mean_lateral_error", m.mean_lateral_error},
                  {"yaw_settling_time", m.yaw_settling_time},
                  {"load_estimation_error_pct", m.load_estimation_error_pct},
                  {"mean_lat_force_error",
                   {m.mean_lat_force_error[0], m.mean_lat_force_error[1],
                    m.mean_lat_force_error[2], m.mean_lat_force_error[3]}},
                  {"mean_lat_force_error_avg", m.mean_lat_force_error_avg},
                  {"final_time", m.final_time},
                  {"diverged", m.diverged},
                  {"failure", m.failure}};
  j["solver"] = {{"solves", m.solver.solves},
                 {"failures", m.solver.failures},
                 {"rate_saturations", m.solver.rate_saturations},
                 {"magnitude_saturations", m.solver.magnitude_saturations},
                 {"mean_iterations", m.solver.mean_iterations},
                 {"max_iterations", m.solver.max_iterations},
                 {"max_kkt_stationarity", m.solver.max_kkt_stationarity},
                 {"max_kkt_primal", m.solver.max_kkt_primal},
                 {"max_kkt_dual", m.solver.max_kkt_dual},
                 {"max_kkt_complementarity", m.solver.max_kkt_complementarity},
                 {"mean_solve_us", m.solver.mean_solve_us}};

  std::ofstream out(path);
  if (!out)
    throw ModelError("write_metrics_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

void write_allocation_diagnostics(const RunResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ModelError("write_allocation_diagnostics: cannot open " + path);
  out << "t,dem_fx,dem_fy,dem_mz";
  for (int w = 0; w < 4; ++w)
    out << ",alloc_fx_" << kWheelNames[w] << ",alloc_fy_" << kWheelNames[w];
  out << ",qp_iterations,fallback\n";
  char buf[32];
  for (const auto& tick : result.ticks) {
    std::string line;
    auto add = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.12g", v);
      if (!line.empty())
        line += ',';
      line += buf;
    };
    add(tick.t);
    add(tick.demand.F_x);
    add(tick.demand.F_y);
    add(tick.demand.M_z);
    for (int i = 0; i < 8; ++i)
      add(tick.f_alloc(i));
    line += ',' + std::to_string(tick.qp_iterations);
    line += tick.fallback ? ",1\n" : ",0\n";
    out << line;
  }
}

void write_envelope_svgs(const RunResult& result, const std::string& dir, int every_n_ticks) {
  if (every_n_ticks <= 0)
    return;
  for (size_t k = 0; k < result.ticks.size(); k += every_n_ticks) {
    const TickDiag& d = result.ticks[k];
    for (int w = 0; w < 4; ++w) {
      const double scale = std::max(1000.0, 1.3 * d.f_z_true[w]);
      char name[128];
      std::snprintf(name, sizeof(name), "%s/env_t%07.3f_%s.svg", dir.c_str(), d.t,
                    kWheelNames[w]);
      write_envelope_svg(
          name,
          {{d.polygons[w], "green"}, {d.envelopes[w], "blue"}},
          {{Vec2(d.f_alloc(fx_index(w)), d.f_alloc(fy_index(w))), "red"},
           {Vec2(d.f_realized(fx_index(w)), d.f_realized(fy_index(w))), "black"}},
          scale);
    }
  }
}

}  // namespace tfa
