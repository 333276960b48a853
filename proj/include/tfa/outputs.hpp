#ifndef TFA_OUTPUTS_HPP
#define TFA_OUTPUTS_HPP

#include <string>
#include <vector>

#include "tfa/harness.hpp"

namespace tfa {

// Fixed CSV column order: t, X, Y, v_x, v_y, omega_r, e_y, e_omega_r, then
// per wheel (fl fr rl rr) kappa/alpha/delta/T/f_x/f_y/f_z_true/f_z_est,
// demand (3), allocation (8), active_set_size.
std::string csv_header();
void write_csv(const RunResult& result, const std::string& path);
std::vector<LogRow> read_csv(const std::string& path);

void write_metrics_json(const RunResult& result, const std::string& path);

// Per-wheel envelope snapshots for the requested control ticks.
void write_envelope_svgs(const RunResult& result, const std::string& dir, int every_n_ticks);

// Per-control-tick allocator record: demand, solution, iterations, solver
// residuals. Requires tick diagnostics to be kept on the run.
void write_allocation_diagnostics(const RunResult& result, const std::string& path);

}  // namespace tfa

#endif
