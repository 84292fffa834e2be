#include <exception>

#include "otto/dynamics.hpp"
#include "otto/parallel.hpp"

namespace otto {

std::vector<TauSweepRow> sweep_tau(const EngineParams& params, std::span<const double> tau_grid,
                                   const IntegratorConfig& config, unsigned jobs) {
  if (tau_grid.empty()) {
    throw InvalidParameter("tau grid is empty");
  }
  validate(params);
  std::vector<TauSweepRow> rows(tau_grid.size());
  parallel_for(tau_grid.size(), jobs, [&](std::size_t i) {
    TauSweepRow& row = rows[i];
    row.tau_periods = tau_grid[i];
    try {
      const StrokeDuration tau = tau_grid[i] == 0.0 ? StrokeDuration::sudden() : StrokeDuration::periods(tau_grid[i]);
      row.report = run_finite_time_cycle(params, tau, config);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

std::vector<EtaMapCell> sweep_eta_map(const EngineParams& base, std::span<const double> r_grid,
                                      std::span<const double> q_star_grid) {
  if (r_grid.empty() || q_star_grid.empty()) {
    throw InvalidParameter("eta map grid is empty");
  }
  std::vector<EtaMapCell> cells;
  cells.reserve(r_grid.size() * q_star_grid.size());
  for (double r : r_grid) {
    EngineParams p = base;
    p.r = r;
    for (double q : q_star_grid) {
      cells.push_back({r, q, stroke_energetics({p, q}).efficiency});
    }
  }
  return cells;
}

}  // namespace otto
