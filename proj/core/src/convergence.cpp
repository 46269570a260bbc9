#include "cmm/convergence.hpp"

#include <cmath>
#include <limits>

#include "cmm/parallel.hpp"
#include "cmm/simulation.hpp"

namespace cmm {

Refinement parse_refinement(const std::string& mode) {
  if (mode == "dt") return Refinement::time_step;
  if (mode == "dx") return Refinement::grid;
  throw Error("refinement mode must be 'dt' or 'dx'");
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) {
    if (!(y[k] > 0.0) || !(x[k] > 0.0)) continue;
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

struct Finished {
  Simulation sim;
  double enstrophy_error;
  double energy_error;
};

Finished finish(SimConfig cfg) {
  cfg.delta_det = std::numeric_limits<double>::infinity();
  Simulation sim(cfg);
  sim.diagnostics();
  sim.advance_to(total_steps(cfg));
  const DiagnosticsRecord r = sim.diagnostics();
  return {std::move(sim), std::abs(r.enstrophy_error), std::abs(r.energy_error)};
}

}  // namespace

ConvergenceReport self_convergence(const SimConfig& base, Refinement mode, int levels) {
  if (levels < 3) throw Error("convergence study needs at least 3 levels");
  auto at_level = [&](int k) {
    SimConfig cfg = base;
    if (mode == Refinement::time_step) {
      cfg.dt = base.dt / std::ldexp(1.0, k);
    } else {
      cfg.n_map = base.n_map << k;
    }
    return cfg;
  };

  const SimConfig ref_cfg = at_level(levels);
  ref_cfg.validate();
  Finished ref = finish(ref_cfg);
  const double length = ref_cfg.domain_length();
  const PeriodicGrid eval(base.n_eval, length);
  const auto& omega0 = ref.sim.omega0();

  std::vector<Vec2> ref_map(eval.size());
  std::vector<double> ref_omega(eval.size());
  parallel_for(eval.n(), [&](int j) {
    for (int i = 0; i < eval.n(); ++i) {
      const Vec2 x = eval.node(i, j);
      ref_map[eval.index(i, j)] = global_map_eval(ref.sim.maps(), x);
      ref_omega[eval.index(i, j)] = vorticity_eval(ref.sim.maps(), omega0, x);
    }
  });

  ConvergenceReport report{};
  for (int k = 0; k < levels; ++k) {
    const SimConfig cfg = at_level(k);
    Finished run = finish(cfg);
    std::vector<double> row_map(static_cast<std::size_t>(eval.n()));
    std::vector<double> row_omega(static_cast<std::size_t>(eval.n()));
    parallel_for(eval.n(), [&](int j) {
      double em = 0.0, ew = 0.0;
      for (int i = 0; i < eval.n(); ++i) {
        const Vec2 x = eval.node(i, j);
        const Vec2 d = periodic_difference(global_map_eval(run.sim.maps(), x), ref_map[eval.index(i, j)], length);
        em = std::max({em, std::abs(d.x), std::abs(d.y)});
        ew = std::max(ew, std::abs(vorticity_eval(run.sim.maps(), omega0, x) - ref_omega[eval.index(i, j)]));
      }
      row_map[static_cast<std::size_t>(j)] = em;
      row_omega[static_cast<std::size_t>(j)] = ew;
    });
    ConvergenceLevel level{};
    level.resolution = mode == Refinement::time_step ? cfg.dt : length / cfg.n_map;
    for (int j = 0; j < eval.n(); ++j) {
      level.map_error = std::max(level.map_error, row_map[static_cast<std::size_t>(j)]);
      level.vorticity_error = std::max(level.vorticity_error, row_omega[static_cast<std::size_t>(j)]);
    }
    level.enstrophy_error = run.enstrophy_error;
    level.energy_error = run.energy_error;
    report.levels.push_back(level);
  }

  std::vector<double> h, em, ew, ee, eu;
  for (const auto& l : report.levels) {
    h.push_back(l.resolution);
    em.push_back(l.map_error);
    ew.push_back(l.vorticity_error);
    ee.push_back(l.enstrophy_error);
    eu.push_back(l.energy_error);
  }
  report.map_order = log_slope(h, em);
  report.vorticity_order = log_slope(h, ew);
  report.enstrophy_order = log_slope(h, ee);
  report.energy_order = log_slope(h, eu);
  return report;
}

}  // namespace cmm
