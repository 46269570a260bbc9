#pragma once

#include <string>
#include <vector>

#include "cmm/config.hpp"

namespace cmm {

enum class Refinement { time_step, grid };

Refinement parse_refinement(const std::string& mode);

struct ConvergenceLevel {
  double resolution;  // dt or map grid spacing
  double map_error;        // sup |chi - chi_ref|
  double vorticity_error;  // sup |omega - omega_ref|
  double enstrophy_error;  // |enstrophy(t_end) - enstrophy(0)|
  double energy_error;     // |energy(t_end) - energy(0)|
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  // Least-squares slopes of log error against log resolution; NaN when fewer than
  // two levels have a nonzero error.
  double map_order;
  double vorticity_order;
  double enstrophy_order;
  double energy_order;
};

/// Runs `levels` halvings of dt (or of the map spacing) starting at the config's
/// value, without remapping, and compares each against a reference one halving
/// finer than the finest level. Errors are sup norms on the n_eval grid.
ConvergenceReport self_convergence(const SimConfig& cfg, Refinement mode, int levels);

/// Least-squares slope of log y against log x over entries with y > 0.
double log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cmm
