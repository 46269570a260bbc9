#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cmm/grid.hpp"
#include "cmm/velocity.hpp"

namespace cmm {

class InitialVorticity;

/// Backward map chi(x) = x + d(x); d is periodic and stored as two Hermite fields.
class HermiteMap {
 public:
  HermiteMap(HermiteField d1, HermiteField d2);

  static HermiteMap identity(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const { return d1_.grid(); }
  const HermiteField& d1() const { return d1_; }
  const HermiteField& d2() const { return d2_; }

  Vec2 displacement(Vec2 x) const {
    const HermiteStencil s(grid(), x);
    return {s.apply_value(d1_), s.apply_value(d2_)};
  }

  /// chi(x), not wrapped into the fundamental domain.
  Vec2 operator()(Vec2 x) const { return x + displacement(x); }

  /// I + grad d at x.
  Mat2 gradient(Vec2 x) const;

  bool is_identity() const;

 private:
  HermiteField d1_;
  HermiteField d2_;
};

/// A finalized submap X_[end, begin].
struct SubMap {
  HermiteMap map;
  double t_begin;
  double t_end;
};

/// Finalized submaps covering [0, tau_m] plus the active map on [tau_m, t].
class MapStack {
 public:
  explicit MapStack(const PeriodicGrid& grid, double t0 = 0.0);

  const std::vector<SubMap>& finalized() const { return finalized_; }
  const HermiteMap& active() const { return active_; }
  double active_start() const { return active_start_; }
  int remap_count() const { return remap_count_; }
  const PeriodicGrid& grid() const { return active_.grid(); }

  void set_active(HermiteMap map) { active_ = std::move(map); }

  /// Moves the active map into the finalized list with interval [active_start, t]
  /// and restarts from the identity at t.
  void finalize_active(double t);

  /// Rebuilds a stack from saved parts.
  static MapStack restore(std::vector<SubMap> finalized, HermiteMap active, double active_start,
                          int remap_count);

 private:
  std::vector<SubMap> finalized_;
  HermiteMap active_;
  double active_start_;
  int remap_count_ = 0;
};

/// Explicit Butcher tableau.
struct RKTableau {
  std::string name;
  std::vector<std::vector<double>> a;  // strictly lower triangular, s x s
  std::vector<double> b;
  std::vector<double> c;

  int stages() const { return static_cast<int>(b.size()); }

  static RKTableau euler();
  static RKTableau midpoint();
  /// Classical Kutta third-order method, c = (0, 1/2, 1).
  static RKTableau kutta3();
  /// Strong-stability-preserving third-order method, c = (0, 1, 1/2).
  static RKTableau ssprk3();
  /// Heun's third-order method, c = (0, 1/3, 2/3).
  static RKTableau heun3();
  static RKTableau rk4();
  /// Looks up "euler", "rk2", "rk3", "ssprk3", "heun3" or "rk4".
  static RKTableau by_name(const std::string& name);

  /// Checks sum(b) = 1, row sums equal c, and strict lower-triangularity.
  void validate() const;
};

/// Displacement of one backward step: -dt * sum_j b_j k_j with stage velocities
/// k_j = u(stage j, x - dt * sum_m a_jm k_m). `stage_velocity(j, p)` returns the
/// velocity used for stage j, whose time is t_next - c_j dt.
template <class StageVelocity>
Vec2 trace_displacement(StageVelocity&& stage_velocity, Vec2 x, double dt, const RKTableau& tab) {
  const int s = tab.stages();
  Vec2 k[8];
  Vec2 sum;
  for (int j = 0; j < s; ++j) {
    Vec2 offset;
    for (int m = 0; m < j; ++m) offset = offset + tab.a[j][m] * k[m];
    k[j] = stage_velocity(j, x - dt * offset);
    sum = sum + tab.b[j] * k[j];
  }
  return -dt * sum;
}

template <class StageVelocity>
Vec2 trace_foot(StageVelocity&& stage_velocity, Vec2 x, double dt, const RKTableau& tab) {
  return x + trace_displacement(stage_velocity, x, dt, tab);
}

using StageVelocityFn = std::function<Vec2(int stage, Vec2 x)>;

/// Foot point of the one-step backward map chi_[t_next, t_next - dt](x), using the
/// Lagrange-extended velocity of `stack`.
Vec2 one_step_foot(const VelocityStack& stack, Vec2 x, double t_next, double dt,
                   const RKTableau& tab);

/// One evolve-project step: node jets of d_step(x) + d_old(x + d_step(x)) from
/// fourth-order central eps_fd-differences, projected onto the map grid.
HermiteMap advance_map(const HermiteMap& active, const VelocityStack& stack, double t_next,
                       double dt, const RKTableau& tab, double eps_fd);

/// Same update with an arbitrary stage velocity, e.g. an analytic test flow.
HermiteMap advance_map(const HermiteMap& active, const StageVelocityFn& stage_velocity, double dt,
                       const RKTableau& tab, double eps_fd);

/// Cell centers of the map grid, the default monitoring points for det errors.
std::vector<Vec2> cell_centers(const PeriodicGrid& grid);

/// max |det grad chi - 1| over the given points.
double jacobian_det_error(const HermiteMap& map, std::span<const Vec2> points);
double jacobian_det_error(const HermiteMap& map);

/// Finalizes the active map when its det error exceeds delta_det; returns whether it did.
bool maybe_remap(MapStack& stack, double delta_det, double t);
/// Same, reusing an already computed det error for the active map.
bool maybe_remap(MapStack& stack, double delta_det, double t, double det_error);

/// X_[t,0](x): the active map first, then finalized submaps from latest to earliest.
Vec2 global_map_eval(const MapStack& stack, Vec2 x);

/// omega0(X_[t,0](x)).
double vorticity_eval(const MapStack& stack, const InitialVorticity& omega0, Vec2 x);

/// Signed difference a - b reduced into [-L/2, L/2) per component.
Vec2 periodic_difference(Vec2 a, Vec2 b, double length);

}  // namespace cmm
