#include "cmm/flowmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmm/init_fields.hpp"
#include "cmm/parallel.hpp"

namespace cmm {

HermiteMap::HermiteMap(HermiteField d1, HermiteField d2) : d1_(std::move(d1)), d2_(std::move(d2)) {
  if (!(d1_.grid() == d2_.grid())) throw Error("map components must share one grid");
}

HermiteMap HermiteMap::identity(const PeriodicGrid& grid) {
  return HermiteMap(HermiteField(grid), HermiteField(grid));
}

Mat2 HermiteMap::gradient(Vec2 x) const {
  const HermiteStencil s(grid(), x);
  const Vec2 g1 = s.apply_gradient(d1_);
  const Vec2 g2 = s.apply_gradient(d2_);
  return {1.0 + g1.x, g1.y, g2.x, 1.0 + g2.y};
}

bool HermiteMap::is_identity() const {
  auto zero = [](const HermiteField& f) {
    return std::all_of(f.jets().begin(), f.jets().end(), [](const Jet& j) { return j == Jet{}; });
  };
  return zero(d1_) && zero(d2_);
}

MapStack::MapStack(const PeriodicGrid& grid, double t0)
    : active_(HermiteMap::identity(grid)), active_start_(t0) {}

void MapStack::finalize_active(double t) {
  if (!(t > active_start_)) throw Error("submap interval must have positive length");
  finalized_.push_back(SubMap{std::move(active_), active_start_, t});
  active_ = HermiteMap::identity(finalized_.back().map.grid());
  active_start_ = t;
  ++remap_count_;
}

MapStack MapStack::restore(std::vector<SubMap> finalized, HermiteMap active, double active_start,
                           int remap_count) {
  double expected = finalized.empty() ? active_start : finalized.front().t_begin;
  for (const auto& s : finalized) {
    if (s.t_begin != expected || !(s.t_end > s.t_begin)) throw Error("submap intervals do not abut");
    expected = s.t_end;
  }
  if (!finalized.empty() && expected != active_start) throw Error("active map does not abut the last submap");
  MapStack stack(active.grid(), active_start);
  stack.finalized_ = std::move(finalized);
  stack.active_ = std::move(active);
  stack.remap_count_ = remap_count;
  return stack;
}

RKTableau RKTableau::euler() { return {"euler", {{0.0}}, {1.0}, {0.0}}; }

RKTableau RKTableau::midpoint() {
  return {"rk2", {{0.0, 0.0}, {0.5, 0.0}}, {0.0, 1.0}, {0.0, 0.5}};
}

RKTableau RKTableau::kutta3() {
  return {"rk3",
          {{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {-1.0, 2.0, 0.0}},
          {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
          {0.0, 0.5, 1.0}};
}

RKTableau RKTableau::ssprk3() {
  return {"ssprk3",
          {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.25, 0.25, 0.0}},
          {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
          {0.0, 1.0, 0.5}};
}

RKTableau RKTableau::heun3() {
  return {"heun3",
          {{0.0, 0.0, 0.0}, {1.0 / 3.0, 0.0, 0.0}, {0.0, 2.0 / 3.0, 0.0}},
          {0.25, 0.0, 0.75},
          {0.0, 1.0 / 3.0, 2.0 / 3.0}};
}

RKTableau RKTableau::rk4() {
  return {"rk4",
          {{0.0, 0.0, 0.0, 0.0}, {0.5, 0.0, 0.0, 0.0}, {0.0, 0.5, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}},
          {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
          {0.0, 0.5, 0.5, 1.0}};
}

RKTableau RKTableau::by_name(const std::string& name) {
  if (name == "euler" || name == "rk1") return euler();
  if (name == "rk2" || name == "midpoint") return midpoint();
  if (name == "rk3" || name == "kutta3") return kutta3();
  if (name == "ssprk3") return ssprk3();
  if (name == "heun3") return heun3();
  if (name == "rk4") return rk4();
  throw Error("unknown Runge-Kutta tableau '" + name + "'");
}

void RKTableau::validate() const {
  const std::size_t s = b.size();
  if (s == 0 || s > 8) throw Error("tableau must have between 1 and 8 stages");
  if (a.size() != s || c.size() != s) throw Error("tableau arrays have inconsistent sizes");
  double bsum = 0.0;
  for (double v : b) bsum += v;
  if (std::abs(bsum - 1.0) > 1e-14) throw Error("tableau weights b must sum to 1");
  for (std::size_t j = 0; j < s; ++j) {
    if (a[j].size() != s) throw Error("tableau matrix a must be square");
    double row = 0.0;
    for (std::size_t m = 0; m < s; ++m) {
      if (m >= j && a[j][m] != 0.0) throw Error("tableau matrix a must be strictly lower triangular");
      row += a[j][m];
    }
    if (std::abs(row - c[j]) > 1e-14) throw Error("tableau row sums must equal c");
  }
}

Vec2 one_step_foot(const VelocityStack& stack, Vec2 x, double t_next, double dt,
                   const RKTableau& tab) {
  auto u = [&](int j, Vec2 p) { return velocity_at(stack, p, t_next - tab.c[static_cast<std::size_t>(j)] * dt); };
  return trace_foot(u, x, dt, tab);
}

namespace {

// Node jets of a smooth vector function from fourth-order central differences:
// first derivatives from the 4-point axis stencil, the mixed derivative from the
// Richardson combination of diagonal stencils at spacings eps and 2 eps.
template <class Fn>
void difference_jets(Fn&& fn, Vec2 x, double eps, Jet& j1, Jet& j2) {
  const Vec2 c = fn(x);
  const Vec2 xp1 = fn({x.x + eps, x.y}), xm1 = fn({x.x - eps, x.y});
  const Vec2 xp2 = fn({x.x + 2 * eps, x.y}), xm2 = fn({x.x - 2 * eps, x.y});
  const Vec2 yp1 = fn({x.x, x.y + eps}), ym1 = fn({x.x, x.y - eps});
  const Vec2 yp2 = fn({x.x, x.y + 2 * eps}), ym2 = fn({x.x, x.y - 2 * eps});
  const Vec2 pp1 = fn({x.x + eps, x.y + eps}), pm1 = fn({x.x + eps, x.y - eps});
  const Vec2 mp1 = fn({x.x - eps, x.y + eps}), mm1 = fn({x.x - eps, x.y - eps});
  const Vec2 pp2 = fn({x.x + 2 * eps, x.y + 2 * eps}), pm2 = fn({x.x + 2 * eps, x.y - 2 * eps});
  const Vec2 mp2 = fn({x.x - 2 * eps, x.y + 2 * eps}), mm2 = fn({x.x - 2 * eps, x.y - 2 * eps});

  const double inv12 = 1.0 / (12.0 * eps);
  const Vec2 dx = inv12 * (8.0 * (xp1 - xm1) - (xp2 - xm2));
  const Vec2 dy = inv12 * (8.0 * (yp1 - ym1) - (yp2 - ym2));
  const Vec2 cross1 = (1.0 / (4.0 * eps * eps)) * ((pp1 - pm1) - (mp1 - mm1));
  const Vec2 cross2 = (1.0 / (16.0 * eps * eps)) * ((pp2 - pm2) - (mp2 - mm2));
  const Vec2 dxy = (1.0 / 3.0) * (4.0 * cross1 - cross2);

  j1 = {c.x, dx.x, dy.x, dxy.x};
  j2 = {c.y, dx.y, dy.y, dxy.y};
}

template <class StageVelocity>
HermiteMap advance_impl(const HermiteMap& active, StageVelocity&& u, double dt,
                        const RKTableau& tab, double eps_fd) {
  if (!(eps_fd > 0.0)) throw Error("jet-difference spacing must be positive");
  if (!(dt > 0.0)) throw Error("time step must be positive");
  const PeriodicGrid& grid = active.grid();
  const int n = grid.n();
  std::vector<Jet> d1(grid.size()), d2(grid.size());

  auto composed = [&](Vec2 x) {
    const Vec2 step = trace_displacement(u, x, dt, tab);
    return step + active.displacement(x + step);
  };

  parallel_for(n, [&](int j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = grid.index(i, j);
      difference_jets(composed, grid.node(i, j), eps_fd, d1[k], d2[k]);
    }
  });
  return HermiteMap(HermiteField(grid, std::move(d1)), HermiteField(grid, std::move(d2)));
}

}  // namespace

HermiteMap advance_map(const HermiteMap& active, const VelocityStack& stack, double t_next,
                       double dt, const RKTableau& tab, double eps_fd) {
  if (stack.empty()) throw Error("velocity stack is empty");
  std::vector<VelocityField> stages;
  stages.reserve(static_cast<std::size_t>(tab.stages()));
  for (int j = 0; j < tab.stages(); ++j) {
    stages.push_back(stack.extended(t_next - tab.c[static_cast<std::size_t>(j)] * dt));
  }
  auto u = [&](int j, Vec2 p) { return stages[static_cast<std::size_t>(j)](p); };
  return advance_impl(active, u, dt, tab, eps_fd);
}

HermiteMap advance_map(const HermiteMap& active, const StageVelocityFn& stage_velocity, double dt,
                       const RKTableau& tab, double eps_fd) {
  return advance_impl(active, stage_velocity, dt, tab, eps_fd);
}

std::vector<Vec2> cell_centers(const PeriodicGrid& grid) {
  const int n = grid.n();
  const double h = grid.spacing();
  std::vector<Vec2> pts;
  pts.reserve(grid.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) pts.push_back({(i + 0.5) * h, (j + 0.5) * h});
  }
  return pts;
}

double jacobian_det_error(const HermiteMap& map, std::span<const Vec2> points) {
  if (points.empty()) throw Error("no sample points for the det error");
  double worst = 0.0;
  for (const Vec2& p : points) worst = std::max(worst, std::abs(map.gradient(p).det() - 1.0));
  return worst;
}

double jacobian_det_error(const HermiteMap& map) {
  const auto pts = cell_centers(map.grid());
  return jacobian_det_error(map, pts);
}

bool maybe_remap(MapStack& stack, double delta_det, double t, double det_error) {
  if (!(delta_det > 0.0)) throw Error("remap threshold must be positive");
  if (!(det_error > delta_det)) return false;
  stack.finalize_active(t);
  return true;
}

bool maybe_remap(MapStack& stack, double delta_det, double t) {
  if (!(delta_det > 0.0)) throw Error("remap threshold must be positive");
  return maybe_remap(stack, delta_det, t, jacobian_det_error(stack.active()));
}

Vec2 global_map_eval(const MapStack& stack, Vec2 x) {
  Vec2 y = stack.active()(x);
  const auto& subs = stack.finalized();
  for (auto it = subs.rbegin(); it != subs.rend(); ++it) y = it->map(y);
  return y;
}

double vorticity_eval(const MapStack& stack, const InitialVorticity& omega0, Vec2 x) {
  return omega0(global_map_eval(stack, x));
}

Vec2 periodic_difference(Vec2 a, Vec2 b, double length) {
  auto reduce = [length](double d) { return d - length * std::floor(d / length + 0.5); };
  return {reduce(a.x - b.x), reduce(a.y - b.y)};
}

}  // namespace cmm
