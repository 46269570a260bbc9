#include "cmm/grid.hpp"

#include <algorithm>

#include "cmm/parallel.hpp"

namespace cmm {

PeriodicGrid::PeriodicGrid(int n, double length) : n_(n), length_(length), spacing_(length / n) {
  if (n < 4) throw Error("grid needs at least 4 nodes per dimension");
  if (!(length > 0.0) || !std::isfinite(length)) throw Error("grid length must be positive");
}

HermiteField::HermiteField(PeriodicGrid grid) : grid_(grid), jets_(grid.size()) {}

HermiteField::HermiteField(PeriodicGrid grid, std::vector<Jet> jets)
    : grid_(grid), jets_(std::move(jets)) {
  if (jets_.size() != grid_.size()) throw Error("jet count does not match grid size");
}

std::vector<double> HermiteField::plane(int component) const {
  std::vector<double> out(jets_.size());
  for (std::size_t k = 0; k < jets_.size(); ++k) {
    const Jet& j = jets_[k];
    switch (component) {
      case 0: out[k] = j.f; break;
      case 1: out[k] = j.fx; break;
      case 2: out[k] = j.fy; break;
      case 3: out[k] = j.fxy; break;
      default: throw Error("jet component out of range");
    }
  }
  return out;
}

bool HermiteField::all_finite() const {
  return std::all_of(jets_.begin(), jets_.end(), [](const Jet& j) {
    return std::isfinite(j.f) && std::isfinite(j.fx) && std::isfinite(j.fy) && std::isfinite(j.fxy);
  });
}

HermiteStencil::Axis HermiteStencil::axis_weights(double t, double h) {
  const double s = 1.0 - t;
  Axis w;
  w.a0 = (1.0 + 2.0 * t) * s * s;
  w.a1 = (3.0 - 2.0 * t) * t * t;
  w.b0 = t * s * s * h;
  w.b1 = -s * t * t * h;
  const double six_ts = 6.0 * t * s / h;
  w.da0 = -six_ts;
  w.da1 = six_ts;
  w.db0 = s * (1.0 - 3.0 * t);
  w.db1 = t * (3.0 * t - 2.0);
  return w;
}

HermiteStencil::HermiteStencil(const PeriodicGrid& grid, Vec2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("invalid evaluation point");
  const int n = grid.n();
  const double h = grid.spacing();

  // Cells are [i h, (i + 1) h) with node coordinates computed exactly as in node(), so a
  // node always lands at t = 0 of its own cell.
  auto locate = [&](double x, int& cell, double& t) {
    const double w = grid.wrap(x);
    cell = std::min(static_cast<int>(std::floor(w / h)), n - 1);
    if (cell > 0 && cell * h > w) --cell;
    else if (cell + 1 < n && (cell + 1) * h <= w) ++cell;
    t = (w - cell * h) / h;
  };
  int ci = 0, cj = 0;
  double tx = 0.0, ty = 0.0;
  locate(p.x, ci, tx);
  locate(p.y, cj, ty);

  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t row0 = static_cast<std::size_t>(cj) * nn;
  const std::size_t row1 = static_cast<std::size_t>(cj + 1 == n ? 0 : cj + 1) * nn;
  const std::size_t col0 = static_cast<std::size_t>(ci);
  const std::size_t col1 = static_cast<std::size_t>(ci + 1 == n ? 0 : ci + 1);
  i00_ = row0 + col0;
  i10_ = row0 + col1;
  i01_ = row1 + col0;
  i11_ = row1 + col1;
  wx_ = axis_weights(tx, h);
  wy_ = axis_weights(ty, h);
}

namespace {

// Contracts the four corner jets against x-weights (value a*, slope b*) and
// y-weights (value c*, slope d*).
inline double contract(const Jet& j00, const Jet& j10, const Jet& j01, const Jet& j11,
                       double a0, double a1, double b0, double b1,
                       double c0, double c1, double d0, double d1) {
  const double row0 = a0 * (c0 * j00.f + d0 * j00.fy) + b0 * (c0 * j00.fx + d0 * j00.fxy) +
                      a1 * (c0 * j10.f + d0 * j10.fy) + b1 * (c0 * j10.fx + d0 * j10.fxy);
  const double row1 = a0 * (c1 * j01.f + d1 * j01.fy) + b0 * (c1 * j01.fx + d1 * j01.fxy) +
                      a1 * (c1 * j11.f + d1 * j11.fy) + b1 * (c1 * j11.fx + d1 * j11.fxy);
  return row0 + row1;
}

}  // namespace

double HermiteStencil::apply(const HermiteField& field, Deriv d) const {
  const auto jets = field.jets();
  const Jet& j00 = jets[i00_];
  const Jet& j10 = jets[i10_];
  const Jet& j01 = jets[i01_];
  const Jet& j11 = jets[i11_];
  const bool dx = d.cx != 0;
  const bool dy = d.cy != 0;
  return contract(j00, j10, j01, j11,
                  dx ? wx_.da0 : wx_.a0, dx ? wx_.da1 : wx_.a1,
                  dx ? wx_.db0 : wx_.b0, dx ? wx_.db1 : wx_.b1,
                  dy ? wy_.da0 : wy_.a0, dy ? wy_.da1 : wy_.a1,
                  dy ? wy_.db0 : wy_.b0, dy ? wy_.db1 : wy_.b1);
}

Jet HermiteStencil::apply_jet(const HermiteField& field) const {
  return {apply(field, {0, 0}), apply(field, {1, 0}), apply(field, {0, 1}), apply(field, {1, 1})};
}

Vec2 HermiteStencil::apply_gradient(const HermiteField& field) const {
  return {apply(field, {1, 0}), apply(field, {0, 1})};
}

double hermite_eval(const HermiteField& field, Vec2 p, Deriv d) {
  return HermiteStencil(field.grid(), p).apply(field, d);
}

Jet hermite_eval_jet(const HermiteField& field, Vec2 p) {
  return HermiteStencil(field.grid(), p).apply_jet(field);
}

HermiteField hermite_project(const JetSampler& sampler, const PeriodicGrid& grid) {
  const int n = grid.n();
  std::vector<Jet> jets(grid.size());
  parallel_for(n, [&](int j) {
    for (int i = 0; i < n; ++i) jets[grid.index(i, j)] = sampler(grid.node(i, j));
  });
  return HermiteField(grid, std::move(jets));
}

}  // namespace cmm
