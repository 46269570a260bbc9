#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmm {

/// Error raised for contract violations and invalid inputs throughout the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

/// 2x2 matrix, row-major: [[xx, xy], [yx, yy]].
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  double det() const { return xx * yy - xy * yx; }
};

/// Value plus first and mixed derivatives at a point: (f, df/dx, df/dy, d2f/dxdy).
struct Jet {
  double f = 0.0;
  double fx = 0.0;
  double fy = 0.0;
  double fxy = 0.0;

  friend bool operator==(const Jet&, const Jet&) = default;
};

/// Partial derivative multi-index (cx, cy), each in {0, 1}.
struct Deriv {
  int cx = 0;
  int cy = 0;
};

/// Uniform square grid on the flat torus [0, L)^2 with n nodes per side.
class PeriodicGrid {
 public:
  PeriodicGrid(int n, double length);

  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

  int wrap_index(int i) const {
    int r = i % n_;
    return r < 0 ? r + n_ : r;
  }

  /// Row-major storage index: row = y index j, column = x index i.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(wrap_index(j)) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(wrap_index(i));
  }

  Vec2 node(int i, int j) const { return {wrap_index(i) * spacing_, wrap_index(j) * spacing_}; }

  /// Maps x into [0, L).
  double wrap(double x) const {
    double w = x - length_ * std::floor(x / length_);
    return w >= length_ ? 0.0 : w;
  }
  Vec2 wrap(Vec2 p) const { return {wrap(p.x), wrap(p.y)}; }

  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int n_;
  double length_;
  double spacing_;
};

/// Periodic scalar field stored as Hermite jets at grid nodes. Derivative entries are
/// in natural units (per unit length); the interpolant is the bicubic Hermite spline.
class HermiteField {
 public:
  explicit HermiteField(PeriodicGrid grid);
  HermiteField(PeriodicGrid grid, std::vector<Jet> jets);

  const PeriodicGrid& grid() const { return grid_; }

  const Jet& at(int i, int j) const { return jets_[grid_.index(i, j)]; }
  Jet& at(int i, int j) { return jets_[grid_.index(i, j)]; }

  std::span<const Jet> jets() const { return jets_; }
  std::span<Jet> jets() { return jets_; }

  /// One jet component as a row-major plane: 0 = f, 1 = fx, 2 = fy, 3 = fxy.
  std::vector<double> plane(int component) const;

  bool all_finite() const;

 private:
  PeriodicGrid grid_;
  std::vector<Jet> jets_;
};

/// Cell lookup and 1D Hermite basis weights for one evaluation point. Built once and
/// applied to any number of fields sharing the same grid.
class HermiteStencil {
 public:
  HermiteStencil(const PeriodicGrid& grid, Vec2 p);

  /// Value of the (cx, cy) partial derivative of the interpolant.
  double apply(const HermiteField& field, Deriv d) const;

  /// All four derivative orders at once.
  Jet apply_jet(const HermiteField& field) const;

  /// (d/dx, d/dy) of the interpolant.
  Vec2 apply_gradient(const HermiteField& field) const;

  double apply_value(const HermiteField& field) const { return apply(field, {0, 0}); }

 private:
  // Weights per dimension for the left/right node: value basis, slope basis, and
  // their first derivatives, all in natural units.
  struct Axis {
    double a0, a1, b0, b1;      // Q0, Q0(.-1), dx*Q1, dx*Q1(.-1)
    double da0, da1, db0, db1;  // d/dx of the above
  };
  static Axis axis_weights(double t, double h);

  std::size_t i00_, i10_, i01_, i11_;
  Axis wx_, wy_;
};

/// Evaluates the (cx, cy) partial derivative of the interpolant at any p in R^2.
double hermite_eval(const HermiteField& field, Vec2 p, Deriv d = {0, 0});

/// Evaluates all four derivative orders from a single basis computation.
Jet hermite_eval_jet(const HermiteField& field, Vec2 p);

using JetSampler = std::function<Jet(Vec2)>;

/// Projects a jet sampler onto the Hermite space of `grid` by node sampling.
HermiteField hermite_project(const JetSampler& sampler, const PeriodicGrid& grid);

}  // namespace cmm
