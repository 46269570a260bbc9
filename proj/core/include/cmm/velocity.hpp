#pragma once

#include <deque>
#include <memory>
#include <vector>

#include "cmm/grid.hpp"

namespace cmm {

/// Divergence-free velocity u = (d psi/dy, -d psi/dx) of a Hermite stream function.
class VelocityField {
 public:
  VelocityField(HermiteField psi, double time, double mollifier = 0.0)
      : psi_(std::move(psi)), time_(time), mollifier_(mollifier) {}

  const HermiteField& psi() const { return psi_; }
  double time() const { return time_; }
  double mollifier() const { return mollifier_; }

  Vec2 operator()(Vec2 x) const { return at(HermiteStencil(psi_.grid(), x)); }
  Vec2 at(const HermiteStencil& stencil) const {
    const Vec2 g = stencil.apply_gradient(psi_);
    return {g.y, -g.x};
  }

  /// d(u1)/dx + d(u2)/dy, evaluated as the difference of the two mixed-partial terms.
  double divergence(Vec2 x) const;

 private:
  HermiteField psi_;
  double time_;
  double mollifier_;
};

/// Lagrange basis polynomials l_i(t) over the nodes `times`.
std::vector<double> lagrange_weights(const std::vector<double>& times, double t);

/// The most recent velocity fields, oldest first, with strictly increasing timestamps.
class VelocityStack {
 public:
  explicit VelocityStack(int depth);

  int depth() const { return depth_; }
  int size() const { return static_cast<int>(fields_.size()); }
  bool empty() const { return fields_.empty(); }

  /// Appends a field, evicting the oldest once more than depth() are held.
  void push(std::shared_ptr<const VelocityField> field);

  const VelocityField& newest() const;
  const VelocityField& operator[](int k) const { return *fields_[static_cast<std::size_t>(k)]; }
  const std::deque<std::shared_ptr<const VelocityField>>& fields() const { return fields_; }

  std::vector<double> times() const;

  /// Stream function of the time-extended velocity at t: sum_i l_i(t) psi_i.
  /// Requires all stored fields to share one grid.
  VelocityField extended(double t) const;

 private:
  int depth_;
  std::deque<std::shared_ptr<const VelocityField>> fields_;
};

/// Lagrange-in-time extension sum_i l_i(t) u_i(x) over the stored fields.
Vec2 velocity_at(const VelocityStack& stack, Vec2 x, double t);

}  // namespace cmm
