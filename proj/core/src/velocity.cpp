#include "cmm/velocity.hpp"

namespace cmm {

double VelocityField::divergence(Vec2 x) const {
  const HermiteStencil s(psi_.grid(), x);
  // d/dx (dpsi/dy) - d/dy (dpsi/dx)
  return s.apply(psi_, {1, 1}) - s.apply(psi_, {1, 1});
}

std::vector<double> lagrange_weights(const std::vector<double>& times, double t) {
  const std::size_t q = times.size();
  std::vector<double> w(q, 1.0);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      if (j == i) continue;
      w[i] *= (t - times[j]) / (times[i] - times[j]);
    }
  }
  return w;
}

VelocityStack::VelocityStack(int depth) : depth_(depth) {
  if (depth < 1) throw Error("velocity stack depth must be at least 1");
}

void VelocityStack::push(std::shared_ptr<const VelocityField> field) {
  if (!field) throw Error("null velocity field");
  if (!fields_.empty() && !(field->time() > fields_.back()->time())) {
    throw Error("velocity timestamps must be strictly increasing");
  }
  fields_.push_back(std::move(field));
  while (static_cast<int>(fields_.size()) > depth_) fields_.pop_front();
}

const VelocityField& VelocityStack::newest() const {
  if (fields_.empty()) throw Error("velocity stack is empty");
  return *fields_.back();
}

std::vector<double> VelocityStack::times() const {
  std::vector<double> t;
  t.reserve(fields_.size());
  for (const auto& f : fields_) t.push_back(f->time());
  return t;
}

VelocityField VelocityStack::extended(double t) const {
  if (fields_.empty()) throw Error("velocity stack is empty");
  if (fields_.size() == 1) return VelocityField(fields_.front()->psi(), t, fields_.front()->mollifier());
  const auto w = lagrange_weights(times(), t);
  const PeriodicGrid& grid = fields_.front()->psi().grid();
  std::vector<Jet> jets(grid.size());
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    if (!(fields_[k]->psi().grid() == grid)) throw Error("velocity fields live on different grids");
    const auto src = fields_[k]->psi().jets();
    const double c = w[k];
    for (std::size_t m = 0; m < jets.size(); ++m) {
      jets[m].f += c * src[m].f;
      jets[m].fx += c * src[m].fx;
      jets[m].fy += c * src[m].fy;
      jets[m].fxy += c * src[m].fxy;
    }
  }
  return VelocityField(HermiteField(grid, std::move(jets)), t, fields_.back()->mollifier());
}

Vec2 velocity_at(const VelocityStack& stack, Vec2 x, double t) {
  if (stack.empty()) throw Error("velocity stack is empty");
  const auto& fields = stack.fields();
  if (fields.size() == 1) return (*fields.front())(x);
  const auto w = lagrange_weights(stack.times(), t);
  Vec2 u;
  for (std::size_t k = 0; k < fields.size(); ++k) u = u + w[k] * (*fields[k])(x);
  return u;
}

}  // namespace cmm
