#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "cmm/velocity.hpp"

using namespace cmm;

namespace {

// Jets (0, 0, c, 0) everywhere. Along node rows y = j h the interpolant has psi_y = c
// and psi_x = 0 exactly, so u = (c, 0) there; off those rows it is not uniform.
std::shared_ptr<const VelocityField> uniform(double c, double t) {
  HermiteField psi(PeriodicGrid(8, 1.0));
  for (Jet& j : psi.jets()) j.fy = c;
  return std::make_shared<const VelocityField>(std::move(psi), t);
}

std::shared_ptr<const VelocityField> wave(double amp, double t) {
  const double k = 2 * M_PI;
  return std::make_shared<const VelocityField>(
      hermite_project(
          [=](Vec2 p) {
            return Jet{amp * std::sin(k * p.x) * std::sin(k * p.y), amp * k * std::cos(k * p.x) * std::sin(k * p.y),
                       amp * k * std::sin(k * p.x) * std::cos(k * p.y),
                       amp * k * k * std::cos(k * p.x) * std::cos(k * p.y)};
          },
          PeriodicGrid(16, 1.0)),
      t);
}

}  // namespace

TEST(VelocityStack, SingleFieldIsConstantExtrapolation) {
  VelocityStack s(1);
  s.push(uniform(2.0, 0.0));
  EXPECT_EQ(velocity_at(s, {0.2, 0.25}, 5.0), (Vec2{2.0, 0.0}));
}

TEST(VelocityStack, IdenticalFieldsGiveTheSameField) {
  VelocityStack s(2);
  s.push(wave(1.0, 0.0));
  s.push(wave(1.0, 1.0));
  const Vec2 p{0.13, 0.71};
  const Vec2 direct = s.newest()(p);
  for (double t : {-1.0, 0.5, 3.0}) {
    const Vec2 v = velocity_at(s, p, t);
    EXPECT_NEAR(v.x, direct.x, 1e-13);
    EXPECT_NEAR(v.y, direct.y, 1e-13);
  }
}

TEST(VelocityStack, QuadraticExtrapolation) {
  VelocityStack s(3);
  s.push(uniform(0.0, 0.0));
  s.push(uniform(1.0, 1.0));
  s.push(uniform(4.0, 2.0));
  const Vec2 v = velocity_at(s, {0.4, 0.5}, 2.5);
  EXPECT_NEAR(v.x, 6.25, 1e-13);
  EXPECT_NEAR(v.y, 0.0, 1e-13);
  const VelocityField e = s.extended(2.5);
  EXPECT_NEAR(e({0.4, 0.5}).x, 6.25, 1e-13);
}

TEST(VelocityStack, EvictsOldest) {
  VelocityStack s(2);
  s.push(uniform(0.0, 0.0));
  s.push(uniform(1.0, 1.0));
  s.push(uniform(2.0, 2.0));
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.times(), (std::vector<double>{1.0, 2.0}));
  EXPECT_THROW(s.push(uniform(3.0, 2.0)), Error);
}

TEST(VelocityStack, EmptyStackIsAnError) {
  VelocityStack s(3);
  EXPECT_THROW(velocity_at(s, {0.0, 0.0}, 0.0), Error);
  EXPECT_THROW(s.newest(), Error);
  EXPECT_THROW(VelocityStack(0), Error);
}

TEST(LagrangeWeights, SumToOneAndInterpolate) {
  const std::vector<double> t{0.0, 0.5, 1.5};
  for (double x : {-0.3, 0.2, 2.0}) {
    const auto w = lagrange_weights(t, x);
    EXPECT_NEAR(w[0] + w[1] + w[2], 1.0, 1e-14);
  }
  const auto w = lagrange_weights(t, 0.5);
  EXPECT_EQ(w[1], 1.0);
  EXPECT_EQ(w[0], 0.0);
}

TEST(VelocityField, DivergenceFree) {
  const auto u = wave(0.7, 0.0);
  for (double x : {0.01, 0.33, 0.5, 0.91})
    for (double y : {0.02, 0.47, 0.88}) EXPECT_LE(std::abs(u->divergence({x, y})), 1e-12);
}
