#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "cmm/biot_savart.hpp"

using namespace cmm;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> grid_samples(int n, double L, const std::function<double(double, double)>& f) {
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(j) * n + i] = f(i * L / n, j * L / n);
  return v;
}

InitialVorticity cos_x() {
  return InitialVorticity::closed_form(
      "cos_x", kTwoPi, [](Vec2 p) { return std::cos(p.x); },
      [](Vec2 p) { return Jet{std::cos(p.x), -std::sin(p.x), 0.0, 0.0}; });
}

}  // namespace

TEST(SolveStream, EigenfunctionOracle) {
  const int n = 64;
  SpectralWorkspace ws(n, n, kTwoPi);
  const auto omega = grid_samples(n, kTwoPi, [](double x, double y) { return std::cos(3 * x) * std::cos(4 * y); });
  const auto psi_hat = solve_stream(omega, n, ws);
  const VelocityField u = build_velocity(psi_hat, n, 0.0, ws);
  const auto& psi = u.psi();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p = psi.grid().node(i, j);
      const Jet& s = psi.at(i, j);
      EXPECT_NEAR(s.f, std::cos(3 * p.x) * std::cos(4 * p.y) / 25.0, 1e-12);
      EXPECT_NEAR(s.fxy, 12.0 * std::sin(3 * p.x) * std::sin(4 * p.y) / 25.0, 1e-12);
    }
  }
}

TEST(SolveStream, CosineIsItsOwnStreamFunction) {
  const int n = 32;
  SpectralWorkspace ws(n, n, kTwoPi);
  const auto psi_hat = solve_stream(grid_samples(n, kTwoPi, [](double x, double) { return std::cos(x); }), n, ws);
  const VelocityField u = build_velocity(psi_hat, n, 0.0, ws);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(u.psi().at(i, 3).f, std::cos(u.psi().grid().node(i, 3).x), 1e-13);
}

TEST(SolveStream, MeanIsGaugedAway) {
  const int n = 16;
  SpectralWorkspace ws(n, n, 1.0);
  const auto psi_hat = solve_stream(std::vector<double>(n * n, 7.0), n, ws);
  for (const Complex& c : psi_hat.data()) EXPECT_EQ(std::abs(c), 0.0);
}

TEST(BuildVelocity, ZeroStreamFunctionGivesZeroVelocity) {
  SpectralWorkspace ws(16, 32, 1.0);
  const VelocityField u = build_velocity(FourierCoefficients(16, 1.0), 32, 0.5, ws);
  EXPECT_EQ(u.time(), 0.5);
  EXPECT_EQ(u({0.3, 0.7}), (Vec2{0.0, 0.0}));
}

TEST(BuildVelocity, CosineStreamFunction) {
  SpectralWorkspace ws(32, 256, kTwoPi);
  auto psi_hat = solve_stream(grid_samples(32, kTwoPi, [](double x, double) { return std::cos(x); }), 32, ws);
  const VelocityField u = build_velocity(psi_hat, 256, 0.0, ws);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> r(0.0, kTwoPi);
  for (int k = 0; k < 500; ++k) {
    const Vec2 p{r(rng), r(rng)};
    const Vec2 v = u(p);
    EXPECT_NEAR(v.x, 0.0, 1e-6);
    EXPECT_NEAR(v.y, std::sin(p.x), 1e-6);
  }
}

TEST(BuildVelocity, DivergenceVanishesForRandomSpectra) {
  const int n = 32;
  SpectralWorkspace ws(n, 64, 1.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> omega(n * n);
  for (double& w : omega) w = g(rng);
  const VelocityField u = build_velocity(solve_stream(omega, n, ws), 64, 0.0, ws);
  std::uniform_real_distribution<double> r(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) EXPECT_LE(std::abs(u.divergence({r(rng), r(rng)})), 1e-12);
}

TEST(HatFilter, PartitionOfUnityPerPhase) {
  for (int m : {1, 2, 3}) {
    const HatFilter f = HatFilter::build(0.07, 0.05, m);
    ASSERT_FALSE(f.weights.empty());
    // Translates by the sampling spacing cover each sub-lattice phase once.
    for (int phase = 0; phase < m; ++phase) {
      double s = 0.0;
      for (std::size_t o = 0; o < f.weights.size(); ++o) {
        if (((static_cast<int>(o) + f.first) % m + m) % m == phase) s += f.weights[o];
      }
      EXPECT_NEAR(s * m, 1.0, 1e-14) << "m=" << m << " phase=" << phase;
    }
  }
}

TEST(SampleVorticity, ConstantsAreFixedPoints) {
  const MapStack stack(PeriodicGrid(16, 1.0));
  const auto omega0 = constant_field(3.25, 1.0);
  for (double eps : {0.0, 1.0 / 32, 0.1, 0.25}) {
    for (double v : sample_vorticity(stack, omega0, 32, eps)) EXPECT_NEAR(v, 3.25, 1e-14);
  }
}

TEST(SampleVorticity, TooWideMollifierIsRejected) {
  const MapStack stack(PeriodicGrid(16, 1.0));
  try {
    sample_vorticity(stack, constant_field(1.0, 1.0), 32, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "mollifier too wide");
  }
}

TEST(SampleVorticity, PointwiseAtOrigin) {
  const MapStack stack(PeriodicGrid(16, kTwoPi));
  const auto v = sample_vorticity(stack, four_modes(), 32, 0.0);
  EXPECT_DOUBLE_EQ(v[0], 2.8);
}

TEST(SampleVorticity, MollifiedCosineMatchesHatTransform) {
  // The continuous hat of half-width eps attenuates cos x by 2 (1 - cos eps) / eps^2.
  const int n = 64;
  const double h = kTwoPi / n, eps = h;
  const double gain = 2.0 * (1.0 - std::cos(eps)) / (eps * eps);
  const MapStack stack(PeriodicGrid(16, kTwoPi));
  double err_coarse = 0.0, err_dense = 0.0;
  const auto coarse = sample_vorticity(stack, cos_x(), n, eps, 2);
  const auto dense = sample_vorticity(stack, cos_x(), n, eps, 10);
  for (int j = 0; j < n; j += 7) {
    for (int i = 0; i < n; ++i) {
      const double want = gain * std::cos(i * h);
      err_coarse = std::max(err_coarse, std::abs(coarse[j * n + i] - want));
      err_dense = std::max(err_dense, std::abs(dense[j * n + i] - want));
    }
  }
  EXPECT_LE(err_dense, 1e-5);
  EXPECT_LE(err_coarse, 1e-3);
  // Second order in the sub-sample spacing: 5x finer gives about 25x smaller error.
  EXPECT_GE(err_coarse / err_dense, 15.0);
}

TEST(SampleVorticity, MeanIsPreserved) {
  const int n = 32;
  const MapStack stack(PeriodicGrid(16, kTwoPi));
  const auto pointwise = sample_vorticity(stack, four_modes(), 2 * n, 0.0);
  const auto mollified = sample_vorticity(stack, four_modes(), n, kTwoPi / n, 2);
  // Sub-samples of the m = 2 quadrature sit at cell midpoints, i.e. the odd nodes of the
  // doubled grid; their mean is the mean of the mollified field.
  double sub = 0.0;
  for (int j = 0; j < 2 * n; ++j)
    for (int i = 0; i < 2 * n; ++i)
      if (i % 2 == 1 && j % 2 == 1) sub += pointwise[j * 2 * n + i];
  sub /= n * n;
  const double mean = std::accumulate(mollified.begin(), mollified.end(), 0.0) / (n * n);
  EXPECT_NEAR(mean, sub, 1e-14);
}
