#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cmm/biot_savart.hpp"
#include "cmm/diagnostics.hpp"

using namespace cmm;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

InitialVorticity cos_x() {
  return InitialVorticity::closed_form(
      "cos_x", kTwoPi, [](Vec2 p) { return std::cos(p.x); },
      [](Vec2 p) { return Jet{std::cos(p.x), -std::sin(p.x), 0.0, 0.0}; }, ValueRange{-1.0, 1.0});
}

Spectrum planted(int k_max, const std::function<double(int)>& e) {
  Spectrum s;
  s.energy.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = 1; k <= k_max; ++k) s.energy[static_cast<std::size_t>(k)] = e(k);
  return s;
}

}  // namespace

TEST(Conservation, FourModesEnstrophy) {
  const MapStack stack(PeriodicGrid(16, kTwoPi));
  const double e = enstrophy(stack, four_modes(), 1024);
  EXPECT_NEAR(e / (4.8 * kTwoPi * kTwoPi / 4), 1.0, 1e-6);
}

TEST(Conservation, BaselineAndErrors) {
  const PeriodicGrid g(16, kTwoPi);
  const MapStack stack(g);
  const VelocityField still(HermiteField(PeriodicGrid(16, kTwoPi)), 0.0);
  const auto base = conservation(stack, four_modes(), still, 64, 0.0);
  EXPECT_EQ(base.enstrophy_error, 0.0);
  EXPECT_EQ(base.energy, 0.0);
  const auto later = conservation(stack, four_modes(), still, 64, 3.0, &base);
  EXPECT_EQ(later.t, 3.0);
  EXPECT_EQ(later.enstrophy_error, 0.0);
  EXPECT_EQ(later.det_error, 0.0);
}

TEST(Energy, CosineStreamFunction) {
  // psi = cos x, u = (0, sin x): ||u||^2 = 2 pi^2.
  const VelocityField u(hermite_project([](Vec2 p) { return Jet{std::cos(p.x), -std::sin(p.x), 0, 0}; },
                                        PeriodicGrid(128, kTwoPi)),
                        0.0);
  EXPECT_NEAR(energy(u, 256), kTwoPi * kTwoPi / 2, 1e-6);
}

TEST(Spectrum, CosineHasQuarterInFirstShell) {
  const MapStack stack(PeriodicGrid(8, kTwoPi));
  SpectralWorkspace ws(32, 32, kTwoPi);
  const Spectrum s = vorticity_spectrum(stack, cos_x(), 32, ws);
  EXPECT_NEAR(s.energy[1], 0.25, 1e-12);
  for (int k = 0; k <= s.k_max(); ++k)
    if (k != 1) EXPECT_NEAR(s.energy[static_cast<std::size_t>(k)], 0.0, 1e-12);
}

TEST(Spectrum, ZeroField) {
  const MapStack stack(PeriodicGrid(8, 1.0));
  SpectralWorkspace ws(16, 16, 1.0);
  for (double e : vorticity_spectrum(stack, constant_field(0.0, 1.0), 16, ws).energy) EXPECT_EQ(e, 0.0);
}

TEST(Spectrum, ParsevalShellSum) {
  // Half the mean square equals the shell total when every mode lands in some shell.
  const MapStack stack(PeriodicGrid(16, kTwoPi));
  const int n = 64;
  SpectralWorkspace ws(n, n, kTwoPi);
  const auto w = random_shells(11, 12, n);
  const auto values = vorticity_grid(stack, w, n);
  double ms = 0.0;
  for (double v : values) ms += v * v;
  ms /= static_cast<double>(values.size());
  const Spectrum s = vorticity_spectrum(stack, w, n, ws);
  EXPECT_NEAR(s.total(), 0.5 * ms, 1e-12 * ms);
}

TEST(Spectrum, RandomShellsMatchPrescribedModuli) {
  const int n = 128, k_max = 16;
  const MapStack stack(PeriodicGrid(16, kTwoPi));
  SpectralWorkspace ws(n, n, kTwoPi);
  const auto modes = random_shell_modes(5, k_max);
  const Spectrum s = vorticity_spectrum(stack, random_shells(5, k_max, n), n, ws);
  std::vector<int> count(static_cast<std::size_t>(k_max) + 1, 0);
  for (const auto& m : modes) ++count[static_cast<std::size_t>(std::floor(std::hypot(m.mx, m.my)))];
  for (int k = 1; k <= k_max; ++k) {
    const double total = shell_total_modulus(k);
    const double want = 0.5 * total * total / count[static_cast<std::size_t>(k)];
    EXPECT_NEAR(s.energy[static_cast<std::size_t>(k)], want, 1e-10 * std::max(1.0, want)) << "K=" << k;
  }
  for (int k = k_max + 1; k <= s.k_max(); ++k) EXPECT_LE(s.energy[static_cast<std::size_t>(k)], 1e-20);
}

TEST(FitRadius, PlantedModels) {
  const auto a = fit_radius(planted(40, [](int k) { return k * k * std::exp(-2 * 0.5 * k); }), 5, 30);
  EXPECT_NEAR(a.delta, 0.5, 1e-10);
  EXPECT_NEAR(a.alpha, 2.0, 1e-10);
  EXPECT_EQ(a.shells, 26);
  const auto b = fit_radius(planted(40, [](int k) { return std::exp(-2.0 * k); }), 3, 20);
  EXPECT_NEAR(b.delta, 1.0, 1e-10);
  EXPECT_NEAR(b.alpha, 0.0, 1e-10);
  const auto c = fit_radius(planted(40, [](int) { return 3.0; }), 3, 20);
  EXPECT_NEAR(c.delta, 0.0, 1e-12);
  EXPECT_NEAR(c.offset, std::log(3.0), 1e-12);
}

TEST(FitRadius, InsufficientTail) {
  const Spectrum s = planted(10, [](int k) { return k < 8 ? 1.0 : 0.0; });
  try {
    fit_radius(s, 5, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "insufficient tail");
  }
  EXPECT_THROW(fit_radius(s, 0, 5), Error);
}

TEST(FitWindow, StopsAtFirstShellBelowFloor) {
  Spectrum s = planted(100, [](int k) { return std::exp(-0.5 * k); });
  for (int k = 60; k <= 100; ++k) s.energy[static_cast<std::size_t>(k)] = 0.0;
  s.energy[80] = 1.0;  // isolated spike after the tail ends
  const FitWindow w = default_fit_window(s, 1e-25, 3);
  EXPECT_EQ(w.k_lo, 27);
  EXPECT_EQ(w.k_hi, 52);
  const FitWindow capped = default_fit_window(s, 1e-25, 3, 40);
  EXPECT_EQ(capped.k_hi, 37);
  EXPECT_THROW(default_fit_window(planted(5, [](int) { return 1.0; })), Error);
}

TEST(ZoomRender, FullWindowMatchesDirectSamples) {
  const MapStack stack(PeriodicGrid(16, kTwoPi));
  const auto w = four_modes();
  const int n = 64;
  const auto raster = zoom_render(stack, w, {0.0, 0.0, kTwoPi, kTwoPi}, n);
  const double h = kTwoPi / n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) ASSERT_EQ(raster[static_cast<std::size_t>(j * n + i)], w({0.0 + i * h, 0.0 + j * h}));
}

TEST(ZoomRender, DegenerateWindow) {
  const MapStack stack(PeriodicGrid(8, 1.0));
  EXPECT_THROW(zoom_render(stack, constant_field(1.0, 1.0), {0.2, 0.2, 0.2, 0.4}, 16), Error);
  EXPECT_THROW(zoom_render(stack, constant_field(1.0, 1.0), {0.2, 0.4, 0.3, 0.3}, 16), Error);
  EXPECT_THROW(zoom_render(stack, constant_field(1.0, 1.0), {0.0, 0.0, 1.0, 1.0}, 1), Error);
}

TEST(ZoomRender, NestedWindowsShareTheirCenter) {
  const MapStack stack(PeriodicGrid(16, 1.0));
  const auto w = gaussian_pair();
  const double cx = 13.0 / 32, cy = 13.0 / 32;
  const auto ref = w({cx, cy});
  for (int e = 2; e <= 13; ++e) {
    const double half = std::ldexp(0.5, -e);
    const auto r = zoom_render(stack, w, {cx - half, cy - half, cx + half, cy + half}, 256);
    EXPECT_EQ(r[128 * 256 + 128], ref);
    for (double v : r) {
      ASSERT_TRUE(std::isfinite(v));
      ASSERT_GE(v, w.range()->min);
      ASSERT_LE(v, w.range()->max);
    }
  }
}
