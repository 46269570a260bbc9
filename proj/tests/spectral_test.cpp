#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cmm/grid.hpp"
#include "cmm/spectral.hpp"

using namespace cmm;

namespace {

std::vector<double> random_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (double& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST(Fft2d, RejectsOddSizes) {
  EXPECT_THROW(Fft2d(6 + 1), Error);
  EXPECT_THROW(Fft2d(2), Error);
}

TEST(Fft2d, RoundTrip) {
  const int n = 32;
  Fft2d fft(n);
  const auto v = random_samples(n, 1);
  FourierCoefficients c(n, 1.0);
  fft.forward(v, c);
  std::vector<double> back(v.size());
  fft.inverse(c, back);
  for (std::size_t k = 0; k < v.size(); ++k) EXPECT_NEAR(back[k], v[k], 1e-13);
}

TEST(Fft2d, SingleCosineHasHalfAmplitudeModes) {
  const int n = 16;
  const double L = 2 * std::numbers::pi;
  std::vector<double> v(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v[j * n + i] = std::cos(3 * i * L / n);
  Fft2d fft(n);
  FourierCoefficients c(n, L);
  fft.forward(v, c);
  EXPECT_NEAR(c.at(3, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(c.at(3, 0).imag(), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c.at(0, 0)), 0.0, 1e-14);
  EXPECT_NEAR(c.wavenumber(3), 3.0, 1e-14);
}

TEST(Fft2d, ParsevalWithSeriesNormalization) {
  const int n = 24;
  Fft2d fft(n);
  const auto v = random_samples(n, 2);
  FourierCoefficients c(n, 1.0);
  fft.forward(v, c);
  double physical = 0.0;
  for (double x : v) physical += x * x;
  physical /= static_cast<double>(v.size());
  double spectral = 0.0;
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < c.columns(); ++col) spectral += c.multiplicity(col) * std::norm(c.at(col, row));
  EXPECT_NEAR(spectral, physical, 1e-12 * physical);
}

TEST(FourierCoefficients, ModeNumbering) {
  FourierCoefficients c(8, 1.0);
  EXPECT_EQ(c.columns(), 5);
  EXPECT_EQ(c.mode(3), 3);
  EXPECT_EQ(c.mode(4), 4);
  EXPECT_EQ(c.mode(5), -3);
  EXPECT_EQ(c.multiplicity(0), 1);
  EXPECT_EQ(c.multiplicity(4), 1);
  EXPECT_EQ(c.multiplicity(2), 2);
}

TEST(SpectralWorkspace, RejectsCoarseStreamGrid) {
  EXPECT_THROW(SpectralWorkspace(64, 32, 1.0), Error);
  SpectralWorkspace ws(32, 64, 1.0);
  EXPECT_EQ(&ws.fft(32), &ws.fft(32));
  EXPECT_EQ(ws.fft(64).n(), 64);
}
