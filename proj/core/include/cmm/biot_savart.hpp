#pragma once

#include <span>
#include <vector>

#include "cmm/flowmap.hpp"
#include "cmm/init_fields.hpp"
#include "cmm/spectral.hpp"
#include "cmm/velocity.hpp"

namespace cmm {

/// Discrete hat filter used for mollified sampling. `weights[o]` multiplies the
/// sub-sample at offset (o + first + 0.5) * h from a sampling node, h = dx / oversample.
/// Weights are normalized per sub-lattice phase so the filter translates over the
/// sampling lattice form an exact partition of unity.
struct HatFilter {
  int oversample = 2;
  int first = 0;
  std::vector<double> weights;

  static HatFilter build(double width, double sample_spacing, int oversample);
};

/// Samples omega0 o X on the n_s x n_s grid (row-major, row = y). With width == 0 the
/// values are pointwise; otherwise they are the hat-mollified vorticity computed by
/// midpoint quadrature on an `oversample`-times finer lattice.
std::vector<double> sample_vorticity(const MapStack& stack, const InitialVorticity& omega0, int n_s,
                                     double width, int oversample = 2);

/// Stream function coefficients psi_m = omega_m / |k_m|^2 with psi_0 = 0.
FourierCoefficients solve_stream(std::span<const double> omega, int n_s, SpectralWorkspace& ws);

/// Zero-pads psi to the n_psi grid (dropping the sampling grid's Nyquist lines), forms
/// the jets (psi, psi_x, psi_y, psi_xy) by spectral differentiation and wraps them as a
/// Hermite stream function.
VelocityField build_velocity(const FourierCoefficients& psi_hat, int n_psi, double t,
                             SpectralWorkspace& ws, double mollifier = 0.0);

}  // namespace cmm
