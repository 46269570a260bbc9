#pragma once

#include <span>
#include <vector>

#include "cmm/flowmap.hpp"
#include "cmm/init_fields.hpp"
#include "cmm/spectral.hpp"
#include "cmm/velocity.hpp"

namespace cmm {

struct DiagnosticsRecord {
  double t = 0.0;
  double enstrophy = 0.0;  // ||omega||^2_{L2}
  double energy = 0.0;     // ||u||^2_{L2}
  double enstrophy_error = 0.0;
  double energy_error = 0.0;
  double det_error = 0.0;
  int remap_count = 0;
};

/// omega0 o X on the n x n evaluation grid, row-major with row 0 at the smallest y.
std::vector<double> vorticity_grid(const MapStack& stack, const InitialVorticity& omega0, int n);

/// (L/n)^2 sum of omega^2 over the n x n grid.
double enstrophy(const MapStack& stack, const InitialVorticity& omega0, int n);

/// (L/n)^2 sum of |u|^2 over the n x n grid.
double energy(const VelocityField& velocity, int n);

/// Enstrophy and energy at the current state. Errors are taken against `initial`
/// when given, and are zero otherwise (the record then is the baseline).
DiagnosticsRecord conservation(const MapStack& stack, const InitialVorticity& omega0,
                               const VelocityField& velocity, int n_eval, double t,
                               const DiagnosticsRecord* initial = nullptr);

/// Shell enstrophy E(K) = 1/2 sum_{K <= |m| < K+1} |omega_m|^2, K = 0 .. K_max.
struct Spectrum {
  std::vector<double> energy;

  int k_max() const { return static_cast<int>(energy.size()) - 1; }
  double total() const;
};

/// Bins the transform of row-major samples on an n x n grid into Euclidean shells.
Spectrum spectrum_from_samples(std::span<const double> samples, int n, double length, Fft2d& fft);

Spectrum vorticity_spectrum(const MapStack& stack, const InitialVorticity& omega0, int n_eval,
                            SpectralWorkspace& ws);

struct RadiusFit {
  double delta;   // radius of analyticity
  double alpha;   // algebraic prefactor exponent
  double offset;  // log-constant
  int shells;     // number of shells used
};

/// Least squares of log E(K) on [log K, K, 1] over K in [k_lo, k_hi]; E(K) <= 0 skipped.
/// E(K) ~ K^alpha exp(-2 delta K).
RadiusFit fit_radius(const Spectrum& spectrum, int k_lo, int k_hi);

struct FitWindow {
  int k_lo;
  int k_hi;
};

/// Tail window: the upper half of the leading run of shells above the floor, without
/// the top `exclude` shells, capped at `k_cap` when positive. The floor is the larger of
/// `floor` and `relative_floor` times the peak shell.
FitWindow default_fit_window(const Spectrum& spectrum, double floor = 1e-25, int exclude = 3,
                             int k_cap = 0, double relative_floor = 1e-12);

struct Window {
  double x0, y0, x1, y1;
};

/// Vorticity on the n_px x n_px lattice x_i = x0 + i (x1 - x0) / n_px over the window.
std::vector<double> zoom_render(const MapStack& stack, const InitialVorticity& omega0,
                                const Window& window, int n_px);

}  // namespace cmm
