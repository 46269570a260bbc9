#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <vector>

namespace cmm {

using Complex = std::complex<double>;

/// Fourier-series coefficients of a real periodic n x n field,
///   f(x) = sum_m c_m exp(i k_m . x),  k_m = 2 pi m / L,
/// stored in half-spectrum layout: row = y-mode index in FFT order (0..n-1),
/// column = x-mode 0..n/2. Coefficients use the 1/n^2 normalization, so
/// mean(|f|^2) over the grid equals the sum of |c_m|^2 over the full spectrum.
class FourierCoefficients {
 public:
  FourierCoefficients(int n, double length);

  int n() const { return n_; }
  int columns() const { return n_ / 2 + 1; }
  double length() const { return length_; }

  Complex& at(int col, int row) { return data_[static_cast<std::size_t>(row) * columns() + col]; }
  const Complex& at(int col, int row) const {
    return data_[static_cast<std::size_t>(row) * columns() + col];
  }

  /// Signed mode number for a row (or column) index: 0..n/2 stays, above maps to index - n.
  int mode(int index) const { return index <= n_ / 2 ? index : index - n_; }
  double wavenumber(int index) const;

  /// Multiplicity of a half-spectrum column in the full spectrum (1 for the
  /// self-conjugate columns 0 and n/2, 2 otherwise).
  int multiplicity(int col) const { return (col == 0 || 2 * col == n_) ? 1 : 2; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

 private:
  int n_;
  double length_;
  std::vector<Complex> data_;
};

/// FFTW plans and buffers for one transform size. Planning uses FFTW_ESTIMATE so
/// results are reproducible from run to run.
class Fft2d {
 public:
  explicit Fft2d(int n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int n() const { return n_; }

  /// Row-major real samples (row = y) to normalized series coefficients.
  void forward(std::span<const double> samples, FourierCoefficients& out);

  /// Series synthesis at the grid nodes; `coefficients.n()` must equal n().
  void inverse(const FourierCoefficients& coefficients, std::span<double> samples);

  /// Full-spectrum complex synthesis (row-major, FFT order in both axes).
  void inverse_complex(std::span<const Complex> full, std::span<Complex> samples);

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

/// Transform plans for the vorticity-sampling and stream-function grids.
class SpectralWorkspace {
 public:
  SpectralWorkspace(int n_sample, int n_psi, double length);

  int n_sample() const { return n_sample_; }
  int n_psi() const { return n_psi_; }
  double length() const { return length_; }

  /// Transform of size n, created on first use.
  Fft2d& fft(int n);

 private:
  int n_sample_;
  int n_psi_;
  double length_;
  std::map<int, std::unique_ptr<Fft2d>> plans_;
};

}  // namespace cmm
