#include "cmm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmm/grid.hpp"

namespace cmm {

FourierCoefficients::FourierCoefficients(int n, double length)
    : n_(n), length_(length), data_(static_cast<std::size_t>(n) * (n / 2 + 1)) {
  if (n < 4 || n % 2 != 0) throw Error("transform size must be even and at least 4");
}

double FourierCoefficients::wavenumber(int index) const {
  return 2.0 * std::numbers::pi * mode(index) / length_;
}

struct Fft2d::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_complex* full_in = nullptr;
  fftw_complex* full_out = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c = nullptr;

  ~Plans() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    if (c2c) fftw_destroy_plan(c2c);
    fftw_free(real);
    fftw_free(spec);
    fftw_free(full_in);
    fftw_free(full_out);
  }
};

Fft2d::Fft2d(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 4 || n % 2 != 0) throw Error("transform size must be even and at least 4");
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::size_t nh = static_cast<std::size_t>(n) * (n / 2 + 1);
  plans_->real = fftw_alloc_real(nn);
  plans_->spec = fftw_alloc_complex(nh);
  plans_->r2c = fftw_plan_dft_r2c_2d(n, n, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_2d(n, n, plans_->spec, plans_->real, FFTW_ESTIMATE);
  if (!plans_->r2c || !plans_->c2r) throw Error("FFTW planning failed");
}

Fft2d::~Fft2d() = default;

void Fft2d::forward(std::span<const double> samples, FourierCoefficients& out) {
  const std::size_t nn = static_cast<std::size_t>(n_) * n_;
  if (samples.size() != nn || out.n() != n_) throw Error("transform size mismatch");
  std::copy(samples.begin(), samples.end(), plans_->real);
  fftw_execute(plans_->r2c);
  const double scale = 1.0 / static_cast<double>(nn);
  auto dst = out.data();
  for (std::size_t k = 0; k < dst.size(); ++k) {
    dst[k] = Complex(plans_->spec[k][0] * scale, plans_->spec[k][1] * scale);
  }
}

void Fft2d::inverse(const FourierCoefficients& coefficients, std::span<double> samples) {
  const std::size_t nn = static_cast<std::size_t>(n_) * n_;
  if (samples.size() != nn || coefficients.n() != n_) throw Error("transform size mismatch");
  auto src = coefficients.data();
  for (std::size_t k = 0; k < src.size(); ++k) {
    plans_->spec[k][0] = src[k].real();
    plans_->spec[k][1] = src[k].imag();
  }
  fftw_execute(plans_->c2r);
  std::copy(plans_->real, plans_->real + nn, samples.begin());
}

void Fft2d::inverse_complex(std::span<const Complex> full, std::span<Complex> samples) {
  const std::size_t nn = static_cast<std::size_t>(n_) * n_;
  if (full.size() != nn || samples.size() != nn) throw Error("transform size mismatch");
  if (!plans_->c2c) {
    plans_->full_in = fftw_alloc_complex(nn);
    plans_->full_out = fftw_alloc_complex(nn);
    plans_->c2c = fftw_plan_dft_2d(n_, n_, plans_->full_in, plans_->full_out, FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    if (!plans_->c2c) throw Error("FFTW planning failed");
  }
  for (std::size_t k = 0; k < nn; ++k) {
    plans_->full_in[k][0] = full[k].real();
    plans_->full_in[k][1] = full[k].imag();
  }
  fftw_execute(plans_->c2c);
  for (std::size_t k = 0; k < nn; ++k) {
    samples[k] = Complex(plans_->full_out[k][0], plans_->full_out[k][1]);
  }
}

SpectralWorkspace::SpectralWorkspace(int n_sample, int n_psi, double length)
    : n_sample_(n_sample), n_psi_(n_psi), length_(length) {
  if (n_psi < n_sample) throw Error("stream-function grid must be at least as fine as the sampling grid");
}

Fft2d& SpectralWorkspace::fft(int n) {
  auto& slot = plans_[n];
  if (!slot) slot = std::make_unique<Fft2d>(n);
  return *slot;
}

}  // namespace cmm
