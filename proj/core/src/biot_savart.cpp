#include "cmm/biot_savart.hpp"

#include <cmath>

#include "cmm/parallel.hpp"

namespace cmm {

HatFilter HatFilter::build(double width, double sample_spacing, int oversample) {
  if (oversample < 1) throw Error("oversampling factor must be at least 1");
  const double h = sample_spacing / oversample;
  HatFilter f;
  f.oversample = oversample;
  // offsets (o + 0.5) h with |offset| < width
  const int reach = static_cast<int>(std::ceil(width / h)) + 1;
  f.first = -reach;
  std::vector<double> w;
  for (int o = -reach; o < reach; ++o) {
    const double s = std::abs((o + 0.5) * h);
    w.push_back(s < width ? 1.0 - s / width : 0.0);
  }
  std::vector<double> phase_sum(static_cast<std::size_t>(oversample), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const int o = f.first + static_cast<int>(k);
    phase_sum[static_cast<std::size_t>(((o % oversample) + oversample) % oversample)] += w[k];
  }
  for (double s : phase_sum) {
    if (!(s > 0.0)) throw Error("mollifier narrower than the quadrature sub-sample spacing");
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    const int o = f.first + static_cast<int>(k);
    w[k] /= oversample * phase_sum[static_cast<std::size_t>(((o % oversample) + oversample) % oversample)];
  }
  f.weights = std::move(w);
  return f;
}

std::vector<double> sample_vorticity(const MapStack& stack, const InitialVorticity& omega0, int n_s,
                                     double width, int oversample) {
  const double length = omega0.length();
  if (!(width >= 0.0)) throw Error("mollifier width must be non-negative");
  if (width > 0.25 * length) throw Error("mollifier too wide");
  const PeriodicGrid grid(n_s, length);
  const std::size_t nn = grid.size();
  std::vector<double> out(nn);

  if (width == 0.0) {
    parallel_for(n_s, [&](int j) {
      for (int i = 0; i < n_s; ++i) out[grid.index(i, j)] = vorticity_eval(stack, omega0, grid.node(i, j));
    });
    return out;
  }

  const HatFilter filter = HatFilter::build(width, grid.spacing(), oversample);
  const int m = filter.oversample;
  const int nf = m * n_s;
  const double h = length / nf;
  const std::size_t nfs = static_cast<std::size_t>(nf);
  std::vector<double> fine(nfs * nfs);
  parallel_for(nf, [&](int j) {
    const double y = (j + 0.5) * h;
    for (int i = 0; i < nf; ++i) {
      fine[static_cast<std::size_t>(j) * nfs + static_cast<std::size_t>(i)] =
          vorticity_eval(stack, omega0, {(i + 0.5) * h, y});
    }
  });

  // x pass: fine rows -> n_s columns
  std::vector<double> half(nfs * static_cast<std::size_t>(n_s));
  const int taps = static_cast<int>(filter.weights.size());
  parallel_for(nf, [&](int j) {
    const double* row = &fine[static_cast<std::size_t>(j) * nfs];
    for (int i = 0; i < n_s; ++i) {
      double acc = 0.0;
      for (int t = 0; t < taps; ++t) {
        int k = i * m + filter.first + t;
        k = ((k % nf) + nf) % nf;
        acc += filter.weights[static_cast<std::size_t>(t)] * row[k];
      }
      half[static_cast<std::size_t>(j) * n_s + static_cast<std::size_t>(i)] = acc;
    }
  });
  // y pass
  parallel_for(n_s, [&](int j) {
    for (int i = 0; i < n_s; ++i) {
      double acc = 0.0;
      for (int t = 0; t < taps; ++t) {
        int k = j * m + filter.first + t;
        k = ((k % nf) + nf) % nf;
        acc += filter.weights[static_cast<std::size_t>(t)] * half[static_cast<std::size_t>(k) * n_s + static_cast<std::size_t>(i)];
      }
      out[grid.index(i, j)] = acc;
    }
  });
  return out;
}

FourierCoefficients solve_stream(std::span<const double> omega, int n_s, SpectralWorkspace& ws) {
  FourierCoefficients hat(n_s, ws.length());
  ws.fft(n_s).forward(omega, hat);
  for (int row = 0; row < n_s; ++row) {
    const double ky = hat.wavenumber(row);
    for (int col = 0; col < hat.columns(); ++col) {
      const double kx = hat.wavenumber(col);
      const double k2 = kx * kx + ky * ky;
      hat.at(col, row) = k2 > 0.0 ? hat.at(col, row) / k2 : Complex(0.0, 0.0);
    }
  }
  return hat;
}

VelocityField build_velocity(const FourierCoefficients& psi_hat, int n_psi, double t,
                             SpectralWorkspace& ws, double mollifier) {
  const int n_s = psi_hat.n();
  if (n_psi < n_s) throw Error("stream-function grid must be at least as fine as the sampling grid");
  const double length = psi_hat.length();
  FourierCoefficients f(n_psi, length), fx(n_psi, length), fy(n_psi, length), fxy(n_psi, length);

  for (int row = 0; row < n_s; ++row) {
    const int my = psi_hat.mode(row);
    if (2 * std::abs(my) >= n_s) continue;
    const int prow = my >= 0 ? my : my + n_psi;
    const double ky = f.wavenumber(prow);
    for (int col = 0; 2 * col < n_s; ++col) {
      const double kx = f.wavenumber(col);
      const Complex c = psi_hat.at(col, row);
      f.at(col, prow) = c;
      fx.at(col, prow) = Complex(0.0, kx) * c;
      fy.at(col, prow) = Complex(0.0, ky) * c;
      fxy.at(col, prow) = -kx * ky * c;
    }
  }

  const PeriodicGrid grid(n_psi, length);
  Fft2d& fft = ws.fft(n_psi);
  std::vector<double> plane(grid.size());
  std::vector<Jet> jets(grid.size());
  auto fill = [&](const FourierCoefficients& src, double Jet::*slot) {
    fft.inverse(src, plane);
    for (std::size_t k = 0; k < plane.size(); ++k) jets[k].*slot = plane[k];
  };
  fill(f, &Jet::f);
  fill(fx, &Jet::fx);
  fill(fy, &Jet::fy);
  fill(fxy, &Jet::fxy);
  return VelocityField(HermiteField(grid, std::move(jets)), t, mollifier);
}

}  // namespace cmm
