#include "cmm/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cmm/parallel.hpp"

namespace cmm {

std::vector<double> vorticity_grid(const MapStack& stack, const InitialVorticity& omega0, int n) {
  const PeriodicGrid grid(n, omega0.length());
  std::vector<double> out(grid.size());
  parallel_for(n, [&](int j) {
    for (int i = 0; i < n; ++i) out[grid.index(i, j)] = vorticity_eval(stack, omega0, grid.node(i, j));
  });
  return out;
}

namespace {

// Row sums are formed independently, then added in a fixed order.
template <class RowFn>
double ordered_sum(int rows, RowFn&& row_sum) {
  std::vector<double> partial(static_cast<std::size_t>(rows));
  parallel_for(rows, [&](int j) { partial[static_cast<std::size_t>(j)] = row_sum(j); });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

double enstrophy(const MapStack& stack, const InitialVorticity& omega0, int n) {
  const PeriodicGrid grid(n, omega0.length());
  const double sum = ordered_sum(n, [&](int j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = vorticity_eval(stack, omega0, grid.node(i, j));
      acc += w * w;
    }
    return acc;
  });
  return grid.spacing() * grid.spacing() * sum;
}

double energy(const VelocityField& velocity, int n) {
  const PeriodicGrid grid(n, velocity.psi().grid().length());
  const double sum = ordered_sum(n, [&](int j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec2 u = velocity(grid.node(i, j));
      acc += u.x * u.x + u.y * u.y;
    }
    return acc;
  });
  return grid.spacing() * grid.spacing() * sum;
}

DiagnosticsRecord conservation(const MapStack& stack, const InitialVorticity& omega0,
                               const VelocityField& velocity, int n_eval, double t,
                               const DiagnosticsRecord* initial) {
  DiagnosticsRecord r;
  r.t = t;
  r.enstrophy = enstrophy(stack, omega0, n_eval);
  r.energy = energy(velocity, n_eval);
  if (initial) {
    r.enstrophy_error = r.enstrophy - initial->enstrophy;
    r.energy_error = r.energy - initial->energy;
  }
  r.det_error = jacobian_det_error(stack.active());
  r.remap_count = stack.remap_count();
  return r;
}

double Spectrum::total() const {
  double s = 0.0;
  for (double e : energy) s += e;
  return s;
}

Spectrum spectrum_from_samples(std::span<const double> samples, int n, double length, Fft2d& fft) {
  FourierCoefficients hat(n, length);
  fft.forward(samples, hat);
  const int half = n / 2;
  const int k_max = static_cast<int>(std::floor(std::sqrt(2.0) * half));
  Spectrum s;
  s.energy.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int row = 0; row < n; ++row) {
    const long my = hat.mode(row);
    for (int col = 0; col < hat.columns(); ++col) {
      const long mx = col;
      const long r2 = mx * mx + my * my;
      long k = static_cast<long>(std::sqrt(static_cast<double>(r2)));
      while (k * k > r2) --k;
      while ((k + 1) * (k + 1) <= r2) ++k;
      s.energy[static_cast<std::size_t>(k)] += 0.5 * hat.multiplicity(col) * std::norm(hat.at(col, row));
    }
  }
  return s;
}

Spectrum vorticity_spectrum(const MapStack& stack, const InitialVorticity& omega0, int n_eval,
                            SpectralWorkspace& ws) {
  const auto samples = vorticity_grid(stack, omega0, n_eval);
  return spectrum_from_samples(samples, n_eval, omega0.length(), ws.fft(n_eval));
}

RadiusFit fit_radius(const Spectrum& spectrum, int k_lo, int k_hi) {
  if (k_lo < 1 || k_hi <= k_lo) throw Error("fit window needs 1 <= K_lo < K_hi");
  std::vector<std::array<double, 3>> rows;
  std::vector<double> rhs;
  for (int k = k_lo; k <= k_hi && k <= spectrum.k_max(); ++k) {
    const double e = spectrum.energy[static_cast<std::size_t>(k)];
    if (!(e > 0.0)) continue;
    rows.push_back({std::log(static_cast<double>(k)), static_cast<double>(k), 1.0});
    rhs.push_back(std::log(e));
  }
  if (rows.size() < 4) throw Error("insufficient tail");

  // Householder QR on the m x 3 design matrix.
  const std::size_t m = rows.size();
  for (std::size_t c = 0; c < 3; ++c) {
    double norm = 0.0;
    for (std::size_t r = c; r < m; ++r) norm += rows[r][c] * rows[r][c];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error("insufficient tail");
    const double alpha = rows[c][c] > 0 ? -norm : norm;
    std::vector<double> v(m, 0.0);
    v[c] = rows[c][c] - alpha;
    for (std::size_t r = c + 1; r < m; ++r) v[r] = rows[r][c];
    double vnorm2 = 0.0;
    for (std::size_t r = c; r < m; ++r) vnorm2 += v[r] * v[r];
    if (vnorm2 == 0.0) continue;
    for (std::size_t cc = c; cc < 3; ++cc) {
      double dot = 0.0;
      for (std::size_t r = c; r < m; ++r) dot += v[r] * rows[r][cc];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t r = c; r < m; ++r) rows[r][cc] -= f * v[r];
    }
    double dot = 0.0;
    for (std::size_t r = c; r < m; ++r) dot += v[r] * rhs[r];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t r = c; r < m; ++r) rhs[r] -= f * v[r];
  }
  std::array<double, 3> coef{};
  for (int c = 2; c >= 0; --c) {
    double acc = rhs[static_cast<std::size_t>(c)];
    for (int cc = c + 1; cc < 3; ++cc) acc -= rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)] * coef[static_cast<std::size_t>(cc)];
    coef[static_cast<std::size_t>(c)] = acc / rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
  }
  return {-0.5 * coef[1], coef[0], coef[2], static_cast<int>(m)};
}

FitWindow default_fit_window(const Spectrum& spectrum, double floor, int exclude, int k_cap,
                             double relative_floor) {
  double peak = 0.0;
  for (int k = 1; k <= spectrum.k_max(); ++k) peak = std::max(peak, spectrum.energy[static_cast<std::size_t>(k)]);
  const double threshold = std::max(floor, relative_floor * peak);
  // The tail ends at the first shell that drops to the floor; anything above the floor
  // beyond that point is grid-harmonic contamination rather than the decay itself.
  int top = 0;
  while (top < spectrum.k_max() && spectrum.energy[static_cast<std::size_t>(top) + 1] > threshold) ++top;
  if (k_cap > 0 && top > k_cap) top = k_cap;
  const int hi = top - exclude;
  const int lo = std::max(1, top / 2);
  if (hi - lo < 3) throw Error("insufficient tail");
  return {lo, hi};
}

std::vector<double> zoom_render(const MapStack& stack, const InitialVorticity& omega0,
                                const Window& window, int n_px) {
  if (n_px < 2) throw Error("raster needs at least 2 pixels per side");
  const double wx = window.x1 - window.x0;
  const double wy = window.y1 - window.y0;
  if (!(wx > 0.0) || !(wy > 0.0) || !std::isfinite(wx) || !std::isfinite(wy)) {
    throw Error("degenerate zoom window");
  }
  const double hx = wx / n_px;
  const double hy = wy / n_px;
  const std::size_t n = static_cast<std::size_t>(n_px);
  std::vector<double> out(n * n);
  parallel_for(n_px, [&](int j) {
    const double y = window.y0 + j * hy;
    for (int i = 0; i < n_px; ++i) {
      out[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)] =
          vorticity_eval(stack, omega0, {window.x0 + i * hx, y});
    }
  });
  return out;
}

}  // namespace cmm
