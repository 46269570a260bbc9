#include "cmm/init_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cmm/parallel.hpp"

namespace cmm {

InitialVorticity InitialVorticity::closed_form(std::string name, double length, ValueFn value,
                                               JetFn jet, std::optional<ValueRange> range) {
  InitialVorticity w;
  w.kind_ = Kind::closed_form;
  w.name_ = std::move(name);
  w.length_ = length;
  w.value_ = std::move(value);
  w.jet_ = std::move(jet);
  w.range_ = range;
  return w;
}

InitialVorticity InitialVorticity::sampled(std::string name, HermiteField field) {
  InitialVorticity w;
  w.kind_ = Kind::hermite_sampled;
  w.name_ = std::move(name);
  w.length_ = field.grid().length();
  w.field_ = std::make_shared<const HermiteField>(std::move(field));
  return w;
}

Jet InitialVorticity::jet(Vec2 p) const {
  return field_ ? hermite_eval_jet(*field_, p) : jet_(p);
}

namespace {

// Analytic extrema widened by a few rounding units of a field whose terms sum to at most
// `scale` in magnitude, so every evaluated value lies inside.
ValueRange padded_range(double lo, double hi, double scale) {
  const double slack = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(scale);
  return {lo - slack, hi + slack};
}

}  // namespace

InitialVorticity four_modes() {
  auto value = [](Vec2 p) {
    return std::cos(p.x) + std::cos(p.y) + 0.6 * std::cos(2.0 * p.x) + 0.2 * std::cos(3.0 * p.x);
  };
  auto jet = [value](Vec2 p) {
    return Jet{value(p),
               -std::sin(p.x) - 1.2 * std::sin(2.0 * p.x) - 0.6 * std::sin(3.0 * p.x),
               -std::sin(p.y), 0.0};
  };
  // x-part g(x) = cos x + 0.6 cos 2x + 0.2 cos 3x has g'(x) = -sin x (0.4 + 2.4 c + 2.4 c^2)
  // with c = cos x; its minimum is at c = pi or at a root of the quadratic.
  auto g_of_c = [](double c) { return c + 0.6 * (2.0 * c * c - 1.0) + 0.2 * (4.0 * c * c * c - 3.0 * c); };
  const double disc = std::sqrt(2.4 * 2.4 - 4.0 * 2.4 * 0.4);
  const double gmin = std::min({g_of_c(-1.0), g_of_c((-2.4 + disc) / 4.8), g_of_c((-2.4 - disc) / 4.8)});
  return InitialVorticity::closed_form("four_modes", 2.0 * std::numbers::pi, value, jet,
                                       padded_range(gmin - 1.0, 2.8, 3.8));
}

InitialVorticity constant_field(double value, double length) {
  return InitialVorticity::closed_form(
      value == 0.0 ? "zero" : "constant", length, [value](Vec2) { return value; },
      [value](Vec2) { return Jet{value, 0.0, 0.0, 0.0}; }, ValueRange{value, value});
}

double shell_total_modulus(int k) {
  const double kk = static_cast<double>(k);
  return 2.0 * std::pow(kk, 3.5) * std::exp(-kk * kk / 4.0);
}

std::vector<ShellMode> random_shell_modes(std::uint64_t seed, int k_max) {
  if (k_max < 1) throw Error("random shells need K_max >= 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<ShellMode> modes;
  for (int k = 1; k <= k_max; ++k) {
    const int lo = k * k;
    const int hi = (k + 1) * (k + 1);
    std::vector<std::pair<int, int>> half;
    for (int my = -k - 1; my <= k + 1; ++my) {
      for (int mx = 0; mx <= k + 1; ++mx) {
        if (mx == 0 && my <= 0) continue;
        const int r2 = mx * mx + my * my;
        if (r2 >= lo && r2 < hi) half.emplace_back(mx, my);
      }
    }
    const double modulus = shell_total_modulus(k) / static_cast<double>(2 * half.size());
    for (auto [mx, my] : half) {
      const double phase = 2.0 * std::numbers::pi * uniform();
      const Complex c = std::polar(modulus, phase);
      modes.push_back({mx, my, c});
      modes.push_back({-mx, -my, std::conj(c)});
    }
  }
  return modes;
}

SynthesizedField synthesize_modes(const std::vector<ShellMode>& modes, int n, double length) {
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<Complex> f(nn), fx(nn), fy(nn), fxy(nn);
  const double k0 = 2.0 * std::numbers::pi / length;
  for (const auto& m : modes) {
    if (2 * std::abs(m.mx) >= n || 2 * std::abs(m.my) >= n) throw Error("mode exceeds the sampling grid");
    const std::size_t col = static_cast<std::size_t>((m.mx % n + n) % n);
    const std::size_t row = static_cast<std::size_t>((m.my % n + n) % n);
    const std::size_t idx = row * static_cast<std::size_t>(n) + col;
    const double kx = k0 * m.mx, ky = k0 * m.my;
    f[idx] += m.coefficient;
    fx[idx] += Complex(0.0, kx) * m.coefficient;
    fy[idx] += Complex(0.0, ky) * m.coefficient;
    fxy[idx] += -kx * ky * m.coefficient;
  }
  Fft2d fft(n);
  std::vector<Complex> out(nn);
  PeriodicGrid grid(n, length);
  std::vector<Jet> jets(nn);
  double max_imag = 0.0;
  auto run = [&](std::vector<Complex>& in, double Jet::*slot) {
    fft.inverse_complex(in, out);
    for (std::size_t k = 0; k < nn; ++k) {
      jets[k].*slot = out[k].real();
      max_imag = std::max(max_imag, std::abs(out[k].imag()));
    }
  };
  run(f, &Jet::f);
  run(fx, &Jet::fx);
  run(fy, &Jet::fy);
  run(fxy, &Jet::fxy);
  return {HermiteField(grid, std::move(jets)), max_imag};
}

InitialVorticity random_shells(std::uint64_t seed, int k_max, int n_sample) {
  auto synth = synthesize_modes(random_shell_modes(seed, k_max), n_sample, 2.0 * std::numbers::pi);
  return InitialVorticity::sampled("random_shells", std::move(synth.field));
}

namespace {

// Periodized 1D Gaussian profile over the nearest image and its two neighbours,
// with the offset reduced into [-L/2, L/2) first.
struct Profile {
  double variance;
  double length;

  double reduce(double d) const { return d - length * std::floor(d / length + 0.5); }

  void eval(double d, double& g, double& dg) const {
    const double r = reduce(d);
    g = 0.0;
    dg = 0.0;
    for (int a = -1; a <= 1; ++a) {
      const double s = r + a * length;
      const double e = std::exp(-s * s / (2.0 * variance));
      g += e;
      dg += -s / variance * e;
    }
  }
  double value(double d) const {
    double g, dg;
    eval(d, g, dg);
    return g;
  }
};

// Extremum of a smooth 1D function on [0, L): dense scan, then golden-section refinement.
template <class Fn>
double refine_extremum(Fn&& fn, double length, bool maximize) {
  const int samples = 4096;
  const double h = length / samples;
  int best = 0;
  double best_val = fn(0.0);
  for (int k = 1; k < samples; ++k) {
    const double v = fn(k * h);
    if (maximize ? v > best_val : v < best_val) {
      best_val = v;
      best = k;
    }
  }
  auto score = [&](double x) { return maximize ? -fn(x) : fn(x); };
  double lo = (best - 1) * h, hi = (best + 1) * h;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = score(x1), f2 = score(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * length; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = score(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = score(x2);
    }
  }
  const double refined = fn(0.5 * (lo + hi));
  return maximize ? std::max(best_val, refined) : std::min(best_val, refined);
}

}  // namespace

InitialVorticity gaussian_pair(double variance, double separation, double length) {
  if (!(variance > 0.0) || !(length > 0.0)) throw Error("gaussian pair needs positive variance and length");
  const Profile prof{variance, length};
  const double cy = 0.5 * length;
  const double cx1 = 0.5 * length - 0.5 * separation;
  const double cx2 = 0.5 * length + 0.5 * separation;

  // omega0(x, y) = X(x) Y(y) - mean with X the sum of both blob profiles.
  auto raw_jet = [prof, cx1, cx2, cy](Vec2 p) {
    double gx1, dgx1, gx2, dgx2, gy, dgy;
    prof.eval(p.x - cx1, gx1, dgx1);
    prof.eval(p.x - cx2, gx2, dgx2);
    prof.eval(p.y - cy, gy, dgy);
    const double X = gx1 + gx2, dX = dgx1 + dgx2;
    return Jet{X * gy, dX * gy, X * dgy, dX * dgy};
  };

  const int nq = 512;
  const double h = length / nq;
  std::vector<double> rows(nq);
  parallel_for(nq, [&](int j) {
    double acc = 0.0;
    for (int i = 0; i < nq; ++i) acc += raw_jet({i * h, j * h}).f;
    rows[static_cast<std::size_t>(j)] = acc;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  const double mean = total / (static_cast<double>(nq) * nq);

  auto X = [prof, cx1, cx2](double x) { return prof.value(x - cx1) + prof.value(x - cx2); };
  auto Y = [prof, cy](double y) { return prof.value(y - cy); };
  const double xmax = refine_extremum(X, length, true), xmin = refine_extremum(X, length, false);
  const double ymax = refine_extremum(Y, length, true), ymin = refine_extremum(Y, length, false);

  auto value = [raw_jet, mean](Vec2 p) { return raw_jet(p).f - mean; };
  auto jet = [raw_jet, mean](Vec2 p) {
    Jet j = raw_jet(p);
    j.f -= mean;
    return j;
  };
  return InitialVorticity::closed_form("gaussian_pair", length, value, jet,
                                       padded_range(xmin * ymin - mean, xmax * ymax - mean, xmax * ymax));
}

}  // namespace cmm
