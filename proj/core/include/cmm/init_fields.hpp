#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmm/grid.hpp"
#include "cmm/spectral.hpp"

namespace cmm {

struct ValueRange {
  double min;
  double max;
};

/// The initial vorticity omega0; every later vorticity value is omega0 composed with
/// the backward map. Either a closed-form function or a Hermite-sampled field.
class InitialVorticity {
 public:
  enum class Kind { closed_form, hermite_sampled };

  using ValueFn = std::function<double(Vec2)>;
  using JetFn = std::function<Jet(Vec2)>;

  static InitialVorticity closed_form(std::string name, double length, ValueFn value, JetFn jet,
                                      std::optional<ValueRange> range = std::nullopt);
  static InitialVorticity sampled(std::string name, HermiteField field);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double length() const { return length_; }

  double operator()(Vec2 p) const { return field_ ? hermite_eval(*field_, p) : value_(p); }
  Jet jet(Vec2 p) const;

  /// Analytic extrema of closed-form fields, widened by a few rounding units so that
  /// every evaluated value lies inside.
  const std::optional<ValueRange>& range() const { return range_; }

  /// Backing field of a hermite_sampled initial condition, null otherwise.
  const HermiteField* field() const { return field_.get(); }

 private:
  InitialVorticity() = default;

  Kind kind_ = Kind::closed_form;
  std::string name_;
  double length_ = 0.0;
  ValueFn value_;
  JetFn jet_;
  std::shared_ptr<const HermiteField> field_;
  std::optional<ValueRange> range_;
};

/// cos x + cos y + 0.6 cos 2x + 0.2 cos 3x on [0, 2 pi)^2.
InitialVorticity four_modes();

/// omega0 = c everywhere (mean not removed; used for filter and pipeline checks).
InitialVorticity constant_field(double value, double length);

/// One Fourier mode of a random-shell spectrum; (mx, my) integer mode indices.
struct ShellMode {
  int mx;
  int my;
  Complex coefficient;
};

/// Hermitian spectrum: each shell K in [1, K_max] holds the modes with |m| in [K, K+1),
/// all of modulus 2 K^{7/2} exp(-K^2/4) / N(K), uniformly random phases, and
/// phase(-m) = -phase(m). Phases come from std::mt19937_64 seeded with `seed`.
std::vector<ShellMode> random_shell_modes(std::uint64_t seed, int k_max);

/// Total modulus prescribed for shell K: 2 K^{7/2} exp(-K^2/4).
double shell_total_modulus(int k);

struct SynthesizedField {
  HermiteField field;
  double max_imaginary;  // largest |Im| of the complex synthesis
};

/// Synthesizes f and its exact spectral derivatives at the nodes of an n x n grid.
SynthesizedField synthesize_modes(const std::vector<ShellMode>& modes, int n, double length);

/// Random-shell initial condition sampled as a Hermite field on an n_sample grid (L = 2 pi).
InitialVorticity random_shells(std::uint64_t seed, int k_max = 32, int n_sample = 512);

/// Two same-sign unit Gaussians exp(-r^2 / (2 variance)) centered at (0.5 +- separation/2, 0.5)
/// in units of L, periodized over the 3x3 nearest images, then mean-subtracted.
InitialVorticity gaussian_pair(double variance = 0.07, double separation = 0.3, double length = 1.0);

}  // namespace cmm
