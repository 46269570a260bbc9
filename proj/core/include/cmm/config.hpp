#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace cmm {

/// Run configuration. Loaded from a flat `key = value` text file with `#` comments.
struct SimConfig {
  std::string ic = "four_modes";  // four_modes | random_shells | gaussian_pair | zero
  std::uint64_t seed = 0;
  int k_max = 32;                 // random_shells shells
  int ic_samples = 512;           // random_shells sampling grid
  double variance = 0.07;         // gaussian_pair
  double separation = 0.3;        // gaussian_pair
  double length = 0.0;            // 0 selects the initial condition's natural domain

  int n_map = 128;
  int n_sample = 512;
  int n_psi = 512;
  int n_eval = 2048;

  double dt = 1.0 / 32.0;
  double t_end = 1.0;
  double delta_det = 1e-4;  // inf disables remapping
  int lagrange_order = 3;
  std::string rk = "rk3";
  int startup_corrections = 2;  // corrector passes while the velocity history is short
  double mollifier = 0.0;   // hat half-width; negative selects the sampling spacing
  int oversample = 2;
  double eps_fd = 0.0;      // 0 selects 1e-4 * L

  double output_interval = 1.0;
  std::string output_dir = "cmm_out";
  int snapshot_n = 256;     // raster size of vorticity dumps; 0 disables them
  bool write_spectrum = true;
  bool save_stack = true;

  /// Domain length after resolving the initial-condition default.
  double domain_length() const;
  double resolved_eps_fd() const;
  double resolved_mollifier() const;

  /// Throws Error with a descriptive message on any violated constraint.
  void validate() const;

  std::map<std::string, std::string> to_map() const;
};

/// Parses `key = value` lines; unknown keys and malformed values are errors.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

/// Applies one key/value pair onto an existing config.
void apply_config_value(SimConfig& cfg, const std::string& key, const std::string& value);

/// Accepts plain numbers, `a/b` fractions and `inf`.
double parse_number(const std::string& text);

}  // namespace cmm
