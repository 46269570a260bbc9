#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmm/config.hpp"
#include "cmm/diagnostics.hpp"
#include "cmm/flowmap.hpp"
#include "cmm/init_fields.hpp"
#include "cmm/spectral.hpp"
#include "cmm/velocity.hpp"

namespace cmm {

/// Builds omega0 for the configured initial condition.
InitialVorticity make_initial_vorticity(const SimConfig& cfg);

/// Driver state: map stack, velocity history and step counter. Time is step * dt.
class Simulation {
 public:
  explicit Simulation(SimConfig cfg);
  Simulation(SimConfig cfg, InitialVorticity omega0);

  const SimConfig& config() const { return cfg_; }
  const InitialVorticity& omega0() const { return omega0_; }
  const MapStack& maps() const { return maps_; }
  const VelocityStack& velocities() const { return velocities_; }
  long step_index() const { return step_; }
  double time() const { return static_cast<double>(step_) * cfg_.dt; }
  const std::vector<double>& remap_times() const { return remap_times_; }
  SpectralWorkspace& workspace() { return *ws_; }

  /// Velocity at the current time, computed from the current maps on first request.
  const VelocityField& current_velocity();

  /// Advances one time step: velocity at t_n, evolve-project map update, remap check.
  void step();

  /// Steps until step_index() == target.
  void advance_to(long target);

  /// Conservation record at the current time. The first call at step 0 fixes the
  /// baseline that later errors are measured against.
  DiagnosticsRecord diagnostics();
  const std::optional<DiagnosticsRecord>& baseline() const { return baseline_; }

  /// Writes everything needed to resume: map stack, velocity history, step, baseline.
  std::vector<std::filesystem::path> save_checkpoint(const std::filesystem::path& dir) const;
  static Simulation restore(SimConfig cfg, const std::filesystem::path& dir);

 private:
  std::shared_ptr<const VelocityField> compute_velocity(const MapStack& maps, double t);

  SimConfig cfg_;
  InitialVorticity omega0_;
  RKTableau tableau_;
  MapStack maps_;
  VelocityStack velocities_;
  std::unique_ptr<SpectralWorkspace> ws_;
  long step_ = 0;
  std::vector<double> remap_times_;
  std::optional<DiagnosticsRecord> baseline_;
};

/// Number of steps needed to reach t_end, and the output cadence in steps.
long total_steps(const SimConfig& cfg);
long output_stride(const SimConfig& cfg);

struct RunResult {
  std::vector<DiagnosticsRecord> diagnostics;
  std::vector<double> remap_times;
  std::vector<std::filesystem::path> outputs;
  double wall_seconds = 0.0;
};

using ProgressFn = std::function<void(const DiagnosticsRecord&)>;

/// Full run from t = 0 (or from `resume_dir` when given) to t_end, writing the
/// configured outputs and a manifest into cfg.output_dir.
RunResult run_simulation(const SimConfig& cfg, const ProgressFn& progress = {},
                         const std::filesystem::path& resume_dir = {});

}  // namespace cmm
