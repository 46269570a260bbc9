#include "cmm/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <omp.h>

#include "cmm/biot_savart.hpp"
#include "cmm/io.hpp"
#include "json.hpp"

#ifndef CMM_VERSION
#define CMM_VERSION "unknown"
#endif

namespace cmm {

using json = nlohmann::json;

InitialVorticity make_initial_vorticity(const SimConfig& cfg) {
  cfg.validate();
  if (cfg.ic == "four_modes") return four_modes();
  if (cfg.ic == "random_shells") return random_shells(cfg.seed, cfg.k_max, cfg.ic_samples);
  if (cfg.ic == "gaussian_pair") return gaussian_pair(cfg.variance, cfg.separation, cfg.domain_length());
  if (cfg.ic == "zero") return constant_field(0.0, cfg.domain_length());
  throw Error("unknown initial condition '" + cfg.ic + "'");
}

namespace {

SimConfig validated(SimConfig cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Simulation::Simulation(SimConfig cfg) : Simulation(validated(cfg), make_initial_vorticity(cfg)) {}

Simulation::Simulation(SimConfig cfg, InitialVorticity omega0)
    : cfg_(validated(std::move(cfg))),
      omega0_(std::move(omega0)),
      tableau_(RKTableau::by_name(cfg_.rk)),
      maps_(PeriodicGrid(cfg_.n_map, omega0_.length())),
      velocities_(cfg_.lagrange_order),
      ws_(std::make_unique<SpectralWorkspace>(cfg_.n_sample, cfg_.n_psi, omega0_.length())) {}

std::shared_ptr<const VelocityField> Simulation::compute_velocity(const MapStack& maps, double t) {
  const double width = cfg_.resolved_mollifier();
  const auto omega = sample_vorticity(maps, omega0_, cfg_.n_sample, width, cfg_.oversample);
  const auto psi_hat = solve_stream(omega, cfg_.n_sample, *ws_);
  auto field = std::make_shared<const VelocityField>(build_velocity(psi_hat, cfg_.n_psi, t, *ws_, width));
  if (!field->psi().all_finite()) {
    char msg[64];
    std::snprintf(msg, sizeof msg, "numerical blow-up at t=%g", t);
    throw Error(msg);
  }
  return field;
}

const VelocityField& Simulation::current_velocity() {
  const double t = time();
  if (!velocities_.empty() && velocities_.newest().time() == t) return velocities_.newest();
  velocities_.push(compute_velocity(maps_, t));
  return velocities_.newest();
}

void Simulation::step() {
  current_velocity();
  const double t_next = static_cast<double>(step_ + 1) * cfg_.dt;
  const double eps = cfg_.resolved_eps_fd();
  HermiteMap next = advance_map(maps_.active(), velocities_, t_next, cfg_.dt, tableau_, eps);

  // While the history is shorter than the Lagrange order, the step above extrapolates
  // at reduced order. Redo it with a provisional velocity at t_next so the stages
  // interpolate instead.
  if (velocities_.size() < cfg_.lagrange_order) {
    for (int k = 0; k < cfg_.startup_corrections; ++k) {
      MapStack trial_maps = maps_;
      trial_maps.set_active(next);
      VelocityStack trial = velocities_;
      trial.push(compute_velocity(trial_maps, t_next));
      next = advance_map(maps_.active(), trial, t_next, cfg_.dt, tableau_, eps);
    }
  }

  if (!next.d1().all_finite() || !next.d2().all_finite()) {
    char msg[64];
    std::snprintf(msg, sizeof msg, "numerical blow-up at t=%g", t_next);
    throw Error(msg);
  }
  maps_.set_active(std::move(next));
  ++step_;
  if (std::isfinite(cfg_.delta_det)) {
    if (maybe_remap(maps_, cfg_.delta_det, t_next)) remap_times_.push_back(t_next);
  }
}

void Simulation::advance_to(long target) {
  while (step_ < target) step();
}

DiagnosticsRecord Simulation::diagnostics() {
  const DiagnosticsRecord* base = baseline_ ? &*baseline_ : nullptr;
  DiagnosticsRecord r = conservation(maps_, omega0_, current_velocity(), cfg_.n_eval, time(), base);
  if (!baseline_ && step_ == 0) baseline_ = r;
  return r;
}

std::vector<std::filesystem::path> Simulation::save_checkpoint(const std::filesystem::path& dir) const {
  auto files = write_stack(dir, maps_, time(), cfg_.to_map());
  for (const auto& p : write_velocity_stack(dir / "velocity", velocities_)) files.push_back(p);
  json state{{"step", step_}, {"remap_times", remap_times_}};
  if (baseline_) {
    state["baseline"] = {{"enstrophy", baseline_->enstrophy}, {"energy", baseline_->energy}};
  }
  write_text(dir / "checkpoint.json", state.dump(2) + "\n");
  files.push_back(dir / "checkpoint.json");
  return files;
}

Simulation Simulation::restore(SimConfig cfg, const std::filesystem::path& dir) {
  Simulation sim(std::move(cfg));
  SavedStack saved = read_stack(dir);
  if (!(saved.stack.grid() == sim.maps_.grid())) throw Error("checkpoint map grid does not match the config");
  json state;
  try {
    state = json::parse(read_text(dir / "checkpoint.json"));
    sim.step_ = state.at("step").get<long>();
    sim.remap_times_ = state.at("remap_times").get<std::vector<double>>();
    if (state.contains("baseline")) {
      DiagnosticsRecord b;
      b.enstrophy = state["baseline"].at("enstrophy").get<double>();
      b.energy = state["baseline"].at("energy").get<double>();
      sim.baseline_ = b;
    }
  } catch (const json::exception& e) {
    throw Error(std::string("corrupt checkpoint: ") + e.what());
  }
  sim.maps_ = std::move(saved.stack);
  sim.velocities_ = read_velocity_stack(dir / "velocity", sim.cfg_.lagrange_order);
  return sim;
}

long total_steps(const SimConfig& cfg) { return std::lround(cfg.t_end / cfg.dt); }

long output_stride(const SimConfig& cfg) { return std::max(1L, std::lround(cfg.output_interval / cfg.dt)); }

RunResult run_simulation(const SimConfig& cfg, const ProgressFn& progress,
                         const std::filesystem::path& resume_dir) {
  const auto start = std::chrono::steady_clock::now();
  Simulation sim = resume_dir.empty() ? Simulation(cfg) : Simulation::restore(cfg, resume_dir);
  const std::filesystem::path out = cfg.output_dir;
  std::filesystem::create_directories(out);

  RunResult result;
  json outputs = json::array();
  auto record_files = [&](const std::vector<std::filesystem::path>& files, long step) {
    for (const auto& f : files) {
      result.outputs.push_back(f);
      outputs.push_back({{"path", std::filesystem::relative(f, out).generic_string()},
                         {"step", step},
                         {"t", static_cast<double>(step) * cfg.dt}});
    }
  };

  if (sim.step_index() == 0) sim.diagnostics();

  auto emit = [&]() {
    const long step = sim.step_index();
    DiagnosticsRecord r = sim.diagnostics();
    result.diagnostics.push_back(r);
    if (progress) progress(r);
    char stem[32];
    std::snprintf(stem, sizeof stem, "%06ld", step);
    if (cfg.snapshot_n > 0) {
      FieldDump dump{cfg.snapshot_n, cfg.domain_length(), sim.time(), "vorticity",
                     vorticity_grid(sim.maps(), sim.omega0(), cfg.snapshot_n)};
      record_files(write_field_dump(out / (std::string("omega_") + stem), dump), step);
    }
    if (cfg.write_spectrum) {
      const Spectrum s = vorticity_spectrum(sim.maps(), sim.omega0(), cfg.n_eval, sim.workspace());
      const auto path = out / (std::string("spectrum_") + stem + ".csv");
      write_spectrum_csv(path, s);
      record_files({path}, step);
    }
  };

  const long n_steps = total_steps(cfg);
  const long stride = output_stride(cfg);
  if (sim.step_index() % stride == 0 || sim.step_index() == n_steps) emit();
  while (sim.step_index() < n_steps) {
    sim.step();
    if (sim.step_index() % stride == 0 || sim.step_index() == n_steps) emit();
  }

  const auto csv = out / "diagnostics.csv";
  write_diagnostics_csv(csv, result.diagnostics);
  record_files({csv}, sim.step_index());
  if (cfg.save_stack) record_files(sim.save_checkpoint(out / "stack"), sim.step_index());

  result.remap_times = sim.remap_times();
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest{{"version", CMM_VERSION},
                {"config", cfg.to_map()},
                {"threads", omp_get_max_threads()},
                {"wall_seconds", result.wall_seconds},
                {"steps", sim.step_index()},
                {"remap_count", sim.maps().remap_count()},
                {"remap_times", result.remap_times},
                {"outputs", outputs}};
  if (!resume_dir.empty()) manifest["resumed_from"] = resume_dir.generic_string();
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  result.outputs.push_back(out / "manifest.json");
  return result;
}

}  // namespace cmm
