#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmm/config.hpp"
#include "cmm/convergence.hpp"
#include "cmm/diagnostics.hpp"
#include "cmm/io.hpp"
#include "cmm/parallel.hpp"
#include "cmm/simulation.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

bool is_stack(const fs::path& p) {
  return fs::is_directory(p) ? fs::exists(p / "stack.json") : p.filename() == "stack.json";
}

cmm::Window parse_window(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) v.push_back(cmm::parse_number(item));
  if (v.size() != 4) throw cmm::Error("--window expects x0,y0,x1,y1");
  return {v[0], v[1], v[2], v[3]};
}

cmm::SimConfig config_from_stack(const cmm::SavedStack& saved) {
  cmm::SimConfig cfg;
  for (const auto& [k, v] : saved.config) {
    if (k == "eps_fd" || k == "output_dir") continue;
    cmm::apply_config_value(cfg, k, v);
  }
  return cfg;
}

// Nearest-node lookup into a periodic raster.
std::vector<double> resample_dump(const cmm::FieldDump& d, const cmm::Window& w, int n_px) {
  const cmm::PeriodicGrid grid(d.n, d.length);
  const double hx = (w.x1 - w.x0) / n_px;
  const double hy = (w.y1 - w.y0) / n_px;
  std::vector<double> out(static_cast<std::size_t>(n_px) * n_px);
  for (int j = 0; j < n_px; ++j) {
    const int r = static_cast<int>(std::lround(grid.wrap(w.y0 + j * hy) / grid.spacing()));
    for (int i = 0; i < n_px; ++i) {
      const int c = static_cast<int>(std::lround(grid.wrap(w.x0 + i * hx) / grid.spacing()));
      out[static_cast<std::size_t>(j) * n_px + i] = d.values[grid.index(c, r)];
    }
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& resume, bool quiet) {
  const cmm::SimConfig cfg = cmm::load_config(config_path);
  cfg.validate();
  auto progress = [&](const cmm::DiagnosticsRecord& r) {
    if (quiet) return;
    std::printf("t=%-8g enstrophy_error=% .3e energy_error=% .3e det_error=%.3e remaps=%d\n", r.t,
                r.enstrophy_error, r.energy_error, r.det_error, r.remap_count);
    std::fflush(stdout);
  };
  const auto result = cmm::run_simulation(cfg, progress, resume);
  if (!quiet) {
    std::printf("done: %zu output files in %s, %.1f s\n", result.outputs.size(), cfg.output_dir.c_str(),
                result.wall_seconds);
  }
  return 0;
}

int cmd_render(const fs::path& artifact, const std::string& window_text, int px, fs::path out) {
  std::vector<double> raster;
  cmm::Window window{};
  double t = 0.0;
  if (is_stack(artifact)) {
    cmm::SavedStack saved = cmm::read_stack(artifact);
    const cmm::InitialVorticity omega0 = cmm::make_initial_vorticity(config_from_stack(saved));
    const double length = omega0.length();
    window = window_text.empty() ? cmm::Window{0, 0, length, length} : parse_window(window_text);
    if (px == 0) px = 512;
    raster = cmm::zoom_render(saved.stack, omega0, window, px);
    t = saved.t;
    if (out.empty()) out = (fs::is_directory(artifact) ? artifact : artifact.parent_path()) / "render.pgm";
  } else {
    const cmm::FieldDump dump = cmm::read_field_dump(artifact);
    window = window_text.empty() ? cmm::Window{0, 0, dump.length, dump.length} : parse_window(window_text);
    if (px == 0) px = dump.n;
    if (px < 2 || !(window.x1 > window.x0) || !(window.y1 > window.y0)) throw cmm::Error("degenerate render request");
    raster = resample_dump(dump, window, px);
    t = dump.t;
    if (out.empty()) {
      out = artifact;
      out.replace_extension(".pgm");
    }
  }
  cmm::write_pgm(out, raster, px, px);
  double lo = raster.front(), hi = raster.front();
  for (double v : raster) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  fs::path side = out;
  side.replace_extension(".json");
  cmm::write_text(side, json{{"window", {window.x0, window.y0, window.x1, window.y1}},
                             {"px", px},
                             {"t", t},
                             {"min", lo},
                             {"max", hi},
                             {"source", artifact.generic_string()}}
                            .dump(2) + "\n");
  std::printf("%s\n", out.c_str());
  return 0;
}

int cmd_spectrum(const fs::path& artifact, int n, const fs::path& out, bool fit) {
  cmm::Spectrum s;
  if (is_stack(artifact)) {
    cmm::SavedStack saved = cmm::read_stack(artifact);
    const cmm::SimConfig cfg = config_from_stack(saved);
    const cmm::InitialVorticity omega0 = cmm::make_initial_vorticity(cfg);
    if (n == 0) n = cfg.n_eval;
    cmm::SpectralWorkspace ws(n, n, omega0.length());
    s = cmm::vorticity_spectrum(saved.stack, omega0, n, ws);
  } else {
    const cmm::FieldDump dump = cmm::read_field_dump(artifact);
    cmm::Fft2d fft(dump.n);
    s = cmm::spectrum_from_samples(dump.values, dump.n, dump.length, fft);
  }
  if (out.empty()) {
    std::printf("K,E\n");
    for (int k = 0; k <= s.k_max(); ++k) std::printf("%d,%.17g\n", k, s.energy[static_cast<std::size_t>(k)]);
  } else {
    cmm::write_spectrum_csv(out, s);
  }
  if (fit) {
    const auto w = cmm::default_fit_window(s);
    const auto r = cmm::fit_radius(s, w.k_lo, w.k_hi);
    std::fprintf(stderr, "fit K in [%d, %d]: delta=%.6g alpha=%.6g shells=%d\n", w.k_lo, w.k_hi, r.delta,
                 r.alpha, r.shells);
  }
  return 0;
}

int cmd_converge(const std::string& config_path, const std::string& mode, int levels) {
  const cmm::SimConfig cfg = cmm::load_config(config_path);
  cfg.validate();
  const auto report = cmm::self_convergence(cfg, cmm::parse_refinement(mode), levels);
  std::printf("resolution,map_error,vorticity_error,enstrophy_error,energy_error\n");
  for (const auto& l : report.levels) {
    std::printf("%.10g,%.6e,%.6e,%.6e,%.6e\n", l.resolution, l.map_error, l.vorticity_error, l.enstrophy_error,
                l.energy_error);
  }
  std::printf("order,%.3f,%.3f,%.3f,%.3f\n", report.map_order, report.vorticity_order, report.enstrophy_order,
              report.energy_order);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  cmm::configure_threads_from_env();
  CLI::App app{"Characteristic mapping solver for 2D incompressible Euler flow on the torus"};
  app.require_subcommand(1);

  std::string config_path, resume, artifact, window, mode = "dt", out;
  bool quiet = false, fit = false;
  int px = 0, levels = 4, n = 0;

  auto* run = app.add_subcommand("run", "Run a simulation from a config file");
  run->add_option("config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
  run->add_option("--resume", resume, "checkpoint directory to continue from");
  run->add_flag("-q,--quiet", quiet, "suppress progress output");

  auto* render = app.add_subcommand("render", "Render a field dump or saved stack to a 16-bit PGM");
  render->add_option("artifact", artifact, "field dump (.bin/.json) or stack directory")->required();
  render->add_option("--window", window, "x0,y0,x1,y1 (default: whole domain)");
  render->add_option("--px", px, "pixels per side");
  render->add_option("-o,--output", out, "output .pgm path");

  auto* spectrum = app.add_subcommand("spectrum", "Shell enstrophy spectrum as K,E CSV");
  spectrum->add_option("artifact", artifact, "field dump or stack directory")->required();
  spectrum->add_option("--n", n, "evaluation grid for stacks (default: the run's n_eval)");
  spectrum->add_option("-o,--output", out, "output CSV path (default: stdout)");
  spectrum->add_flag("--fit", fit, "report the radius-of-analyticity fit on stderr");

  auto* converge = app.add_subcommand("converge", "Self-convergence study");
  converge->add_option("config", config_path, "base config")->required()->check(CLI::ExistingFile);
  converge->add_option("--mode", mode, "dt or dx")->check(CLI::IsMember({"dt", "dx"}));
  converge->add_option("--levels", levels, "number of levels (>= 3)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, resume, quiet);
    if (*render) return cmd_render(artifact, window, px, out);
    if (*spectrum) return cmd_spectrum(artifact, n, out, fit);
    if (*converge) return cmd_converge(config_path, mode, levels);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
