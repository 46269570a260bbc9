#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "cmm/io.hpp"
#include "cmm/simulation.hpp"
#include "json.hpp"

using namespace cmm;
namespace fs = std::filesystem;

namespace {

SimConfig small() {
  SimConfig c;
  c.n_map = 16;
  c.n_sample = 32;
  c.n_psi = 32;
  c.n_eval = 32;
  c.dt = 1.0 / 8;
  c.t_end = 1.0;
  c.delta_det = 1e-3;
  c.snapshot_n = 16;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cmm_sim_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Schedule, StepsAndStride) {
  SimConfig c = small();
  c.dt = 1.0 / 32;
  c.t_end = 4.0;
  c.output_interval = 0.5;
  EXPECT_EQ(total_steps(c), 128);
  EXPECT_EQ(output_stride(c), 16);
  c.output_interval = 0.0;
  EXPECT_EQ(output_stride(c), 1);
}

TEST(Simulation, ZeroVorticityStaysIdentity) {
  SimConfig c = small();
  c.ic = "zero";
  Simulation sim(c);
  sim.diagnostics();
  sim.advance_to(8);
  EXPECT_TRUE(sim.maps().active().is_identity());
  EXPECT_EQ(sim.maps().remap_count(), 0);
  const auto r = sim.diagnostics();
  EXPECT_EQ(r.enstrophy_error, 0.0);
  EXPECT_EQ(r.energy_error, 0.0);
  EXPECT_EQ(r.t, 1.0);
}

TEST(Simulation, DeterministicAcrossRuns) {
  Simulation a(small()), b(small());
  a.advance_to(6);
  b.advance_to(6);
  for (std::size_t k = 0; k < a.maps().active().d1().jets().size(); ++k) {
    ASSERT_EQ(a.maps().active().d1().jets()[k], b.maps().active().d1().jets()[k]);
  }
  EXPECT_EQ(a.remap_times(), b.remap_times());
}

TEST(Simulation, FourModesConservesEnstrophyRoughly) {
  Simulation sim(small());
  sim.diagnostics();
  sim.advance_to(8);
  const auto r = sim.diagnostics();
  EXPECT_LT(std::abs(r.enstrophy_error), 1e-2 * r.enstrophy);
  EXPECT_GT(r.energy, 0.0);
  EXPECT_EQ(r.remap_count, sim.maps().remap_count());
}

TEST(Simulation, RestartReproducesTheRun) {
  const fs::path dir = scratch("restart");
  Simulation full(small());
  full.diagnostics();
  full.advance_to(8);
  const auto want = full.diagnostics();

  Simulation first(small());
  first.diagnostics();
  first.advance_to(3);
  first.save_checkpoint(dir);
  Simulation resumed = Simulation::restore(small(), dir);
  EXPECT_EQ(resumed.step_index(), 3);
  resumed.advance_to(8);
  const auto got = resumed.diagnostics();
  EXPECT_NEAR(got.enstrophy_error, want.enstrophy_error, 1e-12);
  EXPECT_NEAR(got.energy_error, want.energy_error, 1e-12);
  EXPECT_EQ(resumed.remap_times(), full.remap_times());
}

TEST(Simulation, BlowUpIsReported) {
  const auto bad = InitialVorticity::closed_form(
      "nan", 1.0, [](Vec2) { return std::nan(""); }, [](Vec2) { return Jet{std::nan(""), 0, 0, 0}; });
  SimConfig c = small();
  c.ic = "zero";
  Simulation sim(c, bad);
  try {
    sim.step();
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "numerical blow-up at t=0");
  }
}

TEST(RunSimulation, OutputsAndManifest) {
  SimConfig c = small();
  c.output_dir = scratch("run").string();
  c.output_interval = 0.5;
  const RunResult r = run_simulation(c);
  ASSERT_EQ(r.diagnostics.size(), 3u);
  EXPECT_EQ(r.diagnostics[0].t, 0.0);
  EXPECT_EQ(r.diagnostics[0].enstrophy_error, 0.0);
  EXPECT_EQ(r.diagnostics[2].t, 1.0);
  const fs::path out = c.output_dir;
  EXPECT_TRUE(fs::exists(out / "omega_000004.bin"));
  EXPECT_TRUE(fs::exists(out / "spectrum_000008.csv"));
  EXPECT_TRUE(fs::exists(out / "diagnostics.csv"));
  EXPECT_TRUE(fs::exists(out / "stack" / "stack.json"));
  const auto manifest = nlohmann::json::parse(read_text(out / "manifest.json"));
  EXPECT_EQ(manifest.at("steps").get<long>(), 8);
  EXPECT_FALSE(manifest.at("outputs").empty());
  EXPECT_EQ(manifest.at("config").at("n_map").get<std::string>(), "16");
  const FieldDump d = read_field_dump(out / "omega_000008");
  EXPECT_EQ(d.n, 16);
  EXPECT_EQ(d.t, 1.0);
}

TEST(RunSimulation, ZeroEndTimeWritesOneRow) {
  SimConfig c = small();
  c.t_end = 0.0;
  c.output_dir = scratch("zero_end").string();
  const RunResult r = run_simulation(c);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].enstrophy_error, 0.0);
  EXPECT_EQ(r.diagnostics[0].energy_error, 0.0);
  EXPECT_EQ(r.diagnostics[0].det_error, 0.0);
}

TEST(RunSimulation, ResumeContinuesFromCheckpoint) {
  SimConfig c = small();
  c.t_end = 0.5;
  c.output_dir = scratch("resume_a").string();
  run_simulation(c);
  SimConfig d = small();
  d.output_dir = scratch("resume_b").string();
  const RunResult resumed = run_simulation(d, {}, fs::path(c.output_dir) / "stack");
  SimConfig e = small();
  e.output_dir = scratch("resume_full").string();
  const RunResult full = run_simulation(e);
  EXPECT_NEAR(resumed.diagnostics.back().enstrophy_error, full.diagnostics.back().enstrophy_error, 1e-12);
  EXPECT_NEAR(resumed.diagnostics.back().energy_error, full.diagnostics.back().energy_error, 1e-12);
}
