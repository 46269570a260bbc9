#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cmm/diagnostics.hpp"
#include "cmm/flowmap.hpp"
#include "cmm/grid.hpp"
#include "cmm/velocity.hpp"

namespace cmm {

namespace fs = std::filesystem;

/// Raw row-major float64 little-endian array plus JSON sidecar {n, L, t, quantity}.
struct FieldDump {
  int n = 0;
  double length = 0.0;
  double t = 0.0;
  std::string quantity;
  std::vector<double> values;  // n * n, row 0 = smallest y
};

/// Writes `<stem>.bin` and `<stem>.json`; returns the two paths.
std::vector<fs::path> write_field_dump(const fs::path& stem, const FieldDump& dump);
/// Accepts the stem, the .bin or the .json path.
FieldDump read_field_dump(const fs::path& path);

/// Four planes f, fx, fy, fxy back to back, plus sidecar {n, L, planes}.
std::vector<fs::path> write_hermite_field(const fs::path& stem, const HermiteField& field);
HermiteField read_hermite_field(const fs::path& path);

void write_raw(const fs::path& path, const std::vector<double>& values);
std::vector<double> read_raw(const fs::path& path, std::size_t expected);

/// Saved submap stack: each map as two Hermite fields, plus `stack.json` holding the
/// intervals, remap count and the run's key/value config.
struct SavedStack {
  MapStack stack;
  std::map<std::string, std::string> config;
  double t = 0.0;
};

std::vector<fs::path> write_stack(const fs::path& dir, const MapStack& stack, double t,
                                  const std::map<std::string, std::string>& config);
SavedStack read_stack(const fs::path& dir);

/// Velocity history for restarts: each stream function as a Hermite field, plus times.
std::vector<fs::path> write_velocity_stack(const fs::path& dir, const VelocityStack& stack);
VelocityStack read_velocity_stack(const fs::path& dir, int depth);

/// 16-bit binary PGM. Values map affinely from [min, max] to [0, 65535]; a collapsed
/// range maps every pixel to 0.
std::vector<unsigned short> pgm_levels(const std::vector<double>& values);
void write_pgm(const fs::path& path, const std::vector<double>& values, int width, int height);

void write_diagnostics_csv(const fs::path& path, const std::vector<DiagnosticsRecord>& rows);
void write_spectrum_csv(const fs::path& path, const Spectrum& spectrum);

/// Writes text, creating parent directories.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace cmm
