#include "cmm/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cmm {

using json = nlohmann::json;

namespace {

fs::path with_ext(const fs::path& p, const char* ext) {
  fs::path out = p;
  if (out.extension() == ".bin" || out.extension() == ".json") out.replace_extension();
  out += ext;
  return out;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("corrupt JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T get_field(const json& j, const char* key, const fs::path& where) {
  if (!j.contains(key)) throw Error(where.string() + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(where.string() + ": bad value for '" + key + "'");
  }
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_raw(const fs::path& path, const std::vector<double>& values) {
  ensure_parent(path);
  std::vector<std::uint64_t> words(values.size());
  std::memcpy(words.data(), values.data(), values.size() * sizeof(double));
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& w : words) w = __builtin_bswap64(w);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<double> read_raw(const fs::path& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error("cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != expected * sizeof(double)) {
    throw Error(path.string() + ": expected " + std::to_string(expected * sizeof(double)) +
                " bytes, found " + std::to_string(bytes));
  }
  in.seekg(0);
  std::vector<std::uint64_t> words(expected);
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw Error("read failed: " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& w : words) w = __builtin_bswap64(w);
  }
  std::vector<double> values(expected);
  std::memcpy(values.data(), words.data(), bytes);
  return values;
}

std::vector<fs::path> write_field_dump(const fs::path& stem, const FieldDump& dump) {
  if (dump.values.size() != static_cast<std::size_t>(dump.n) * static_cast<std::size_t>(dump.n)) {
    throw Error("field dump size does not match n");
  }
  const fs::path bin = with_ext(stem, ".bin");
  const fs::path side = with_ext(stem, ".json");
  write_raw(bin, dump.values);
  write_json(side, json{{"n", dump.n}, {"L", dump.length}, {"t", dump.t}, {"quantity", dump.quantity}});
  return {bin, side};
}

FieldDump read_field_dump(const fs::path& path) {
  const fs::path side = with_ext(path, ".json");
  const json j = read_json(side);
  FieldDump d;
  d.n = get_field<int>(j, "n", side);
  d.length = get_field<double>(j, "L", side);
  d.t = get_field<double>(j, "t", side);
  d.quantity = get_field<std::string>(j, "quantity", side);
  if (d.n < 1 || !(d.length > 0.0)) throw Error(side.string() + ": invalid n or L");
  d.values = read_raw(with_ext(path, ".bin"), static_cast<std::size_t>(d.n) * static_cast<std::size_t>(d.n));
  return d;
}

std::vector<fs::path> write_hermite_field(const fs::path& stem, const HermiteField& field) {
  const fs::path bin = with_ext(stem, ".bin");
  const fs::path side = with_ext(stem, ".json");
  std::vector<double> all;
  all.reserve(4 * field.grid().size());
  for (int c = 0; c < 4; ++c) {
    const auto p = field.plane(c);
    all.insert(all.end(), p.begin(), p.end());
  }
  write_raw(bin, all);
  write_json(side, json{{"n", field.grid().n()},
                        {"L", field.grid().length()},
                        {"planes", {"f", "fx", "fy", "fxy"}}});
  return {bin, side};
}

HermiteField read_hermite_field(const fs::path& path) {
  const fs::path side = with_ext(path, ".json");
  const json j = read_json(side);
  const int n = get_field<int>(j, "n", side);
  const double length = get_field<double>(j, "L", side);
  const auto planes = get_field<std::vector<std::string>>(j, "planes", side);
  if (planes != std::vector<std::string>{"f", "fx", "fy", "fxy"}) {
    throw Error(side.string() + ": unsupported plane layout");
  }
  const PeriodicGrid grid(n, length);
  const std::size_t m = grid.size();
  const auto all = read_raw(with_ext(path, ".bin"), 4 * m);
  std::vector<Jet> jets(m);
  for (std::size_t k = 0; k < m; ++k) jets[k] = {all[k], all[m + k], all[2 * m + k], all[3 * m + k]};
  return HermiteField(grid, std::move(jets));
}

namespace {

json write_map(const fs::path& dir, const std::string& stem, const HermiteMap& map,
               std::vector<fs::path>& files) {
  for (const auto& p : write_hermite_field(dir / (stem + "_d1"), map.d1())) files.push_back(p);
  for (const auto& p : write_hermite_field(dir / (stem + "_d2"), map.d2())) files.push_back(p);
  return json{{"d1", stem + "_d1"}, {"d2", stem + "_d2"}};
}

HermiteMap read_map(const fs::path& dir, const json& j, const fs::path& where) {
  return HermiteMap(read_hermite_field(dir / get_field<std::string>(j, "d1", where)),
                    read_hermite_field(dir / get_field<std::string>(j, "d2", where)));
}

}  // namespace

std::vector<fs::path> write_stack(const fs::path& dir, const MapStack& stack, double t,
                                  const std::map<std::string, std::string>& config) {
  fs::create_directories(dir);
  std::vector<fs::path> files;
  json submaps = json::array();
  int k = 0;
  for (const auto& s : stack.finalized()) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "submap_%04d", k++);
    json entry = write_map(dir, stem, s.map, files);
    entry["t_begin"] = s.t_begin;
    entry["t_end"] = s.t_end;
    submaps.push_back(entry);
  }
  json active = write_map(dir, "active", stack.active(), files);
  active["t_begin"] = stack.active_start();
  active["t_end"] = t;
  const fs::path manifest = dir / "stack.json";
  write_json(manifest, json{{"n_map", stack.grid().n()},
                            {"L", stack.grid().length()},
                            {"t", t},
                            {"remap_count", stack.remap_count()},
                            {"submaps", submaps},
                            {"active", active},
                            {"config", config}});
  files.push_back(manifest);
  return files;
}

SavedStack read_stack(const fs::path& path) {
  const fs::path dir = fs::is_directory(path) ? path : path.parent_path();
  const fs::path manifest = dir / "stack.json";
  const json j = read_json(manifest);
  std::vector<SubMap> finalized;
  for (const auto& s : get_field<json>(j, "submaps", manifest)) {
    finalized.push_back({read_map(dir, s, manifest), get_field<double>(s, "t_begin", manifest),
                         get_field<double>(s, "t_end", manifest)});
  }
  const json active = get_field<json>(j, "active", manifest);
  MapStack stack = MapStack::restore(std::move(finalized), read_map(dir, active, manifest),
                                     get_field<double>(active, "t_begin", manifest),
                                     get_field<int>(j, "remap_count", manifest));
  SavedStack out{std::move(stack), {}, get_field<double>(j, "t", manifest)};
  if (j.contains("config")) out.config = j.at("config").get<std::map<std::string, std::string>>();
  return out;
}

std::vector<fs::path> write_velocity_stack(const fs::path& dir, const VelocityStack& stack) {
  fs::create_directories(dir);
  std::vector<fs::path> files;
  json entries = json::array();
  for (int k = 0; k < stack.size(); ++k) {
    const std::string stem = "psi_" + std::to_string(k);
    for (const auto& p : write_hermite_field(dir / stem, stack[k].psi())) files.push_back(p);
    entries.push_back(json{{"psi", stem}, {"t", stack[k].time()}, {"mollifier", stack[k].mollifier()}});
  }
  const fs::path manifest = dir / "velocity.json";
  write_json(manifest, json{{"fields", entries}});
  files.push_back(manifest);
  return files;
}

VelocityStack read_velocity_stack(const fs::path& dir, int depth) {
  const fs::path manifest = dir / "velocity.json";
  const json j = read_json(manifest);
  VelocityStack stack(depth);
  for (const auto& e : get_field<json>(j, "fields", manifest)) {
    stack.push(std::make_shared<const VelocityField>(
        read_hermite_field(dir / get_field<std::string>(e, "psi", manifest)),
        get_field<double>(e, "t", manifest), get_field<double>(e, "mollifier", manifest)));
  }
  return stack;
}

std::vector<unsigned short> pgm_levels(const std::vector<double>& values) {
  std::vector<unsigned short> out(values.size(), 0);
  if (values.empty()) return out;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) throw Error("cannot render non-finite values");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) return out;
  const double scale = 65535.0 / (hi - lo);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double level = std::round((values[k] - lo) * scale);
    out[k] = static_cast<unsigned short>(std::clamp(level, 0.0, 65535.0));
  }
  return out;
}

void write_pgm(const fs::path& path, const std::vector<double>& values, int width, int height) {
  if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error("image size does not match the raster");
  }
  const auto levels = pgm_levels(values);
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P5\n" << width << " " << height << "\n65535\n";
  // Rows keep the raster order (row 0 = smallest y); samples are big-endian.
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const unsigned short v = levels[static_cast<std::size_t>(r) * width + c];
      const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
      out.write(bytes, 2);
    }
  }
  if (!out) throw Error("write failed: " + path.string());
}

void write_diagnostics_csv(const fs::path& path, const std::vector<DiagnosticsRecord>& rows) {
  std::ostringstream os;
  os << "t,enstrophy,energy,enstrophy_error,energy_error,det_error,remap_count\n";
  for (const auto& r : rows) {
    os << fmt(r.t) << ',' << fmt(r.enstrophy) << ',' << fmt(r.energy) << ','
       << fmt(r.enstrophy_error) << ',' << fmt(r.energy_error) << ',' << fmt(r.det_error) << ','
       << r.remap_count << '\n';
  }
  write_text(path, os.str());
}

void write_spectrum_csv(const fs::path& path, const Spectrum& spectrum) {
  std::ostringstream os;
  os << "K,E\n";
  for (int k = 0; k <= spectrum.k_max(); ++k) {
    os << k << ',' << fmt(spectrum.energy[static_cast<std::size_t>(k)]) << '\n';
  }
  write_text(path, os.str());
}

}  // namespace cmm
