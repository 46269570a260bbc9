#include "cmm/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "cmm/flowmap.hpp"

namespace cmm {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.begin();
  while (begin != s.end() && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  auto end = s.end();
  while (end != begin && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
  return std::string(begin, end);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw Error("config key '" + key + "' expects an integer, got '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error("config key '" + key + "' expects a boolean, got '" + text + "'");
}

}  // namespace

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "inf" || text == "+inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      return parse_number(text.substr(0, slash)) / parse_number(text.substr(slash + 1));
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("not a number: '" + text + "'");
  }
}

double SimConfig::domain_length() const {
  if (length > 0.0) return length;
  if (ic == "gaussian_pair") return 1.0;
  return 2.0 * std::numbers::pi;
}

double SimConfig::resolved_eps_fd() const { return eps_fd > 0.0 ? eps_fd : 1e-4 * domain_length(); }

double SimConfig::resolved_mollifier() const {
  return mollifier < 0.0 ? domain_length() / n_sample : mollifier;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error("invalid config: " + msg); };
  if (ic != "four_modes" && ic != "random_shells" && ic != "gaussian_pair" && ic != "zero") {
    fail("unknown initial condition '" + ic + "'");
  }
  if (ic == "four_modes" && length > 0.0 && std::abs(length - 2.0 * std::numbers::pi) > 1e-12) {
    fail("four_modes requires L = 2 pi");
  }
  if (ic == "random_shells" && length > 0.0 && std::abs(length - 2.0 * std::numbers::pi) > 1e-12) {
    fail("random_shells requires L = 2 pi");
  }
  auto even_grid = [&](const char* name, int n) {
    if (n < 4 || n % 2 != 0) fail(std::string(name) + " must be an even number >= 4");
  };
  even_grid("n_map", n_map);
  even_grid("n_sample", n_sample);
  even_grid("n_psi", n_psi);
  even_grid("n_eval", n_eval);
  if (n_psi < n_sample) fail("n_psi must be >= n_sample");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be non-negative");
  if (!(delta_det > 0.0)) fail("delta_det must be positive");
  if (lagrange_order < 1 || lagrange_order > 4) fail("lagrange_order must be in {1, 2, 3, 4}");
  if (k_max < 1) fail("k_max must be >= 1");
  if (ic == "random_shells" && 2 * (k_max + 1) >= ic_samples) fail("ic_samples too small for k_max");
  if (startup_corrections < 0) fail("startup_corrections must be >= 0");
  if (oversample < 1) fail("oversample must be >= 1");
  if (resolved_mollifier() > 0.25 * domain_length()) fail("mollifier too wide");
  if (!(output_interval > 0.0)) fail("output_interval must be positive");
  if (snapshot_n < 0 || (snapshot_n > 0 && snapshot_n < 2)) fail("snapshot_n must be 0 or >= 2");
  if (ic == "gaussian_pair" && !(variance > 0.0)) fail("variance must be positive");
  try {
    RKTableau::by_name(rk).validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::map<std::string, std::string> SimConfig::to_map() const {
  return {
      {"ic", ic},
      {"seed", std::to_string(seed)},
      {"k_max", std::to_string(k_max)},
      {"ic_samples", std::to_string(ic_samples)},
      {"variance", format_double(variance)},
      {"separation", format_double(separation)},
      {"L", format_double(domain_length())},
      {"n_map", std::to_string(n_map)},
      {"n_sample", std::to_string(n_sample)},
      {"n_psi", std::to_string(n_psi)},
      {"n_eval", std::to_string(n_eval)},
      {"dt", format_double(dt)},
      {"t_end", format_double(t_end)},
      {"delta_det", format_double(delta_det)},
      {"lagrange_order", std::to_string(lagrange_order)},
      {"rk", rk},
      {"startup_corrections", std::to_string(startup_corrections)},
      {"mollifier", format_double(mollifier)},
      {"oversample", std::to_string(oversample)},
      {"eps_fd", format_double(resolved_eps_fd())},
      {"output_interval", format_double(output_interval)},
      {"output_dir", output_dir},
      {"snapshot_n", std::to_string(snapshot_n)},
      {"write_spectrum", write_spectrum ? "true" : "false"},
      {"save_stack", save_stack ? "true" : "false"},
  };
}

void apply_config_value(SimConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "ic") cfg.ic = value;
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "k_max") cfg.k_max = parse_int(key, value);
  else if (key == "ic_samples") cfg.ic_samples = parse_int(key, value);
  else if (key == "variance") cfg.variance = parse_number(value);
  else if (key == "separation") cfg.separation = parse_number(value);
  else if (key == "L" || key == "length") cfg.length = parse_number(value);
  else if (key == "n_map") cfg.n_map = parse_int(key, value);
  else if (key == "n_sample") cfg.n_sample = parse_int(key, value);
  else if (key == "n_psi") cfg.n_psi = parse_int(key, value);
  else if (key == "n_eval") cfg.n_eval = parse_int(key, value);
  else if (key == "dt") cfg.dt = parse_number(value);
  else if (key == "t_end") cfg.t_end = parse_number(value);
  else if (key == "delta_det") cfg.delta_det = parse_number(value);
  else if (key == "lagrange_order" || key == "p") cfg.lagrange_order = parse_int(key, value);
  else if (key == "rk") cfg.rk = value;
  else if (key == "startup_corrections") cfg.startup_corrections = parse_int(key, value);
  else if (key == "mollifier" || key == "epsilon") cfg.mollifier = value == "auto" ? -1.0 : parse_number(value);
  else if (key == "oversample") cfg.oversample = parse_int(key, value);
  else if (key == "eps_fd") cfg.eps_fd = parse_number(value);
  else if (key == "output_interval") cfg.output_interval = parse_number(value);
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "snapshot_n") cfg.snapshot_n = parse_int(key, value);
  else if (key == "write_spectrum") cfg.write_spectrum = parse_bool(key, value);
  else if (key == "save_stack") cfg.save_stack = parse_bool(key, value);
  else throw Error("unknown config key '" + key + "'");
}

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_value(cfg, key, value);
    } catch (const Error& e) {
      throw Error("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_config(buf.str());
}

}  // namespace cmm
