#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ripgate/params.hpp"

namespace ripgate::io {

struct Numerics {
  int dim_cavity = 20;
  int dim_source = 12;
  double dt_trajectory_ns = 0.005;
  double dt_master_ns = 0.01;
  double prerelax_cap_ns = 400.0;
  bool audit_halved_step = false;
  bool full_diagnostics = true;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;

  bool operator==(const Numerics&) const = default;
};

// Single declarative configuration document; defaults reproduce the first
// fixture row (delta_r/2pi = 320 MHz, kappa/2pi = 10 MHz, chi/2pi = 8 MHz,
// eps0/2pi = 796 MHz, 16 dB squeezing). Unknown keys are rejected.
struct Config {
  int schema = 1;
  SystemParams system;
  DriveParams drive;
  SqueezeParams squeeze;
  double dpa_gamma_b_mhz = 32.0;
  std::optional<double> dpa_pump_mhz;  // unset: calibrated from squeeze.db
  Numerics numerics;

  static Config defaults() { return Config{}; }
  void validate() const;

  // Resolved source parameters; calibrates the pump from squeeze.db when no
  // explicit pump is configured. The squeeze angle is shared.
  DpaParams dpa() const;

  bool operator==(const Config&) const = default;
};

Config parse_config(const nlohmann::json& doc);
Config parse_config_file(const std::string& path);
nlohmann::json emit_config(const Config& cfg);

// FNV-1a 64-bit over the canonical (sorted-key) serialization.
std::string config_hash(const Config& cfg);

struct ResultManifest {
  std::string tool_version;
  std::string config_hash;
  std::string input_config_path;
  std::vector<std::string> outputs;
  nlohmann::json diagnostics;

  // Written as `manifest.json` under dir via a temp file + rename, after all
  // other outputs exist.
  void write_atomic(const std::string& dir) const;
};

}  // namespace ripgate::io
