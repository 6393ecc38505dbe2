#include "ripgate/config.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ripgate/dpa.hpp"
#include "ripgate/errors.hpp"
#include "ripgate/version.hpp"

namespace ripgate::io {

using nlohmann::json;

void Numerics::validate() const {
  if (dim_cavity < 2) throw SchemaError("numerics.dim_cavity", "must be >= 2");
  if (dim_source < 1) throw SchemaError("numerics.dim_source", "must be >= 1");
  if (!(dt_trajectory_ns > 0)) throw SchemaError("numerics.dt_trajectory_ns", "must be > 0");
  if (!(dt_master_ns > 0)) throw SchemaError("numerics.dt_master_ns", "must be > 0");
  if (!(prerelax_cap_ns >= 0)) throw SchemaError("numerics.prerelax_cap_ns", "must be >= 0");
  if (threads < 0) throw SchemaError("numerics.threads", "must be >= 0");
}

void Config::validate() const {
  if (schema != 1) throw SchemaError("schema", "unsupported schema version");
  system.validate();
  drive.validate();
  squeeze.validate();
  numerics.validate();
  if (dpa_gamma_b_mhz <= 0) throw SchemaError("dpa.gamma_b_mhz", "must be > 0");
  if (dpa_pump_mhz) {
    DpaParams d;
    d.gamma_b_mhz = dpa_gamma_b_mhz;
    d.pump_mhz = *dpa_pump_mhz;
    d.theta_rad = squeeze.theta_rad;
    d.validate();
  }
}

DpaParams Config::dpa() const {
  if (dpa_pump_mhz) {
    DpaParams d;
    d.gamma_b_mhz = dpa_gamma_b_mhz;
    d.pump_mhz = *dpa_pump_mhz;
    d.theta_rad = squeeze.theta_rad;
    d.validate();
    return d;
  }
  return ripgate::dpa::calibrate_pump(squeeze.db, dpa_gamma_b_mhz, squeeze.theta_rad);
}

namespace {

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw SchemaError(path + "." + item.key(), "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw SchemaError(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw SchemaError(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

json section(const json& doc, const char* key) {
  if (!doc.contains(key)) return json::object();
  if (!doc.at(key).is_object()) throw SchemaError(key, "expected an object");
  return doc.at(key);
}

}  // namespace

Config parse_config(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "configuration must be a JSON object");
  require_keys(doc, "", {"schema", "system", "drive", "squeeze", "dpa", "numerics"});

  Config cfg;
  cfg.schema = get_int(doc, "", "schema", 1);

  const json sys = section(doc, "system");
  require_keys(sys, "system", {"nu_r_mhz", "nu_a_mhz", "g_mhz", "kappa_mhz", "delta_r_mhz"});
  cfg.system.nu_r_mhz = get_number(sys, "system", "nu_r_mhz", cfg.system.nu_r_mhz);
  cfg.system.nu_a_mhz = get_number(sys, "system", "nu_a_mhz", cfg.system.nu_a_mhz);
  cfg.system.g_mhz = get_number(sys, "system", "g_mhz", cfg.system.g_mhz);
  cfg.system.kappa_mhz = get_number(sys, "system", "kappa_mhz", cfg.system.kappa_mhz);
  cfg.system.delta_r_mhz = get_number(sys, "system", "delta_r_mhz", cfg.system.delta_r_mhz);

  const json drv = section(doc, "drive");
  require_keys(drv, "drive", {"eps0_mhz", "tau_ns"});
  cfg.drive.eps0_mhz = get_number(drv, "drive", "eps0_mhz", cfg.drive.eps0_mhz);
  cfg.drive.tau_ns = get_number(drv, "drive", "tau_ns", cfg.drive.tau_ns);

  const json sqz = section(doc, "squeeze");
  require_keys(sqz, "squeeze", {"db", "theta_rad", "gamma_bw_mhz"});
  cfg.squeeze.db = get_number(sqz, "squeeze", "db", cfg.squeeze.db);
  cfg.squeeze.theta_rad = get_number(sqz, "squeeze", "theta_rad", cfg.squeeze.theta_rad);
  cfg.squeeze.gamma_bw_mhz = get_number(sqz, "squeeze", "gamma_bw_mhz", cfg.squeeze.gamma_bw_mhz);

  const json dpa_s = section(doc, "dpa");
  require_keys(dpa_s, "dpa", {"gamma_b_mhz", "pump_mhz"});
  cfg.dpa_gamma_b_mhz = get_number(dpa_s, "dpa", "gamma_b_mhz", cfg.dpa_gamma_b_mhz);
  if (dpa_s.contains("pump_mhz") && !dpa_s.at("pump_mhz").is_null()) {
    if (!dpa_s.at("pump_mhz").is_number()) throw SchemaError("dpa.pump_mhz", "expected a number or null");
    cfg.dpa_pump_mhz = dpa_s.at("pump_mhz").get<double>();
  }

  const json num = section(doc, "numerics");
  require_keys(num, "numerics",
               {"dim_cavity", "dim_source", "dt_trajectory_ns", "dt_master_ns", "prerelax_cap_ns",
                "audit_halved_step", "full_diagnostics", "threads"});
  cfg.numerics.dim_cavity = get_int(num, "numerics", "dim_cavity", cfg.numerics.dim_cavity);
  cfg.numerics.dim_source = get_int(num, "numerics", "dim_source", cfg.numerics.dim_source);
  cfg.numerics.dt_trajectory_ns =
      get_number(num, "numerics", "dt_trajectory_ns", cfg.numerics.dt_trajectory_ns);
  cfg.numerics.dt_master_ns = get_number(num, "numerics", "dt_master_ns", cfg.numerics.dt_master_ns);
  cfg.numerics.prerelax_cap_ns =
      get_number(num, "numerics", "prerelax_cap_ns", cfg.numerics.prerelax_cap_ns);
  cfg.numerics.audit_halved_step =
      get_bool(num, "numerics", "audit_halved_step", cfg.numerics.audit_halved_step);
  cfg.numerics.full_diagnostics =
      get_bool(num, "numerics", "full_diagnostics", cfg.numerics.full_diagnostics);
  cfg.numerics.threads = get_int(num, "numerics", "threads", cfg.numerics.threads);

  cfg.validate();
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open configuration file");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("JSON parse error: ") + e.what());
  }
  return parse_config(doc);
}

json emit_config(const Config& cfg) {
  json doc;
  doc["schema"] = cfg.schema;
  doc["system"] = {{"nu_r_mhz", cfg.system.nu_r_mhz},
                   {"nu_a_mhz", cfg.system.nu_a_mhz},
                   {"g_mhz", cfg.system.g_mhz},
                   {"kappa_mhz", cfg.system.kappa_mhz},
                   {"delta_r_mhz", cfg.system.delta_r_mhz}};
  doc["drive"] = {{"eps0_mhz", cfg.drive.eps0_mhz}, {"tau_ns", cfg.drive.tau_ns}};
  doc["squeeze"] = {{"db", cfg.squeeze.db},
                    {"theta_rad", cfg.squeeze.theta_rad},
                    {"gamma_bw_mhz", cfg.squeeze.gamma_bw_mhz}};
  doc["dpa"] = {{"gamma_b_mhz", cfg.dpa_gamma_b_mhz},
                {"pump_mhz", cfg.dpa_pump_mhz ? json(*cfg.dpa_pump_mhz) : json(nullptr)}};
  doc["numerics"] = {{"dim_cavity", cfg.numerics.dim_cavity},
                     {"dim_source", cfg.numerics.dim_source},
                     {"dt_trajectory_ns", cfg.numerics.dt_trajectory_ns},
                     {"dt_master_ns", cfg.numerics.dt_master_ns},
                     {"prerelax_cap_ns", cfg.numerics.prerelax_cap_ns},
                     {"audit_halved_step", cfg.numerics.audit_halved_step},
                     {"full_diagnostics", cfg.numerics.full_diagnostics},
                     {"threads", cfg.numerics.threads}};
  return doc;
}

std::string config_hash(const Config& cfg) {
  const std::string dump = emit_config(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

void ResultManifest::write_atomic(const std::string& dir) const {
  json doc;
  doc["tool_version"] = tool_version;
  doc["config_hash"] = config_hash;
  doc["input_config_path"] = input_config_path;
  doc["outputs"] = outputs;
  doc["diagnostics"] = diagnostics;

  namespace fs = std::filesystem;
  const fs::path target = fs::path(dir) / "manifest.json";
  const fs::path tmp = fs::path(dir) / ".manifest.json.tmp";
  {
    std::ofstream out(tmp);
    out << doc.dump(2) << '\n';
  }
  fs::rename(tmp, target);
}

}  // namespace ripgate::io
