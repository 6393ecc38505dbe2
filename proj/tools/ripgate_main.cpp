// Command-line front end: calibration, trajectory export, analytic and
// cascaded sweeps, and the fixture-table regression. Exit codes: 0 success,
// 1 tolerance breach, 2 configuration or usage error.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ripgate/channel.hpp"
#include "ripgate/config.hpp"
#include "ripgate/dpa.hpp"
#include "ripgate/errors.hpp"
#include "ripgate/experiments.hpp"
#include "ripgate/trajectory.hpp"
#include "ripgate/version.hpp"

namespace fs = std::filesystem;
using namespace ripgate;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string engine = "";
  std::string grid;
};

io::Config load_config(const CommonArgs& args) {
  io::Config cfg = args.config_path.empty() ? io::Config::defaults()
                                            : io::parse_config_file(args.config_path);
  cfg.validate();
  for (const std::string& w : cfg.system.warnings()) {
    std::cerr << "warning: " << w << '\n';
  }
  return cfg;
}

exp::Engine parse_engine(const std::string& name, exp::Engine fallback) {
  if (name.empty()) return fallback;
  if (name == "analytic") return exp::Engine::analytic;
  if (name == "cascaded") return exp::Engine::cascaded;
  if (name == "both") return exp::Engine::both;
  throw SchemaError("--engine", "must be analytic|cascaded|both");
}

// Grid spec "axis:start:stop:step" with axis in {db, theta, delta_r}.
std::pair<exp::SweepAxis, std::vector<double>> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) throw SchemaError("--grid", "expected axis:start:stop:step");

  exp::SweepAxis axis;
  if (parts[0] == "db") {
    axis = exp::SweepAxis::db;
  } else if (parts[0] == "theta") {
    axis = exp::SweepAxis::theta;
  } else if (parts[0] == "delta_r") {
    axis = exp::SweepAxis::delta_r;
  } else {
    throw SchemaError("--grid", "axis must be db|theta|delta_r");
  }
  const double start = std::stod(parts[1]);
  const double stop = std::stod(parts[2]);
  const double step = std::stod(parts[3]);
  if (!(step > 0) || stop < start) throw SchemaError("--grid", "need stop >= start and step > 0");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-9 * std::max(1.0, std::abs(stop)); v += step) {
    grid.push_back(v);
  }
  return {axis, grid};
}

io::ResultManifest make_manifest(const io::Config& cfg, const CommonArgs& args) {
  io::ResultManifest m;
  m.tool_version = kVersion;
  m.config_hash = io::config_hash(cfg);
  m.input_config_path = args.config_path;
  return m;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

int cmd_calibrate(const CommonArgs& args) {
  io::Config cfg = load_config(args);
  fs::create_directories(args.out_dir);

  const double eps0 = exp::calibrate_drive(cfg.system, cfg.drive.tau_ns, exp::kTargetArea,
                                           cfg.numerics.dt_trajectory_ns);
  cfg.drive.eps0_mhz = eps0;
  const DpaParams dpa_params = cfg.dpa();
  DriveParams drive = cfg.drive;
  const double area = traj::parity_phase(cfg.system, drive, cfg.numerics.dt_trajectory_ns);

  nlohmann::json doc = {{"eps0_mhz", eps0},
                        {"zz_area_rad", area},
                        {"target_area_rad", exp::kTargetArea},
                        {"pump_mhz", dpa_params.pump_mhz},
                        {"gamma_b_mhz", dpa_params.gamma_b_mhz},
                        {"resolved_config", io::emit_config(cfg)}};
  write_text(fs::path(args.out_dir) / "calibration.json", doc.dump(2) + "\n");
  std::cout << "calibrated eps0/2pi = " << eps0 << " MHz (area " << area << " rad), pump/2pi = "
            << dpa_params.pump_mhz << " MHz\n";

  io::ResultManifest m = make_manifest(cfg, args);
  m.outputs = {"calibration.json"};
  m.diagnostics = {{"zz_area_rad", area}};
  m.write_atomic(args.out_dir);
  return 0;
}

int cmd_trajectory(const CommonArgs& args) {
  io::Config cfg = load_config(args);
  fs::create_directories(args.out_dir);

  traj::PropagateOptions opt;
  opt.dt_ns = cfg.numerics.dt_trajectory_ns;
  const traj::FieldTrajectory trajectory = traj::propagate_all(cfg.system, cfg.drive, opt);
  {
    std::ofstream out(fs::path(args.out_dir) / "trajectory.csv");
    traj::write_csv(out, trajectory);
  }
  const auto& s0 = trajectory.sector(0);
  std::cout << "max |alpha|^2 = " << s0.max_abs2() << ", closure ratio = " << s0.closure_ratio()
            << ", ZZ area = " << s0.zz_area << " rad\n";

  io::ResultManifest m = make_manifest(cfg, args);
  m.outputs = {"trajectory.csv"};
  m.diagnostics = {{"max_abs2_alpha", s0.max_abs2()},
                   {"closure_ratio", s0.closure_ratio()},
                   {"zz_area_rad", s0.zz_area}};
  m.write_atomic(args.out_dir);
  return 0;
}

int run_sweep_command(const CommonArgs& args, exp::Engine default_engine,
                      const std::string& default_grid) {
  io::Config cfg = load_config(args);
  fs::create_directories(args.out_dir);

  exp::SweepSpec spec;
  spec.base = cfg;
  spec.engine = parse_engine(args.engine, default_engine);
  const std::string grid_spec = args.grid.empty() ? default_grid : args.grid;
  if (grid_spec.empty()) {
    // Single point at the configured parameters.
    spec.axis = exp::SweepAxis::db;
    spec.grid = {cfg.squeeze.db};
  } else {
    auto [axis, grid] = parse_grid(grid_spec);
    spec.axis = axis;
    spec.grid = grid;
  }

  const std::vector<exp::RunRecord> records = exp::sweep(spec);

  std::vector<std::string> outputs;
  const auto dump_engine = [&](const char* engine) {
    std::vector<exp::RunRecord> filtered;
    for (const auto& r : records) {
      if (r.engine == engine) filtered.push_back(r);
    }
    if (filtered.empty()) return;
    const std::string name = std::string("sweep_") + engine + ".csv";
    std::ofstream out(fs::path(args.out_dir) / name);
    exp::write_sweep_csv(out, filtered);
    outputs.push_back(name);
  };
  dump_engine("analytic");
  dump_engine("cascaded");
  write_text(fs::path(args.out_dir) / "records.json", exp::records_json(records).dump(2) + "\n");
  outputs.push_back("records.json");

  int failures = 0;
  for (const auto& r : records) {
    if (!r.failure.empty()) {
      ++failures;
      std::cerr << "point failed (" << r.engine << ", db=" << r.db << ", theta=" << r.theta_rad
                << "): " << r.failure << '\n';
    }
  }
  std::cout << records.size() - failures << "/" << records.size() << " points completed\n";

  io::ResultManifest m = make_manifest(cfg, args);
  m.outputs = outputs;
  m.diagnostics = {{"points", records.size()}, {"failures", failures}};
  m.write_atomic(args.out_dir);
  return failures == 0 ? 0 : 1;
}

int cmd_table1(const CommonArgs& args) {
  io::Config cfg = load_config(args);  // numerics/threads may be overridden here later
  (void)cfg;
  fs::create_directories(args.out_dir);

  const exp::Engine engine = parse_engine(args.engine, exp::Engine::both);
  const exp::Table1Report report = exp::reproduce_table1(engine);

  std::cout << report.format();
  {
    std::ofstream out(fs::path(args.out_dir) / "table1.csv");
    report.write_csv(out);
  }
  write_text(fs::path(args.out_dir) / "table1.txt", report.format());

  io::ResultManifest m = make_manifest(io::Config::defaults(), args);
  m.outputs = {"table1.csv", "table1.txt"};
  m.diagnostics = {{"pass", report.pass}};
  m.write_atomic(args.out_dir);
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resonator-induced phase gate simulator with a squeezed drive"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* sub, bool with_engine, bool with_grid) {
    sub->add_option("--config", args.config_path, "JSON configuration file (defaults when absent)");
    sub->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    if (with_engine) sub->add_option("--engine", args.engine, "analytic|cascaded|both");
    if (with_grid) sub->add_option("--grid", args.grid, "sweep grid axis:start:stop:step");
  };

  CLI::App* calibrate = app.add_subcommand("calibrate", "solve for the drive amplitude and pump");
  add_common(calibrate, false, false);
  CLI::App* trajectory = app.add_subcommand("trajectory", "export the cavity-field trajectory");
  add_common(trajectory, false, false);
  CLI::App* analytic = app.add_subcommand("analytic-sweep", "closed-form error sweep");
  add_common(analytic, true, true);
  CLI::App* cascaded = app.add_subcommand("cascaded-run", "cascaded master-equation run or sweep");
  add_common(cascaded, true, true);
  CLI::App* table1 = app.add_subcommand("table1", "reproduce the fixture fidelity table");
  add_common(table1, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(args);
    if (trajectory->parsed()) return cmd_trajectory(args);
    if (analytic->parsed()) return run_sweep_command(args, exp::Engine::analytic, "db:0:20:0.5");
    if (cascaded->parsed()) return run_sweep_command(args, exp::Engine::cascaded, "");
    if (table1->parsed()) return cmd_table1(args);
  } catch (const SchemaError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
