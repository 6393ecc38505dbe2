#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ripgate/config.hpp"
#include "ripgate/params.hpp"
#include "ripgate/units.hpp"

namespace ripgate::exp {

// Accumulated ZZ angular area realizing U_zz up to single-qubit rotations.
inline constexpr double kTargetArea = 0.5 * units::kPi;

// Fixture-reproduction tolerances in percentage points of average fidelity.
inline constexpr double kAnalyticTolerancePp = 0.3;
inline constexpr double kCascadedTolerancePp = 0.5;

enum class Engine { analytic, cascaded, both };
enum class SweepAxis { db, theta, delta_r };

// Adiabatic closed form eps0 = sqrt(target delta_r^3 / (4 chi^2 tau sqrt(pi/2)))
// in MHz; used only to bracket the exact root.
double adiabatic_eps0(const SystemParams& params, double tau_ns, double target_area = kTargetArea);

// Scalar root-find of the exact-trajectory ZZ area against `target_area`
// (tolerance 1e-4 rad); bracket is the adiabatic estimate +-30%.
double calibrate_drive(const SystemParams& params, double tau_ns,
                       double target_area = kTargetArea, double dt_ns = 0.005);

struct RunRecord {
  std::string engine;
  nlohmann::json resolved_config;
  double db = 0.0;
  double theta_rad = 0.0;
  double delta_r_mhz = 0.0;
  double error = 0.0;
  double f_avg = 0.0;
  Eigen::Matrix4d gamma = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d mu = Eigen::Matrix4d::Zero();
  double gamma_00_11 = 0.0;
  double mu_zz = 0.0;
  nlohmann::json diagnostics;
  double wall_seconds = 0.0;
  std::string failure;  // nonempty when the point failed and was skipped
};

struct SweepSpec {
  io::Config base;
  SweepAxis axis = SweepAxis::db;
  std::vector<double> grid;
  Engine engine = Engine::analytic;
  // Amplitude calibration runs once before the sweep; squeezing axes never
  // re-trigger it (the squeezing leaves the path area unchanged). A delta_r
  // axis recalibrates per point.
  bool calibrate_amplitude = true;

  void validate() const;
};

RunRecord run_analytic_point(const io::Config& cfg);
RunRecord run_cascaded_point(const io::Config& cfg);

// One RunRecord per grid point and engine; failures are recorded and the
// sweep continues.
std::vector<RunRecord> sweep(const SweepSpec& spec);

// CSV with columns db, theta_rad, error, f_avg, gamma_00_11, mu_zz.
void write_sweep_csv(std::ostream& os, const std::vector<RunRecord>& records);
nlohmann::json records_json(const std::vector<RunRecord>& records);

struct Table1Cell {
  double paper_percent = 0.0;
  double computed_percent = 0.0;
  double deviation_pp = 0.0;
  bool evaluated = false;
  bool within = false;
};

struct Table1Row {
  std::string label;
  SystemParams system;
  double db = 0.0;
  double eps0_quoted_mhz = 0.0;
  double eps0_calibrated_mhz = 0.0;
  int dim_cavity = 20;
  int dim_source = 12;
  double paper_f0_percent = 0.0;
  double paper_fsqz_percent = 0.0;
  Table1Cell f0_analytic, fsqz_analytic, f0_cascaded, fsqz_cascaded;
};

struct Table1Report {
  std::vector<Table1Row> rows;
  bool pass = false;

  std::string format() const;
  void write_csv(std::ostream& os) const;
};

// The three fixture parameter sets (tau = 40 ns, Gamma/2pi = 32 MHz, theta = 0).
std::vector<Table1Row> table1_fixtures();

// Runs every fixture row with and without squeezing at the quoted powers,
// with the drive amplitude calibrated per row.
Table1Report reproduce_table1(Engine engine = Engine::both);

}  // namespace ripgate::exp
