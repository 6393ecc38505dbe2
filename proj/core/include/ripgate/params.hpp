#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace ripgate {

// Dispersive two-qubit + cavity parameters. All frequencies are nu = omega/2pi
// in MHz. chi and n_crit are always derived, never stored.
struct SystemParams {
  double nu_r_mhz = 7000.0;    // cavity frequency
  double nu_a_mhz = 10200.0;   // qubit frequency (both qubits identical)
  double g_mhz = 160.0;        // qubit-cavity coupling
  double kappa_mhz = 10.0;     // cavity decay rate
  double delta_r_mhz = 320.0;  // drive-cavity detuning omega_r - omega_d

  double delta_mhz() const { return nu_a_mhz - nu_r_mhz; }
  double chi_mhz() const { return g_mhz * g_mhz / delta_mhz(); }
  double n_crit() const {
    const double d = delta_mhz();
    return d * d / (4.0 * g_mhz * g_mhz);
  }

  // Throws SchemaError on hard violations; soft issues (dispersive-regime
  // margin) are returned by warnings().
  void validate() const;
  std::vector<std::string> warnings() const;

  bool operator==(const SystemParams&) const = default;
};

// Gaussian drive envelope eps(t) = eps0 exp(-t^2/tau^2) on the gate window
// [-t_g/2, t_g/2] with t_g = 5 tau exactly.
struct DriveParams {
  double eps0_mhz = 796.0;
  double tau_ns = 40.0;

  double gate_time_ns() const { return 5.0 * tau_ns; }

  void validate() const;

  bool operator==(const DriveParams&) const = default;
};

// Squeezed-input description for the analytic channel. db is the squeezing
// power in dB with db = 10 log10(e^{2 r}), i.e. r = (db/20) ln 10.
struct SqueezeParams {
  double db = 16.0;
  double theta_rad = 0.0;     // squeezed-quadrature angle
  double gamma_bw_mhz = 32.0; // squeezing bandwidth (Lorentzian HWHM)

  double r() const { return db / 20.0 * std::log(10.0); }

  void validate() const;

  bool operator==(const SqueezeParams&) const = default;
};

// Degenerate parametric amplifier acting as the squeezing source. Below
// threshold requires pump < gamma_b/2 strictly.
struct DpaParams {
  double gamma_b_mhz = 32.0;  // source-cavity decay
  double pump_mhz = 0.0;      // pump amplitude lambda
  double theta_rad = 0.0;     // squeezed-quadrature angle of the output

  void validate() const;

  bool operator==(const DpaParams&) const = default;
};

}  // namespace ripgate
