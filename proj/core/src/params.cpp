#include "ripgate/params.hpp"

#include <cmath>

#include "ripgate/errors.hpp"

namespace ripgate {

void SystemParams::validate() const {
  if (!(g_mhz > 0)) throw SchemaError("system.g_mhz", "must be > 0");
  if (!(kappa_mhz > 0)) throw SchemaError("system.kappa_mhz", "must be > 0");
  if (delta_r_mhz == 0.0) throw SchemaError("system.delta_r_mhz", "must be nonzero");
  if (delta_mhz() == 0.0) throw SchemaError("system.nu_a_mhz", "qubit-cavity detuning must be nonzero");
  if (!std::isfinite(nu_r_mhz) || !std::isfinite(nu_a_mhz) || !std::isfinite(g_mhz) ||
      !std::isfinite(kappa_mhz) || !std::isfinite(delta_r_mhz)) {
    throw SchemaError("system", "all entries must be finite");
  }
}

std::vector<std::string> SystemParams::warnings() const {
  std::vector<std::string> w;
  if (std::abs(delta_mhz()) < 10.0 * g_mhz) {
    w.push_back("system: |Delta| < 10 g, dispersive approximation is marginal (Delta/g = " +
                std::to_string(std::abs(delta_mhz()) / g_mhz) + ")");
  }
  return w;
}

void DriveParams::validate() const {
  if (!(eps0_mhz >= 0)) throw SchemaError("drive.eps0_mhz", "must be >= 0");
  if (!(tau_ns > 0)) throw SchemaError("drive.tau_ns", "must be > 0");
  if (!std::isfinite(eps0_mhz) || !std::isfinite(tau_ns)) {
    throw SchemaError("drive", "all entries must be finite");
  }
}

void SqueezeParams::validate() const {
  if (!(db >= 0) || !std::isfinite(db)) throw SchemaError("squeeze.db", "must be >= 0 and finite");
  // gamma_bw == 0 is the zero-bandwidth limit: no thermal photons away from
  // the carrier.
  if (!(gamma_bw_mhz >= 0)) throw SchemaError("squeeze.gamma_bw_mhz", "must be >= 0");
  if (!std::isfinite(theta_rad)) throw SchemaError("squeeze.theta_rad", "must be finite");
}

void DpaParams::validate() const {
  if (!(gamma_b_mhz > 0)) throw SchemaError("dpa.gamma_b_mhz", "must be > 0");
  if (!(pump_mhz >= 0)) throw SchemaError("dpa.pump_mhz", "must be >= 0");
  if (!(pump_mhz < gamma_b_mhz / 2.0)) {
    throw AboveThresholdError("dpa.pump_mhz: pump must stay strictly below threshold gamma_b/2 = " +
                              std::to_string(gamma_b_mhz / 2.0));
  }
  if (!std::isfinite(theta_rad)) throw SchemaError("dpa.theta_rad", "must be finite");
}

}  // namespace ripgate
