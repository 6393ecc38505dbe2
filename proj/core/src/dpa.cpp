#include "ripgate/dpa.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "ripgate/errors.hpp"
#include "ripgate/fock.hpp"
#include "ripgate/superop.hpp"
#include "ripgate/units.hpp"

namespace ripgate::dpa {

using cd = std::complex<double>;

CMat pump_hamiltonian(int dim, double pump_rad_ns, double theta_rad) {
  const CMat b = fock::ladder(dim);
  const CMat b2 = b * b;
  const cd i_unit(0.0, 1.0);
  const cd phase = std::polar(1.0, -2.0 * theta_rad);
  return i_unit * 0.5 * pump_rad_ns * (phase * b2 - std::conj(phase) * b2.adjoint());
}

CMat source_steady_state(const DpaParams& dpa, int dim) {
  dpa.validate();
  const double pump = units::angular(dpa.pump_mhz);
  const double gamma_b = units::angular(dpa.gamma_b_mhz);
  const CMat h = pump_hamiltonian(dim, pump, dpa.theta_rad);
  const CMat j = std::sqrt(gamma_b) * fock::ladder(dim);
  const CMat liou = superop::liouvillian(h, {j});
  return superop::steady_state(liou, dim);
}

double source_output_variance(const DpaParams& dpa, double angle_rad, int dim) {
  dpa.validate();
  const double pump = units::angular(dpa.pump_mhz);
  const double gamma_b = units::angular(dpa.gamma_b_mhz);
  const CMat h = pump_hamiltonian(dim, pump, dpa.theta_rad);
  const CMat b = fock::ladder(dim);
  const CMat bd = b.adjoint();
  const CMat j = std::sqrt(gamma_b) * b;
  const superop::LiouvilleSolver solver(superop::liouvillian(h, {j}), dim);
  const CMat rho = solver.steady_state();

  // S(omega=0) = 1 + 2 Gamma Re[e^{-2i phi} T_bb + e^{+2i phi} conj(T_bb)
  //                             + T_b+b + T_bb+].
  // Output-field operators commute at unequal times, so the creation-pair
  // correlator is the conjugate of the time-ordered T_bb; the raw intracavity
  // <b+(tau) b+(0)> would double-count the commutator part.
  const CMat seed_b = b * rho;
  const CMat seed_rb = rho * bd;
  const cd t_bb = solver.regression_integral(b, seed_b);
  const cd t_bdb = solver.regression_integral(bd, seed_b);
  const cd t_bbd = solver.regression_integral(b, seed_rb);

  const cd ph = std::polar(1.0, -2.0 * angle_rad);
  const double corr = 2.0 * (ph * t_bb).real() + (t_bdb + t_bbd).real();
  return 1.0 + 2.0 * gamma_b * corr;
}

DpaParams calibrate_pump(double db_target, double gamma_b_mhz, double theta_rad) {
  if (!(db_target >= 0) || !std::isfinite(db_target)) {
    throw AboveThresholdError("calibrate_pump: db_target must be finite and >= 0");
  }
  const double r = db_target / 20.0 * std::log(10.0);
  const double e_mr = std::exp(-r);
  DpaParams dpa;
  dpa.gamma_b_mhz = gamma_b_mhz;
  dpa.theta_rad = theta_rad;
  dpa.pump_mhz = 0.5 * gamma_b_mhz * (1.0 - e_mr) / (1.0 + e_mr);
  dpa.validate();
  if (db_target == 0.0) return dpa;

  // Verify against the output-variance oracle. The anti-squeezed thermal
  // occupation grows as 1/(1 - 2 lambda/Gamma), so the oracle dimension has
  // to scale toward threshold; past ~22 dB no practical Fock truncation
  // resolves the steady state and the (exact) algebraic map stands alone.
  const double x = 2.0 * dpa.pump_mhz / gamma_b_mhz;
  if (x <= 0.87) {
    const int dim = x > 0.76 ? 36 : (x > 0.6 ? 28 : 16);
    const double want = std::pow(10.0, -db_target / 10.0);
    const double got = source_output_variance(dpa, theta_rad, dim);
    if (std::abs(got - want) > 0.02 * want) {
      throw CalibrationError("calibrate_pump: oracle variance " + std::to_string(got) +
                             " deviates from target " + std::to_string(want) + " by more than 2%");
    }
  }
  return dpa;
}

}  // namespace ripgate::dpa
