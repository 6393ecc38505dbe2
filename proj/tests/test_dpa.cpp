#include <cmath>

#include "doctest.h"
#include "ripgate/dpa.hpp"
#include "ripgate/errors.hpp"
#include "ripgate/fock.hpp"
#include "ripgate/superop.hpp"
#include "ripgate/units.hpp"

using namespace ripgate;

TEST_CASE("pump calibration: zero, fixture value, threshold asymptote") {
  CHECK(dpa::calibrate_pump(0.0, 32.0).pump_mhz == 0.0);

  const auto p16 = dpa::calibrate_pump(16.0, 32.0);
  CHECK(p16.pump_mhz / (0.5 * p16.gamma_b_mhz) == doctest::Approx(0.726).epsilon(1e-3));

  double prev = 0.0;
  for (double db : {5.0, 10.0, 20.0, 40.0, 60.0}) {
    const auto p = dpa::calibrate_pump(db, 32.0);
    CHECK(p.pump_mhz > prev);
    CHECK(p.pump_mhz < 0.5 * p.gamma_b_mhz);
    prev = p.pump_mhz;
  }
  CHECK(dpa::calibrate_pump(60.0, 32.0).pump_mhz / 16.0 == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("output variance: vacuum output at zero pump") {
  DpaParams off;
  off.pump_mhz = 0.0;
  for (double angle : {0.0, 0.4, 1.0, 2.2}) {
    CHECK(dpa::source_output_variance(off, angle, 8) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("output variance: below-threshold closed form and minimum uncertainty") {
  DpaParams p;
  p.gamma_b_mhz = 32.0;
  p.pump_mhz = 0.5 * (0.5 * p.gamma_b_mhz);  // half the threshold
  p.theta_rad = 0.0;
  const double squeezed = dpa::source_output_variance(p, 0.0, 20);
  const double anti = dpa::source_output_variance(p, 0.5 * units::kPi, 20);
  CHECK(squeezed == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
  CHECK(squeezed * anti == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("output squeezing tracks the requested power at the carrier") {
  for (double db : {3.0, 9.5, 16.0}) {
    const auto p = dpa::calibrate_pump(db, 32.0, 0.7);
    const int dim = db > 12 ? 28 : 20;
    const double s = dpa::source_output_variance(p, p.theta_rad, dim);
    CHECK(s == doctest::Approx(std::pow(10.0, -db / 10.0)).epsilon(0.02));
    // theta is the squeezed-quadrature angle; the orthogonal one is amplified.
    CHECK(dpa::source_output_variance(p, p.theta_rad + 0.5 * units::kPi, dim) > 1.0);
  }
}

TEST_CASE("steady state matches the analytic intracavity variances") {
  DpaParams p;
  p.gamma_b_mhz = 32.0;
  p.pump_mhz = 10.0;
  p.theta_rad = 0.0;
  const auto rho = dpa::source_steady_state(p, 24);
  const auto diag = fock::diagnostics(rho);
  CHECK(diag.trace_deviation < 1e-9);
  CHECK(diag.hermiticity_deviation < 1e-10);
  CHECK(diag.min_eigenvalue > -1e-8);

  // V_X = (1/4) Gamma/(Gamma + 2 lambda) for the squeezed quadrature,
  // V_P = (1/4) Gamma/(Gamma - 2 lambda) for the amplified one.
  const double gamma = p.gamma_b_mhz, lam = p.pump_mhz;
  CHECK(fock::quadrature_variance(rho, 0.0) ==
        doctest::Approx(0.25 * gamma / (gamma + 2.0 * lam)).epsilon(1e-6));
  CHECK(fock::quadrature_variance(rho, 0.5 * units::kPi) ==
        doctest::Approx(0.25 * gamma / (gamma - 2.0 * lam)).epsilon(1e-6));
}

TEST_CASE("above-threshold requests are rejected") {
  DpaParams bad;
  bad.gamma_b_mhz = 32.0;
  bad.pump_mhz = 16.0;
  CHECK_THROWS_AS(bad.validate(), AboveThresholdError);
  CHECK_THROWS_AS(dpa::calibrate_pump(-1.0, 32.0), AboveThresholdError);
}

TEST_CASE("superop: decaying cavity relaxes to vacuum") {
  const int dim = 6;
  const auto b = fock::ladder(dim);
  const auto liou = superop::liouvillian(fock::CMat::Zero(dim, dim), {b});
  const auto rho = superop::steady_state(liou, dim);
  CHECK((rho - fock::vacuum(dim)).cwiseAbs().maxCoeff() < 1e-10);
}
