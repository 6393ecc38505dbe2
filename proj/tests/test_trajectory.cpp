#include <cmath>
#include <complex>
#include <sstream>

#include "doctest.h"
#include "ripgate/errors.hpp"
#include "ripgate/trajectory.hpp"
#include "ripgate/units.hpp"

using namespace ripgate;
using cd = std::complex<double>;

namespace {

SystemParams row1_system() {
  SystemParams p;  // defaults are the 320 MHz fixture
  return p;
}

DriveParams row1_drive() {
  DriveParams d;
  d.eps0_mhz = 796.0;
  d.tau_ns = 40.0;
  return d;
}

}  // namespace

TEST_CASE("Gaussian envelope: peak, window edge, window length") {
  DriveParams d = row1_drive();
  CHECK(traj::envelope(0.0, d) == doctest::Approx(d.eps0_mhz));
  CHECK(d.gate_time_ns() == doctest::Approx(200.0));
  const double edge = traj::envelope(0.5 * d.gate_time_ns(), d);
  CHECK(edge == doctest::Approx(d.eps0_mhz * std::exp(-6.25)).epsilon(1e-12));
  CHECK(edge / d.eps0_mhz == doctest::Approx(1.93e-3).epsilon(2e-3));
  CHECK(traj::envelope(100.0001, d) == 0.0);
  CHECK(traj::envelope(-3000.0, d) == 0.0);
}

TEST_CASE("sector detunings shift by s*chi") {
  SystemParams p = row1_system();
  CHECK(p.chi_mhz() == doctest::Approx(8.0));
  CHECK(p.n_crit() == doctest::Approx(100.0));
  CHECK(traj::sector_detuning(p, 0) == doctest::Approx(320.0));
  CHECK(traj::sector_detuning(p, +2) == doctest::Approx(336.0));
  CHECK(traj::sector_detuning(p, -2) == doctest::Approx(304.0));
  CHECK_THROWS_AS(traj::sector_detuning(p, 1), SectorError);
}

TEST_CASE("zero-rotation limit integrates the envelope with the angular conversion") {
  // With delta ~ 0 and kappa = 0 the ODE reduces to d(alpha)/dt = -i eps(t),
  // so alpha(t) = -i (2pi 1e-3) eps0 int exp(-t'^2/tau^2) dt'. Near the pulse
  // peak this is the constant-drive law alpha ~ -i 2pi eps0 t.
  SystemParams p = row1_system();
  p.delta_r_mhz = 1e-12;  // effectively zero, still satisfies the nonzero invariant
  DriveParams d;
  d.eps0_mhz = 1.0;
  d.tau_ns = 4000.0;
  traj::PropagateOptions opt;
  opt.dt_ns = 1.0;
  const auto traj0 = traj::propagate_alpha(p, d, 0, opt).sector(0);

  const double k = units::kRadPerNsPerMHz;
  const double tau = d.tau_ns;
  const auto exact = [&](double t) {
    return -cd(0.0, 1.0) * k * d.eps0_mhz * 0.5 * std::sqrt(M_PI) * tau *
           (std::erf(t / tau) + std::erf(2.5));
  };
  for (double t : {-5000.0, -1000.0, 0.0, 2000.0, 10000.0}) {
    const std::size_t idx = std::size_t(std::llround(t + 10000.0));
    CHECK(std::abs(traj0.alpha[idx] - exact(t)) < 1e-8 * std::abs(exact(10000.0)));
  }

  // Constant-drive reading around the peak: delta alpha = -i 2pi 1e-3 eps0 dt.
  const std::size_t i_lo = 9900, i_hi = 10100;
  const cd dalpha = traj0.alpha[i_hi] - traj0.alpha[i_lo];
  const cd want = -cd(0.0, 1.0) * k * d.eps0_mhz * 200.0;
  CHECK(std::abs(dalpha - want) < 1e-3 * std::abs(want));
}

TEST_CASE("fixture trajectory: six photons, closed loop, vacuum start") {
  const auto traj0 = traj::propagate_all(row1_system(), row1_drive());
  for (int s : {+2, 0, -2}) {
    CHECK(std::abs(traj0.sector(s).alpha.front()) == 0.0);
  }
  const auto& s0 = traj0.sector(0);
  CHECK(s0.max_abs2() == doctest::Approx(6.2).epsilon(0.05));
  CHECK(s0.closure_ratio() < 1e-3);
}

TEST_CASE("accumulated ZZ area matches the adiabatic closed form at the fixture points") {
  {
    const double a = traj::parity_phase(row1_system(), row1_drive(), 0.005);
    CHECK(a == doctest::Approx(1.56).epsilon(0.02 / 1.56));
  }
  {
    SystemParams p = row1_system();
    p.delta_r_mhz = 160.0;
    DriveParams d;
    d.eps0_mhz = 278.5;
    d.tau_ns = 40.0;
    const double a = traj::parity_phase(p, d, 0.005);
    CHECK(a == doctest::Approx(1.53).epsilon(0.03 / 1.53));
  }
  {
    DriveParams off;
    off.eps0_mhz = 0.0;
    off.tau_ns = 40.0;
    CHECK(traj::parity_phase(row1_system(), off, 0.01) == 0.0);
  }
}

TEST_CASE("arg[alpha]: undefined at vacuum, axis-aligned at the peak, wild early") {
  const auto traj0 = traj::propagate_all(row1_system(), row1_drive());
  const auto& s0 = traj0.sector(0);
  const auto args = traj::arg_alpha(s0);
  CHECK_FALSE(args.front().has_value());
  CHECK(args[args.size() / 2].has_value());

  // At the pulse peak the field sits on the real axis (adiabatic value
  // -eps/delta): small angle mod pi.
  const double arg_peak = *args[args.size() / 2];
  CHECK(std::abs(std::sin(arg_peak)) < 0.03);

  // Early in the pulse the argument spirals over a large range.
  double lo = 1e9, hi = -1e9;
  for (std::size_t k = 1; k < args.size() / 10; ++k) {
    if (args[k]) {
      lo = std::min(lo, *args[k]);
      hi = std::max(hi, *args[k]);
    }
  }
  CHECK(hi - lo > 1.0);

  traj::SectorTrajectory synth;
  synth.sector = 0;
  synth.alpha = {cd(2.5, 0.0)};
  const auto synth_args = traj::arg_alpha(synth);
  CHECK(*synth_args[0] == 0.0);
}

TEST_CASE("fourth-order convergence via Richardson ratio") {
  SystemParams p = row1_system();
  DriveParams d = row1_drive();
  traj::PropagateOptions o1, o2, o4;
  o1.dt_ns = 0.02;
  o2.dt_ns = 0.01;
  o4.dt_ns = 0.005;
  const cd a1 = traj::propagate_alpha(p, d, 0, o1).sector(0).alpha[2500];
  const cd a2 = traj::propagate_alpha(p, d, 0, o2).sector(0).alpha[5000];
  const cd a4 = traj::propagate_alpha(p, d, 0, o4).sector(0).alpha[10000];
  const double ratio = std::abs(a1 - a2) / std::abs(a2 - a4);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("linearity in the drive amplitude") {
  SystemParams p = row1_system();
  DriveParams d1 = row1_drive();
  DriveParams d3 = d1;
  d3.eps0_mhz *= 3.0;
  traj::PropagateOptions opt;
  opt.dt_ns = 0.01;
  SUBCASE("without kappa") {}
  SUBCASE("with kappa") { opt.include_kappa = true; }
  const auto t1 = traj::propagate_alpha(p, d1, 0, opt).sector(0);
  const auto t3 = traj::propagate_alpha(p, d3, 0, opt).sector(0);
  double worst = 0.0;
  for (std::size_t k = 0; k < t1.alpha.size(); k += 97) {
    worst = std::max(worst, std::abs(t3.alpha[k] - 3.0 * t1.alpha[k]));
  }
  CHECK(worst < 1e-12 * std::sqrt(t1.max_abs2()) * 3.0);

  // Quadratic functional of the drive.
  const double r = traj::parity_phase(p, d3, 0.01) / traj::parity_phase(p, d1, 0.01);
  CHECK(r == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("sectors coincide when chi -> 0") {
  SystemParams p = row1_system();
  p.g_mhz = 1e-6;  // chi ~ 3e-16 MHz
  const auto t = traj::propagate_all(p, row1_drive());
  const auto& plus = t.sector(+2).alpha;
  const auto& minus = t.sector(-2).alpha;
  double worst = 0.0;
  for (std::size_t k = 0; k < plus.size(); k += 131) {
    worst = std::max(worst, std::abs(plus[k] - minus[k]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("step-size guard") {
  SystemParams p = row1_system();
  traj::PropagateOptions coarse;
  coarse.dt_ns = 2.0;  // far above 0.2/delta
  CHECK_THROWS_AS(traj::propagate_alpha(p, row1_drive(), 0, coarse), StepSizeError);
}

TEST_CASE("trajectory CSV carries the documented columns") {
  SystemParams p = row1_system();
  DriveParams d = row1_drive();
  traj::PropagateOptions opt;
  opt.dt_ns = 0.05;
  const auto t = traj::propagate_all(p, d, opt);
  std::ostringstream os;
  traj::write_csv(os, t);
  const std::string text = os.str();
  CHECK(text.substr(0, text.find('\n')) == "t_ns,re_alpha,im_alpha,abs2_alpha,arg_alpha,sector");
  CHECK(text.find(",nan,") != std::string::npos);  // vacuum start has undefined arg
}
