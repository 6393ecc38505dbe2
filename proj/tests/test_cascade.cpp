#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "ripgate/cascade.hpp"
#include "ripgate/channel.hpp"
#include "ripgate/dpa.hpp"
#include "ripgate/errors.hpp"
#include "ripgate/fock.hpp"
#include "ripgate/sparse.hpp"
#include "ripgate/trajectory.hpp"
#include "ripgate/units.hpp"

using namespace ripgate;
using cd = std::complex<double>;
using sparse::CMatRM;

namespace {

CMatRM random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CMatRM m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = cd(gauss(rng), gauss(rng));
  return m;
}

SystemParams small_system() {
  SystemParams p;
  p.delta_r_mhz = 320.0;
  return p;
}

DriveParams small_drive(double eps0 = 320.0) {
  DriveParams d;
  d.eps0_mhz = eps0;
  d.tau_ns = 10.0;
  return d;
}

}  // namespace

TEST_CASE("CSR kernels reproduce dense products") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd s_dense = Eigen::MatrixXcd::Zero(17, 17);
  for (int k = 0; k < 60; ++k) {
    s_dense(rng() % 17, rng() % 17) += cd(gauss(rng), gauss(rng));
  }
  const auto s = sparse::CsrMatrix::from_dense(s_dense);
  CHECK((s.dense() - s_dense).cwiseAbs().maxCoeff() == 0.0);

  const CMatRM x = random_matrix(17, 17, 5);
  const cd scale(0.7, -0.2);

  CMatRM y = random_matrix(17, 17, 6);
  Eigen::MatrixXcd want = y + scale * s_dense * x;
  sparse::add_left_product(y, scale, s, x);
  CHECK((y - want).cwiseAbs().maxCoeff() < 1e-13);

  CMatRM z = random_matrix(17, 17, 7);
  want = z + scale * x * s_dense;
  sparse::add_right_product(z, scale, x, s);
  CHECK((z - want).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("generator annihilates the joint vacuum when idle") {
  SystemParams p = small_system();
  DpaParams off;
  off.pump_mhz = 0.0;
  cascade::Truncations t{8, 4};
  const auto gen = cascade::make_pair_generator(p, off, t, 0, 0);
  CMatRM x = CMatRM::Zero(gen.dim, gen.dim);
  x(0, 0) = 1.0;
  CMatRM y(gen.dim, gen.dim), scratch(gen.dim, gen.dim);
  cascade::evaluate_rhs(gen, x, 0.0, y, scratch);
  CHECK(y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generator matches the dense Lindblad form on a random block") {
  SystemParams p = small_system();
  DpaParams dpa_params = dpa::calibrate_pump(8.0, 32.0, 0.4);
  cascade::Truncations t{6, 4};
  const auto gen = cascade::make_pair_generator(p, dpa_params, t, +2, -2);

  // Rebuild the same generator densely from its definition.
  const double kappa = units::angular(p.kappa_mhz);
  const double gamma_b = units::angular(dpa_params.gamma_b_mhz);
  const double lam = units::angular(dpa_params.pump_mhz);
  const cd i_unit(0.0, 1.0);
  const auto a = fock::tensor(fock::ladder(6), fock::identity(4));
  const auto b = fock::tensor(fock::identity(6), fock::ladder(4));
  const auto jump = std::sqrt(kappa) * a + std::sqrt(gamma_b) * b;
  const auto kdis = (jump.adjoint() * jump).eval();
  const cd ph = std::polar(1.0, -2.0 * dpa_params.theta_rad);
  const auto h_common = (i_unit * 0.5 * lam * (ph * b * b - std::conj(ph) * b.adjoint() * b.adjoint()) +
                         i_unit * 0.5 * std::sqrt(kappa * gamma_b) *
                             (b.adjoint() * a - a.adjoint() * b)).eval();
  const auto h_bra = (units::angular(traj::sector_detuning(p, +2)) * a.adjoint() * a + h_common).eval();
  const auto h_ket = (units::angular(traj::sector_detuning(p, -2)) * a.adjoint() * a + h_common).eval();

  const double eps = 0.9;
  const CMatRM x = random_matrix(24, 24, 11);
  Eigen::MatrixXcd want = -i_unit * (h_bra * x - x * h_ket) - 0.5 * (kdis * x + x * kdis) +
                          jump * x * jump.adjoint() -
                          i_unit * eps * ((a + a.adjoint()) * x - x * (a + a.adjoint()));
  CMatRM y(24, 24), scratch(24, 24);
  cascade::evaluate_rhs(gen, x, eps, y, scratch);
  CHECK((y - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mean-field cascade direction: source drives cavity, not vice versa") {
  // Displace the source in a diagonal block and watch <a> respond while <b>
  // decays unaffected by the cavity.
  SystemParams p = small_system();
  p.delta_r_mhz = 50.0;
  DpaParams off;
  off.pump_mhz = 0.0;
  off.gamma_b_mhz = 32.0;
  cascade::Truncations t{6, 6};
  const auto gen = cascade::make_pair_generator(p, off, t, 0, 0);

  const auto a = fock::tensor(fock::ladder(6), fock::identity(6));
  const auto b = fock::tensor(fock::identity(6), fock::ladder(6));
  // Coherent displacement of the source only.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(36);
  const double beta = 0.4;
  for (int n = 0; n < 6; ++n) {
    double amp = std::exp(-0.5 * beta * beta) * std::pow(beta, n);
    for (int k = 1; k <= n; ++k) amp /= std::sqrt(double(k));
    psi(n) = amp;  // cavity index 0, source index n
  }
  psi.normalize();
  CMatRM x = (psi * psi.adjoint()).eval();

  CMatRM y(36, 36), scratch(36, 36);
  const double dt = 0.005;
  double t_now = 0.0;
  cd a_mean_prev = (a.transpose().cwiseProduct(Eigen::MatrixXcd(x))).sum();
  // crude Euler steps are enough to read off the drift direction
  for (int step = 0; step < 200; ++step) {
    cascade::evaluate_rhs(gen, x, 0.0, y, scratch);
    x += dt * y;
    t_now += dt;
  }
  const cd a_mean = (Eigen::MatrixXcd(x) * a).trace();
  const cd b_mean = (Eigen::MatrixXcd(x) * b).trace();
  const double gamma_b = units::angular(off.gamma_b_mhz);
  // Source decays as e^{-Gamma t/2} regardless of the cavity.
  CHECK(std::abs(b_mean) ==
        doctest::Approx(beta * std::exp(-0.5 * gamma_b * t_now)).epsilon(5e-3));
  // The cavity picked up a field from the source output.
  CHECK(std::abs(a_mean) > 0.05);
  CHECK(std::abs(a_mean_prev) < 1e-12);
}

TEST_CASE("diagonal blocks conserve trace through the driven gate") {
  SystemParams p = small_system();
  (void)p;
  DpaParams off;
  off.pump_mhz = 0.0;
  cascade::Truncations t{10, 4};
  cascade::RunOptions opt;
  opt.dt_ns = 0.01;
  const auto run = cascade::run_gate(small_system(), small_drive(), off, t, opt);
  CHECK(run.diagnostics.max_trace_drift < 1e-10);
  CHECK(run.diagnostics.min_eigenvalue > -1e-8);
}

TEST_CASE("vacuum-source cascade reproduces the coherent field and the plain channel") {
  SystemParams p = small_system();
  const DriveParams d = small_drive();
  DpaParams off;
  off.pump_mhz = 0.0;
  cascade::Truncations t{10, 4};
  cascade::RunOptions opt;
  opt.dt_ns = 0.01;

  const auto run = cascade::run_gate(p, d, off, t, opt);
  const auto plain = cascade::run_gate_plain(p, d, 10, opt);

  // 7a-style: gamma arrays agree far inside 1e-3 absolute.
  CHECK((run.elements.gamma - plain.elements.gamma).cwiseAbs().maxCoeff() < 1e-6);
  const Eigen::Matrix4d dmu = run.elements.mu - plain.elements.mu;
  CHECK(dmu.cwiseAbs().maxCoeff() < 1e-6);

  // 7b-style: photon number tracks |alpha|^2 with the kappa term on.
  traj::PropagateOptions topt;
  topt.dt_ns = 0.005;
  topt.include_kappa = true;
  const auto trajectory = traj::propagate_alpha(p, d, 0, topt).sector(0);
  double peak_sim = 0.0;
  for (const auto& s : run.diagnostics.samples) peak_sim = std::max(peak_sim, s.photon_number);
  CHECK(peak_sim == doctest::Approx(trajectory.max_abs2()).epsilon(0.01));
}

TEST_CASE("extracted exponents match the adiabatic rate at zero squeezing") {
  SystemParams p = small_system();
  const DriveParams d = small_drive();
  DpaParams off;
  off.pump_mhz = 0.0;
  cascade::Truncations t{10, 4};
  cascade::RunOptions opt;
  opt.dt_ns = 0.01;
  const auto run = cascade::run_gate(p, d, off, t, opt);

  traj::PropagateOptions topt;
  topt.dt_ns = 0.005;
  const auto trajectory = traj::propagate_all(p, d, topt);
  SqueezeParams sqz0;
  sqz0.db = 0.0;
  const auto analytic = channel::analytic_channel(trajectory, sqz0, p);

  // |DS| = 2 exponent at the few-percent level (non-adiabatic and kappa
  // corrections).
  CHECK(run.elements.gamma(0, 1) ==
        doctest::Approx(analytic.gamma(0, 1)).epsilon(0.05));
  // The sector-difference-squared scaling holds to O(chi/delta): the exact
  // pointer-state ratio is 4 delta^2/(delta - 2 chi)^2 because the two pair
  // susceptibilities are centered on different sector detunings.
  const double chi = p.chi_mhz();
  const double exact_ratio = 4.0 * std::pow(p.delta_r_mhz / (p.delta_r_mhz - 2.0 * chi), 2);
  CHECK(run.elements.gamma(0, 3) / run.elements.gamma(0, 1) ==
        doctest::Approx(exact_ratio).epsilon(0.01));
  CHECK(run.elements.gamma(0, 3) / run.elements.gamma(0, 1) ==
        doctest::Approx(4.0).epsilon(0.15));
  CHECK(run.elements.gamma(1, 2) < 1e-10);

  // Deterministic phases agree with the trajectory integrals (mod 2pi).
  const double want = std::remainder(analytic.mu(0, 1), 2.0 * units::kPi);
  CHECK(std::remainder(run.elements.mu(0, 1) - want, 2.0 * units::kPi) ==
        doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("hermiticity pairing: swapped sectors evolve to the adjoint block") {
  SystemParams p = small_system();
  DpaParams dpa_params = dpa::calibrate_pump(6.0, 32.0, 0.0);
  cascade::Truncations t{6, 4};
  const auto gen_ab = cascade::make_pair_generator(p, dpa_params, t, +2, 0);
  const auto gen_ba = cascade::make_pair_generator(p, dpa_params, t, 0, +2);

  CMatRM x = random_matrix(24, 24, 17);
  CMatRM xd = x.adjoint();
  CMatRM ya(24, 24), yb(24, 24), scratch(24, 24);
  const double dt = 0.002;
  for (int step = 0; step < 50; ++step) {
    const double eps = 0.4 + 0.1 * step * dt;
    cascade::evaluate_rhs(gen_ab, x, eps, ya, scratch);
    x += dt * ya;
    cascade::evaluate_rhs(gen_ba, xd, eps, yb, scratch);
    xd += dt * yb;
  }
  CHECK((xd - CMatRM(x.adjoint())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("squeezing angle: aligned squeezing beats anti-squeezing in the cascade") {
  SystemParams p = small_system();
  const DriveParams d = small_drive();
  cascade::Truncations t{10, 10};
  cascade::RunOptions opt;
  opt.dt_ns = 0.01;

  const auto run_at = [&](double theta) {
    const DpaParams src = dpa::calibrate_pump(10.0, 32.0, theta);
    const auto run = cascade::run_gate(p, d, src, t, opt);
    return channel::gate_error(run.elements);
  };
  const double e_aligned = run_at(0.0);
  const double e_anti = run_at(0.5 * units::kPi);

  DpaParams off;
  off.pump_mhz = 0.0;
  const auto run0 = cascade::run_gate(p, d, off, {10, 4}, opt);
  const double e0 = channel::gate_error(run0.elements);

  CHECK(e_aligned < e0);
  CHECK(e_anti > e0);
}

TEST_CASE("pre-relaxation: staleness exit at zero pump, squeezed steady state otherwise") {
  SystemParams p = small_system();
  const DriveParams d = small_drive();
  cascade::RunOptions opt;
  opt.dt_ns = 0.01;
  DpaParams off;
  off.pump_mhz = 0.0;
  const auto idle = cascade::run_gate(p, d, off, {10, 4}, opt);
  // Vacuum is already stationary; the staleness check fires at the first probe.
  CHECK(idle.diagnostics.prerelax_duration_ns < 5.0);

  const DpaParams src = dpa::calibrate_pump(10.0, 32.0, 0.0);
  const auto sqz = cascade::run_gate(p, d, src, {10, 10}, opt);
  CHECK(sqz.diagnostics.prerelax_duration_ns > 20.0);
}

TEST_CASE("coherences never exceed their pre-relaxed magnitude") {
  SystemParams p = small_system();
  const DriveParams d = small_drive();
  const DpaParams src = dpa::calibrate_pump(8.0, 32.0, 0.0);
  cascade::RunOptions opt;
  opt.dt_ns = 0.01;
  const auto run = cascade::run_gate(p, d, src, {10, 8}, opt);
  CHECK(run.diagnostics.max_coherence_excess < 1e-9);
}

TEST_CASE("truncation guard names the offending mode") {
  SystemParams p = small_system();
  cascade::RunOptions opt;
  opt.dt_ns = 0.01;
  DpaParams off;
  off.pump_mhz = 0.0;
  try {
    (void)cascade::run_gate(p, small_drive(796.0), off, {6, 4}, opt);  // ~6 photons into dim 6
    CHECK(false);
  } catch (const TruncationError& e) {
    CHECK(std::string(e.what()).find("cavity") != std::string::npos);
    CHECK(e.population > cascade::kTruncationGuard);
  }
}

TEST_CASE("halved-step audit reports tiny channel deltas") {
  SystemParams p = small_system();
  const DriveParams d = small_drive();
  DpaParams off;
  off.pump_mhz = 0.0;
  cascade::RunOptions opt;
  opt.dt_ns = 0.02;
  opt.audit_halved_step = true;
  const auto run = cascade::run_gate(p, d, off, {8, 4}, opt);
  CHECK(std::isfinite(run.diagnostics.audit_max_dgamma));
  CHECK(run.diagnostics.audit_max_dgamma < 1e-8);
  CHECK(run.diagnostics.audit_max_dmu < 1e-6);
}
