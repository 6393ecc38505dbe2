#include "ripgate/cascade.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "ripgate/errors.hpp"
#include "ripgate/fock.hpp"
#include "ripgate/trajectory.hpp"
#include "ripgate/units.hpp"

namespace ripgate::cascade {

namespace {

using fock::CMat;

struct SharedOps {
  SystemParams params;
  DriveParams drive;
  DpaParams dpa;
  Truncations trunc;
  double kappa = 0.0;    // angular
  double gamma_b = 0.0;  // angular (0 when the source mode is absent)
};

CMat joint_cavity_op(const CMat& op, int dim_source) {
  return fock::tensor(op, fock::identity(dim_source));
}

CMat joint_source_op(const CMat& op, int dim_cavity) {
  return fock::tensor(fock::identity(dim_cavity), op);
}

}  // namespace

PairGenerator make_pair_generator(const SystemParams& params, const DpaParams& dpa,
                                  const Truncations& trunc, int sector_bra, int sector_ket) {
  const int nc = trunc.cavity;
  const int ns = trunc.source;
  if (nc < 2) throw InvalidDimensionError("cascade: cavity dim must be >= 2");
  if (ns < 1) throw InvalidDimensionError("cascade: source dim must be >= 1");
  const bool with_source = ns > 1;
  const int dim = nc * ns;

  const double kappa = units::angular(params.kappa_mhz);
  const double gamma_b = with_source ? units::angular(dpa.gamma_b_mhz) : 0.0;
  const double pump = with_source ? units::angular(dpa.pump_mhz) : 0.0;
  const cd i_unit(0.0, 1.0);

  const CMat a = joint_cavity_op(fock::ladder(nc), ns);
  const CMat b = with_source ? joint_source_op(fock::ladder(ns), nc) : CMat::Zero(dim, dim);

  const CMat jump = std::sqrt(kappa) * a + std::sqrt(gamma_b) * b;
  const CMat kdis = jump.adjoint() * jump;

  // Pump phase chosen so theta is the squeezed-quadrature angle of the
  // source output.
  const cd pump_phase = std::polar(1.0, -2.0 * dpa.theta_rad);
  const CMat b2 = b * b;
  CMat h_common = i_unit * 0.5 * pump * (pump_phase * b2 - std::conj(pump_phase) * b2.adjoint());
  // Unidirectional source -> cavity coupling; with this sign the mean-field
  // cavity equation picks up the full -sqrt(kappa Gamma_b) <b> drive while the
  // source stays unaffected by the cavity.
  h_common += i_unit * 0.5 * std::sqrt(kappa * gamma_b) * (b.adjoint() * a - a.adjoint() * b);

  const CMat n_a = a.adjoint() * a;
  const auto h_sector = [&](int sector) {
    return (units::angular(traj::sector_detuning(params, sector)) * n_a + h_common).eval();
  };

  PairGenerator gen;
  gen.dim_cavity = nc;
  gen.dim_source = ns;
  gen.dim = dim;
  gen.sector_bra = sector_bra;
  gen.sector_ket = sector_ket;
  gen.a0 = sparse::BandedOperator::from_dense(-i_unit * h_sector(sector_bra) - 0.5 * kdis);
  gen.b0 = sparse::BandedOperator::from_dense(i_unit * h_sector(sector_ket) - 0.5 * kdis);
  gen.drive = sparse::BandedOperator::from_dense(a + a.adjoint());
  gen.jump = sparse::BandedOperator::from_dense(jump);
  gen.jump_dag = sparse::BandedOperator::from_dense(jump.adjoint());
  return gen;
}

void evaluate_rhs(const PairGenerator& gen, const CMatRM& x, double eps_rad_ns, CMatRM& y,
                  CMatRM& scratch) {
  const cd i_unit(0.0, 1.0);
  const cd one(1.0, 0.0);
  if (eps_rad_ns != 0.0) {
    sparse::banded_left_combine(y, {{&gen.a0, one}, {&gen.drive, -i_unit * eps_rad_ns}}, x, false);
    sparse::banded_right_combine(y, x, {{&gen.b0, one}, {&gen.drive, i_unit * eps_rad_ns}}, true);
  } else {
    sparse::banded_left_combine(y, {{&gen.a0, one}}, x, false);
    sparse::banded_right_combine(y, x, {{&gen.b0, one}}, true);
  }
  sparse::banded_left_combine(scratch, {{&gen.jump, one}}, x, false);
  sparse::banded_right_combine(y, scratch, {{&gen.jump_dag, one}}, true);
}

double spectral_bound(const PairGenerator& gen, double eps_peak_rad_ns, int iters) {
  CMatRM v(gen.dim, gen.dim), y(gen.dim, gen.dim), scratch(gen.dim, gen.dim);
  // Deterministic pseudo-random fill.
  std::uint64_t state = 0x243f6a8885a308d3ull;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    const double re = double(state >> 11) / double(1ull << 53) - 0.5;
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    const double im = double(state >> 11) / double(1ull << 53) - 0.5;
    v.data()[k] = cd(re, im);
  }
  v /= v.norm();
  double radius = 0.0;
  for (int it = 0; it < iters; ++it) {
    evaluate_rhs(gen, v, eps_peak_rad_ns, y, scratch);
    radius = y.norm();
    if (radius == 0.0) break;
    v = y / radius;
  }
  return radius;
}

namespace {

struct PairJob {
  int sector_bra;
  int sector_ket;
  bool diagonal;
  bool is_sector0_diag;
};

struct PairOutcome {
  cd trace_start{1.0, 0.0};
  cd trace_end{1.0, 0.0};
  double prerelax_ns = 0.0;
  double max_coherence_excess = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 1.0;
  double max_top_cavity = 0.0;
  double max_top_source = 0.0;
  std::vector<DiagnosticsSample> samples;  // diagonal blocks only
};

class PairIntegrator {
 public:
  PairIntegrator(const PairGenerator& gen, const SharedOps& shared, const RunOptions& opt,
                 double dt, const PairJob& job)
      : gen_(gen), shared_(shared), opt_(opt), dt_(dt), job_(job) {
    const int dim = gen.dim;
    x_.setZero(dim, dim);
    x_(0, 0) = 1.0;  // cavity and source vacuum
    k_.setZero(dim, dim);
    tmp_.setZero(dim, dim);
    acc_.setZero(dim, dim);
    scratch_.setZero(dim, dim);
  }

  PairOutcome run() {
    prerelax();
    out_.trace_start = x_.trace();
    gate();
    out_.trace_end = x_.trace();
    return std::move(out_);
  }

 private:
  void step(double t, double dt, bool with_drive) {
    const auto eps = [&](double tt) {
      return with_drive ? units::angular(traj::envelope(tt, shared_.drive)) : 0.0;
    };
    evaluate_rhs(gen_, x_, eps(t), k_, scratch_);
    acc_ = x_ + (dt / 6.0) * k_;
    tmp_ = x_ + (0.5 * dt) * k_;
    evaluate_rhs(gen_, tmp_, eps(t + 0.5 * dt), k_, scratch_);
    acc_ += (dt / 3.0) * k_;
    tmp_ = x_ + (0.5 * dt) * k_;
    evaluate_rhs(gen_, tmp_, eps(t + 0.5 * dt), k_, scratch_);
    acc_ += (dt / 3.0) * k_;
    tmp_ = x_ + dt * k_;
    evaluate_rhs(gen_, tmp_, eps(t + dt), k_, scratch_);
    x_ = acc_ + (dt / 6.0) * k_;
  }

  void prerelax() {
    const double kappa = units::angular(shared_.params.kappa_mhz);
    const double gamma_b = units::angular(shared_.dpa.gamma_b_mhz);
    double duration = 0.0;
    if (gen_.dim_source > 1) {
      duration = std::max(5.0 / gamma_b, std::min(5.0 / kappa, opt_.prerelax_cap_ns));
    }
    const auto n_steps = std::size_t(std::ceil(duration / dt_ - 1e-12));
    std::size_t k = 0;
    for (; k < n_steps; ++k) {
      step(0.0, dt_, false);
      if ((k + 1) % 128 == 0) {
        evaluate_rhs(gen_, x_, 0.0, k_, scratch_);
        const double xn = x_.norm();
        if (xn > 0 && k_.norm() / xn < opt_.staleness_per_ns) {
          ++k;
          break;
        }
      }
    }
    out_.prerelax_ns = double(k) * dt_;
  }

  void gate() {
    const double gate_time = shared_.drive.gate_time_ns();
    const auto n_steps = std::size_t(std::llround(gate_time / dt_));
    const double t0 = -0.5 * gate_time;
    const double c0 = std::abs(x_.trace());

    const auto sample_every = std::size_t(std::max(1.0, std::round(opt_.sample_stride_ns / dt_)));
    const auto eig_every = std::size_t(std::max(1.0, std::round(opt_.eig_stride_ns / dt_)));

    observe(t0, true);
    for (std::size_t k = 0; k < n_steps; ++k) {
      step(t0 + double(k) * dt_, dt_, true);
      if ((k + 1) % sample_every == 0 || k + 1 == n_steps) {
        const double t = t0 + double(k + 1) * dt_;
        if (job_.diagonal) {
          observe(t, (k + 1) % eig_every == 0 || k + 1 == n_steps);
        } else if (c0 > 0.0) {
          const double excess = std::abs(x_.trace()) / c0 - 1.0;
          out_.max_coherence_excess = std::max(out_.max_coherence_excess, excess);
        }
        if (!std::isfinite(x_(0, 0).real())) {
          throw DivergenceError("cascade: non-finite block entry at t = " + std::to_string(t) +
                                " ns (sectors " + std::to_string(gen_.sector_bra) + "," +
                                std::to_string(gen_.sector_ket) + ")");
        }
      }
    }
  }

  void observe(double t, bool with_eigs) {
    if (!job_.diagonal) return;
    DiagnosticsSample s;
    s.t_ns = t;
    s.trace_deviation = std::abs(x_.trace() - cd(1.0, 0.0));
    out_.max_trace_drift = std::max(out_.max_trace_drift, s.trace_deviation);

    const int nc = gen_.dim_cavity;
    const int ns = gen_.dim_source;
    double top_c = 0.0, top_s = 0.0, photon = 0.0;
    for (int ic = 0; ic < nc; ++ic) {
      for (int is = 0; is < ns; ++is) {
        const double p = x_(ic * ns + is, ic * ns + is).real();
        if (ic == nc - 1) top_c += p;
        if (is == ns - 1 && ns > 1) top_s += p;
        photon += double(ic) * p;
      }
    }
    s.top_cavity_pop = top_c;
    s.top_source_pop = top_s;
    s.photon_number = photon;
    out_.max_top_cavity = std::max(out_.max_top_cavity, top_c);
    out_.max_top_source = std::max(out_.max_top_source, top_s);
    if (top_c > kTruncationGuard) {
      throw TruncationError("cascade: cavity top-level population " + std::to_string(top_c) +
                                " at t = " + std::to_string(t) + " ns exceeds guard; raise dim_cavity",
                            top_c);
    }
    if (top_s > kTruncationGuard) {
      throw TruncationError("cascade: source top-level population " + std::to_string(top_s) +
                                " at t = " + std::to_string(t) + " ns exceeds guard; raise dim_source",
                            top_s);
    }

    if (with_eigs) {
      Eigen::MatrixXcd sym = 0.5 * (x_ + x_.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
      s.min_eigenvalue = es.eigenvalues().minCoeff();
      out_.min_eigenvalue = std::min(out_.min_eigenvalue, s.min_eigenvalue);
      if (s.min_eigenvalue < kPositivityGuard) {
        throw PositivityError("cascade: diagonal block eigenvalue " +
                              std::to_string(s.min_eigenvalue) + " below guard at t = " +
                              std::to_string(t) + " ns");
      }
    }
    out_.samples.push_back(s);
  }

  const PairGenerator& gen_;
  const SharedOps& shared_;
  const RunOptions& opt_;
  double dt_;
  PairJob job_;
  CMatRM x_, k_, tmp_, acc_, scratch_;
  PairOutcome out_;
};

struct ChannelExtraction {
  channel::ChannelElements elements;
  CascadeDiagnostics diagnostics;
};

ChannelExtraction integrate_all(const SharedOps& shared, const RunOptions& opt, double dt) {
  // Unique (bra, ket) sector pairs; identical qubits make 01 and 10
  // interchangeable, so the 10 logical pairs reduce to six integrations. The
  // (0,0) entry covers both the degenerate diagonal blocks and the 01-10
  // coherence.
  std::vector<PairJob> jobs;
  if (opt.full_diagnostics) {
    jobs.push_back({+2, +2, true, false});
    jobs.push_back({0, 0, true, true});
    jobs.push_back({-2, -2, true, false});
  } else {
    jobs.push_back({0, 0, true, true});
    jobs.push_back({-2, -2, true, false});  // largest displacement, truncation guard
  }
  jobs.push_back({+2, 0, false, false});
  jobs.push_back({+2, -2, false, false});
  jobs.push_back({0, -2, false, false});

  std::vector<PairGenerator> gens(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    gens[i] = make_pair_generator(shared.params, shared.dpa, shared.trunc, jobs[i].sector_bra,
                                  jobs[i].sector_ket);
  }

  std::vector<PairOutcome> outcomes(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads =
      std::min<unsigned>(opt.threads > 0 ? unsigned(opt.threads) : hw, unsigned(jobs.size()));

  const auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      try {
        PairIntegrator integ(gens[i], shared, opt, dt, jobs[i]);
        outcomes[i] = integ.run();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::map<std::pair<int, int>, std::size_t> by_sectors;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    by_sectors[{jobs[i].sector_bra, jobs[i].sector_ket}] = i;
  }

  ChannelExtraction out;
  for (int m = 0; m < channel::kBasisSize; ++m) {
    for (int n = m + 1; n < channel::kBasisSize; ++n) {
      const int sb = channel::sector_sum(m);
      const int sk = channel::sector_sum(n);
      const auto it = by_sectors.find({sb, sk});
      const PairOutcome& po = outcomes[it->second];
      const cd ratio = po.trace_end / po.trace_start;
      const double gamma = std::max(0.0, -std::log(std::abs(ratio)));
      const double mu = std::arg(ratio);
      out.elements.gamma(m, n) = gamma;
      out.elements.gamma(n, m) = gamma;
      out.elements.mu(m, n) = mu;
      out.elements.mu(n, m) = -mu;
    }
  }

  CascadeDiagnostics& diag = out.diagnostics;
  diag.dt_used_ns = dt;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const PairOutcome& po = outcomes[i];
    diag.prerelax_duration_ns = std::max(diag.prerelax_duration_ns, po.prerelax_ns);
    diag.max_trace_drift = std::max(diag.max_trace_drift, po.max_trace_drift);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, po.min_eigenvalue);
    diag.max_top_cavity_pop = std::max(diag.max_top_cavity_pop, po.max_top_cavity);
    diag.max_top_source_pop = std::max(diag.max_top_source_pop, po.max_top_source);
    diag.max_coherence_excess = std::max(diag.max_coherence_excess, po.max_coherence_excess);
    if (jobs[i].is_sector0_diag) diag.samples = po.samples;
  }
  return out;
}

GateRunResult run_gate_impl(const SharedOps& shared, const RunOptions& opt) {
  const auto t_begin = std::chrono::steady_clock::now();
  shared.params.validate();
  shared.drive.validate();
  shared.dpa.validate();

  // Stability clamp: RK4 is stable for |lambda| dt <~ 2.8; estimate the
  // spectral radius at peak drive on the widest-detuning pair.
  const PairGenerator probe =
      make_pair_generator(shared.params, shared.dpa, shared.trunc, -2, -2);
  const double eps_peak = units::angular(shared.drive.eps0_mhz);
  const double bound = spectral_bound(probe, eps_peak);
  double dt = opt.dt_ns;
  if (bound * dt > 2.5) {
    dt = 2.5 / bound;
  }

  ChannelExtraction main_run = integrate_all(shared, opt, dt);
  main_run.diagnostics.spectral_bound = bound;

  if (opt.audit_halved_step) {
    RunOptions half = opt;
    half.audit_halved_step = false;
    ChannelExtraction audit = integrate_all(shared, half, 0.5 * dt);
    main_run.diagnostics.audit_max_dgamma =
        (audit.elements.gamma - main_run.elements.gamma).cwiseAbs().maxCoeff();
    main_run.diagnostics.audit_max_dmu =
        (audit.elements.mu - main_run.elements.mu).cwiseAbs().maxCoeff();
  }

  GateRunResult result;
  result.elements = main_run.elements;
  result.diagnostics = main_run.diagnostics;
  result.elements.validate();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return result;
}

}  // namespace

GateRunResult run_gate(const SystemParams& params, const DriveParams& drive,
                       const DpaParams& dpa, const Truncations& trunc, const RunOptions& opt) {
  SharedOps shared{params, drive, dpa, trunc,
                   units::angular(params.kappa_mhz),
                   trunc.source > 1 ? units::angular(dpa.gamma_b_mhz) : 0.0};
  return run_gate_impl(shared, opt);
}

GateRunResult run_gate_plain(const SystemParams& params, const DriveParams& drive,
                             int cavity_dim, const RunOptions& opt) {
  DpaParams off;
  off.pump_mhz = 0.0;
  Truncations trunc;
  trunc.cavity = cavity_dim;
  trunc.source = 1;
  return run_gate(params, drive, off, trunc, opt);
}

}  // namespace ripgate::cascade
