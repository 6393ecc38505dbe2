#include "ripgate/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ripgate/errors.hpp"
#include "ripgate/units.hpp"

namespace ripgate::channel {

using cd = std::complex<double>;

void ChannelElements::validate(double tol) const {
  for (int m = 0; m < kBasisSize; ++m) {
    if (std::abs(mu(m, m)) > tol || std::abs(gamma(m, m)) > tol) {
      throw std::invalid_argument("ChannelElements: diagonal entries must vanish");
    }
    for (int n = 0; n < kBasisSize; ++n) {
      if (std::abs(gamma(m, n) - gamma(n, m)) > tol) {
        throw std::invalid_argument("ChannelElements: gamma must be symmetric");
      }
      if (std::abs(mu(m, n) + mu(n, m)) > tol) {
        throw std::invalid_argument("ChannelElements: mu must be antisymmetric");
      }
      if (gamma(m, n) < -tol) {
        throw std::invalid_argument("ChannelElements: gamma must be nonnegative");
      }
    }
  }
}

double ChannelElements::mu_zz() const {
  // (phi_00 + phi_11 - phi_01 - phi_10)/2 expressed through pairwise phases.
  return 0.5 * (mu(0, 1) + mu(3, 2));
}

double thermal_occupation(double r_d, double gamma_bw_mhz, double offset_mhz) {
  if (gamma_bw_mhz < 0) throw std::invalid_argument("thermal_occupation: gamma_bw must be >= 0");
  const double s = std::sinh(r_d);
  if (gamma_bw_mhz == 0.0) {
    return offset_mhz == 0.0 ? s * s : 0.0;
  }
  const double g2 = gamma_bw_mhz * gamma_bw_mhz;
  return s * s * g2 / (offset_mhz * offset_mhz + g2);
}

namespace {

double rate_prefactor(const SystemParams& params) {
  const double chi = units::angular(params.chi_mhz());
  const double kappa = units::angular(params.kappa_mhz);
  const double delta_r = units::angular(params.delta_r_mhz);
  return 4.0 * chi * chi * kappa / (delta_r * delta_r);
}

// Squeezing factor e^{-2r} cos^2 Phi + e^{2r} sin^2 Phi at one sample; the
// |alpha|^2 weight kills the undefined-arg case at exact zeros.
double rate_at_sample(const traj::SectorTrajectory& s0, std::size_t k, double n_thermal,
                      double e_m2r, double e_p2r, double theta) {
  const cd a = s0.alpha[k];
  const double abs2 = std::norm(a);
  double sq = 0.0;
  if (abs2 > 0.0) {
    const double phi = theta - std::arg(a);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    sq = 0.5 * abs2 * (e_m2r * c * c + e_p2r * s * s);
  }
  return n_thermal + sq;
}

// Composite Simpson on a uniform grid; odd interval counts get a 3/8 block at
// the end.
double simpson(const std::vector<double>& f, double dt) {
  const std::size_t n = f.size() - 1;
  if (n < 1) return 0.0;
  if (n == 1) return 0.5 * dt * (f[0] + f[1]);
  std::size_t n_simpson = (n % 2 == 0) ? n : n - 3;
  double total = 0.0;
  if (n % 2 != 0 && n < 3) {
    n_simpson = 0;
  }
  for (std::size_t k = 0; k + 2 <= n_simpson; k += 2) {
    total += dt / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
  }
  if (n % 2 != 0) {
    if (n >= 3) {
      const std::size_t k = n - 3;
      total += 3.0 * dt / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    } else {
      total += 0.5 * dt * (f[n - 1] + f[n]);
    }
  }
  return total;
}

}  // namespace

double dephasing_rate(double t_ns, const traj::FieldTrajectory& trajectory,
                      const SqueezeParams& sqz, const SystemParams& params) {
  const auto& s0 = trajectory.sector(0);
  const std::size_t k = trajectory.sample_index(t_ns);
  const double r = sqz.r();
  const double n_th = thermal_occupation(r, sqz.gamma_bw_mhz, params.delta_r_mhz);
  return rate_prefactor(params) *
         rate_at_sample(s0, k, n_th, std::exp(-2.0 * r), std::exp(2.0 * r), sqz.theta_rad);
}

double integrated_dephasing(const traj::FieldTrajectory& trajectory, const SqueezeParams& sqz,
                            const SystemParams& params) {
  const auto& s0 = trajectory.sector(0);
  const double r = sqz.r();
  const double n_th = thermal_occupation(r, sqz.gamma_bw_mhz, params.delta_r_mhz);
  const double e_m2r = std::exp(-2.0 * r);
  const double e_p2r = std::exp(2.0 * r);
  std::vector<double> f(s0.alpha.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = rate_at_sample(s0, k, n_th, e_m2r, e_p2r, sqz.theta_rad);
  }
  return rate_prefactor(params) * simpson(f, trajectory.dt_ns);
}

Eigen::Matrix4d integrated_gamma(const traj::FieldTrajectory& trajectory,
                                 const SqueezeParams& sqz, const SystemParams& params) {
  const double base = integrated_dephasing(trajectory, sqz, params);
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  for (int m = 0; m < kBasisSize; ++m) {
    for (int n = 0; n < kBasisSize; ++n) {
      const double ds = 0.5 * double(sector_sum(m) - sector_sum(n));
      g(m, n) = ds * ds * base;
    }
  }
  return g;
}

Eigen::Matrix4d channel_phases(const traj::FieldTrajectory& trajectory,
                               const SystemParams& params) {
  (void)params;
  double phi[kBasisSize];
  for (int m = 0; m < kBasisSize; ++m) {
    phi[m] = trajectory.sector(sector_sum(m)).phase.back();
  }
  Eigen::Matrix4d mu;
  for (int m = 0; m < kBasisSize; ++m) {
    for (int n = 0; n < kBasisSize; ++n) {
      mu(m, n) = phi[m] - phi[n];
    }
  }
  return mu;
}

ChannelElements analytic_channel(const traj::FieldTrajectory& trajectory,
                                 const SqueezeParams& sqz, const SystemParams& params) {
  ChannelElements ch;
  ch.gamma = integrated_gamma(trajectory, sqz, params);
  ch.mu = channel_phases(trajectory, params);
  return ch;
}

namespace {

// F_pro(b1, b2) = (1/16) Re sum_mn conj(u_m) u_n e^{i(mu_mn + b1 D1 + b2 D2)} e^{-gamma_mn}
// with u = diag(U_zz) and D_i the sigma_z difference of basis states. Period
// pi in both angles.
struct EchoObjective {
  cd c[kBasisSize][kBasisSize];
  int d1[kBasisSize][kBasisSize];
  int d2[kBasisSize][kBasisSize];

  explicit EchoObjective(const ChannelElements& ch) {
    static constexpr double u[kBasisSize] = {1.0, 1.0, 1.0, -1.0};
    for (int m = 0; m < kBasisSize; ++m) {
      for (int n = 0; n < kBasisSize; ++n) {
        c[m][n] = u[m] * u[n] * std::exp(cd(-ch.gamma(m, n), ch.mu(m, n)));
        d1[m][n] = spin1(m) - spin1(n);
        d2[m][n] = spin2(m) - spin2(n);
      }
    }
  }

  double operator()(double b1, double b2) const {
    double f = 0.0;
    for (int m = 0; m < kBasisSize; ++m) {
      for (int n = 0; n < kBasisSize; ++n) {
        f += (c[m][n] * std::polar(1.0, b1 * d1[m][n] + b2 * d2[m][n])).real();
      }
    }
    return f / 16.0;
  }
};

}  // namespace

EchoFit echo_correct(const ChannelElements& ch) {
  const EchoObjective obj(ch);

  // Coarse scan over one period, then shrinking 3x3 stencil refinement.
  constexpr int kGrid = 48;
  double best_f = -2.0, b1 = 0.0, b2 = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double x = units::kPi * i / kGrid;
      const double y = units::kPi * j / kGrid;
      const double f = obj(x, y);
      if (f > best_f) {
        best_f = f;
        b1 = x;
        b2 = y;
      }
    }
  }
  double h = units::kPi / kGrid;
  for (int iter = 0; iter < 48; ++iter) {
    bool moved = false;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const double f = obj(b1 + di * h, b2 + dj * h);
        if (f > best_f) {
          best_f = f;
          b1 += di * h;
          b2 += dj * h;
          moved = true;
        }
      }
    }
    if (!moved) h *= 0.5;
  }

  EchoFit fit;
  fit.z1 = b1;
  fit.z2 = b2;
  fit.process_fidelity = std::min(1.0, best_f);
  return fit;
}

double gate_error(const ChannelElements& ch) {
  const double e = 1.0 - echo_correct(ch).process_fidelity;
  return std::clamp(e, 0.0, 1.0);
}

double average_fidelity(const ChannelElements& ch) {
  const double f_pro = echo_correct(ch).process_fidelity;
  return (4.0 * f_pro + 1.0) / 5.0;
}

SqueezeScan optimal_squeezing(const SystemParams& params, const DriveParams& drive,
                              const SqueezeParams& base, const std::vector<double>& db_grid,
                              double dt_ns) {
  if (db_grid.empty()) throw std::invalid_argument("optimal_squeezing: empty grid");
  for (std::size_t i = 1; i < db_grid.size(); ++i) {
    if (!(db_grid[i] > db_grid[i - 1])) {
      throw std::invalid_argument("optimal_squeezing: grid must be strictly increasing");
    }
  }
  traj::PropagateOptions opt;
  opt.dt_ns = dt_ns;
  const traj::FieldTrajectory trajectory = traj::propagate_all(params, drive, opt);

  SqueezeScan scan;
  for (double db : db_grid) {
    SqueezeParams sqz = base;
    sqz.db = db;
    const ChannelElements ch = analytic_channel(trajectory, sqz, params);
    SqueezeScanPoint p;
    p.db = db;
    p.theta_rad = sqz.theta_rad;
    p.error = gate_error(ch);
    p.f_avg = average_fidelity(ch);
    p.gamma_00_11 = ch.gamma(0, 3);
    p.mu_zz = ch.mu_zz();
    scan.points.push_back(p);
  }
  scan.argmin = 0;
  for (std::size_t i = 1; i < scan.points.size(); ++i) {
    if (scan.points[i].error < scan.points[scan.argmin].error) scan.argmin = i;
  }
  return scan;
}

}  // namespace ripgate::channel
