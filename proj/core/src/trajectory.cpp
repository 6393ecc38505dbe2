#include "ripgate/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

#include "ripgate/errors.hpp"
#include "ripgate/units.hpp"

namespace ripgate::traj {

double envelope(double t_ns, const DriveParams& drive) {
  const double half_gate = 0.5 * drive.gate_time_ns();
  if (t_ns < -half_gate || t_ns > half_gate) return 0.0;
  const double u = t_ns / drive.tau_ns;
  return drive.eps0_mhz * std::exp(-u * u);
}

double sector_detuning(const SystemParams& params, int sector) {
  if (sector != 2 && sector != 0 && sector != -2) {
    throw SectorError("sector_detuning: sector must be one of {+2, 0, -2}, got " +
                      std::to_string(sector));
  }
  return params.delta_r_mhz + double(sector) * params.chi_mhz();
}

double SectorTrajectory::max_abs2() const {
  double m = 0.0;
  for (const cd& a : alpha) m = std::max(m, std::norm(a));
  return m;
}

double SectorTrajectory::closure_ratio() const {
  const double m = max_abs2();
  if (m == 0.0) return 0.0;
  return std::norm(alpha.back()) / m;
}

const SectorTrajectory& FieldTrajectory::sector(int s) const {
  for (const auto& st : sectors) {
    if (st.sector == s) return st;
  }
  throw SectorError("FieldTrajectory: sector " + std::to_string(s) + " not present");
}

bool FieldTrajectory::has_sector(int s) const {
  for (const auto& st : sectors) {
    if (st.sector == s) return true;
  }
  return false;
}

std::size_t FieldTrajectory::sample_index(double t_ns) const {
  const double pos = (t_ns - t_start_ns) / dt_ns;
  const auto idx = (long long)std::llround(pos);
  if (idx < 0 || idx >= (long long)time_ns.size()) {
    throw SectorError("FieldTrajectory: time " + std::to_string(t_ns) + " ns outside grid");
  }
  return std::size_t(idx);
}

namespace {

// One-sector RK4 over the gate window. State: (alpha, phase, zz_area).
SectorTrajectory integrate_sector(const SystemParams& params, const DriveParams& drive,
                                  int sector, const PropagateOptions& opt, double dt_eff,
                                  std::size_t n_steps) {
  const double delta_s = units::angular(sector_detuning(params, sector));
  const double delta_r = units::angular(params.delta_r_mhz);
  const double kappa = units::angular(params.kappa_mhz);
  const double chi = units::angular(params.chi_mhz());
  const double area_coeff = 4.0 * chi * chi / delta_r;
  const double half_gate = 0.5 * drive.gate_time_ns();
  const cd i_unit(0.0, 1.0);

  SectorTrajectory st;
  st.sector = sector;
  st.alpha.reserve(n_steps + 1);
  st.phase.reserve(n_steps + 1);

  cd alpha(0.0, 0.0);
  double phase = 0.0;
  double area = 0.0;
  st.alpha.push_back(alpha);
  st.phase.push_back(phase);

  struct Deriv {
    cd dalpha;
    double dphase;
    double darea;
  };
  const auto rhs = [&](double t, cd a) -> Deriv {
    const double eps = units::angular(envelope(t, drive));
    cd da = -i_unit * (delta_s * a + eps);
    if (opt.include_kappa) da -= 0.5 * kappa * a;
    return {da, -eps * a.real(), area_coeff * std::norm(a)};
  };

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = -half_gate + double(k) * dt_eff;
    const Deriv k1 = rhs(t, alpha);
    const Deriv k2 = rhs(t + 0.5 * dt_eff, alpha + 0.5 * dt_eff * k1.dalpha);
    const Deriv k3 = rhs(t + 0.5 * dt_eff, alpha + 0.5 * dt_eff * k2.dalpha);
    const Deriv k4 = rhs(t + dt_eff, alpha + dt_eff * k3.dalpha);
    alpha += dt_eff / 6.0 * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha);
    phase += dt_eff / 6.0 * (k1.dphase + 2.0 * k2.dphase + 2.0 * k3.dphase + k4.dphase);
    area += dt_eff / 6.0 * (k1.darea + 2.0 * k2.darea + 2.0 * k3.darea + k4.darea);
    st.alpha.push_back(alpha);
    st.phase.push_back(phase);
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
      throw DivergenceError("propagate_alpha: non-finite amplitude at t = " +
                            std::to_string(t + dt_eff) + " ns");
    }
  }
  st.zz_area = area;
  return st;
}

FieldTrajectory propagate_sectors(const SystemParams& params, const DriveParams& drive,
                                  const std::vector<int>& sectors, const PropagateOptions& opt) {
  params.validate();
  drive.validate();
  if (!(opt.dt_ns > 0)) throw StepSizeError("propagate_alpha: dt must be > 0");

  double fastest = 0.0;
  for (int s : sectors) {
    fastest = std::max(fastest, std::abs(units::angular(sector_detuning(params, s))));
  }
  if (fastest > 0.0 && opt.dt_ns > 0.2 / fastest) {
    throw StepSizeError("propagate_alpha: dt = " + std::to_string(opt.dt_ns) +
                        " ns too coarse; need dt <= " + std::to_string(0.2 / fastest) + " ns");
  }

  const double gate = drive.gate_time_ns();
  const auto n_steps = std::size_t(std::ceil(gate / opt.dt_ns - 1e-12));
  const double dt_eff = gate / double(n_steps);  // uniform grid hitting both endpoints

  FieldTrajectory traj;
  traj.t_start_ns = -0.5 * gate;
  traj.dt_ns = dt_eff;
  traj.time_ns.resize(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    traj.time_ns[k] = traj.t_start_ns + double(k) * dt_eff;
  }
  for (int s : sectors) {
    traj.sectors.push_back(integrate_sector(params, drive, s, opt, dt_eff, n_steps));
  }
  return traj;
}

}  // namespace

FieldTrajectory propagate_alpha(const SystemParams& params, const DriveParams& drive,
                                int sector, const PropagateOptions& opt) {
  return propagate_sectors(params, drive, {sector}, opt);
}

FieldTrajectory propagate_all(const SystemParams& params, const DriveParams& drive,
                              const PropagateOptions& opt) {
  return propagate_sectors(params, drive, {+2, 0, -2}, opt);
}

std::vector<std::optional<double>> arg_alpha(const SectorTrajectory& sector) {
  std::vector<std::optional<double>> out;
  out.reserve(sector.alpha.size());
  for (const cd& a : sector.alpha) {
    if (std::abs(a) < 1e-30) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(std::arg(a));
    }
  }
  return out;
}

double parity_phase(const SystemParams& params, const DriveParams& drive, double dt_ns,
                    bool include_kappa) {
  PropagateOptions opt;
  opt.dt_ns = dt_ns;
  opt.include_kappa = include_kappa;
  return propagate_alpha(params, drive, 0, opt).sector(0).zz_area;
}

void write_csv(std::ostream& os, const FieldTrajectory& traj) {
  os << "t_ns,re_alpha,im_alpha,abs2_alpha,arg_alpha,sector\n";
  os << std::setprecision(17);
  for (const auto& st : traj.sectors) {
    const auto args = arg_alpha(st);
    for (std::size_t k = 0; k < st.alpha.size(); ++k) {
      const cd a = st.alpha[k];
      os << traj.time_ns[k] << ',' << a.real() << ',' << a.imag() << ',' << std::norm(a) << ',';
      if (args[k]) {
        os << *args[k];
      } else {
        os << "nan";
      }
      os << ',' << st.sector << '\n';
    }
  }
}

}  // namespace ripgate::traj
