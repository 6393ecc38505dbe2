#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ripgate/params.hpp"
#include "ripgate/trajectory.hpp"

namespace ripgate::channel {

// Two-qubit computational basis order {00, 01, 10, 11}; sigma_z eigenvalue +1
// for |0>.
inline constexpr int kBasisSize = 4;
inline int spin1(int m) { return m < 2 ? +1 : -1; }
inline int spin2(int m) { return (m % 2 == 0) ? +1 : -1; }
inline int sector_sum(int m) { return spin1(m) + spin2(m); }

// Dephasing channel on the qubits: E(|ij><kl|) = e^{i mu - gamma} |ij><kl|.
// gamma is symmetric with zero diagonal, mu antisymmetric with zero diagonal.
struct ChannelElements {
  Eigen::Matrix4d mu = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d gamma = Eigen::Matrix4d::Zero();

  void validate(double tol = 1e-9) const;
  // Half the parity combination (phi_00 + phi_11 - phi_01 - phi_10)/2; equals
  // the accumulated ZZ area, pi/2 for a calibrated gate.
  double mu_zz() const;
};

// Thermal photon population of the squeezed input at `offset_mhz` from the
// carrier: sinh^2(r_d) * Gamma^2/(offset^2 + Gamma^2). Unit-peak Lorentzian so
// that offset -> 0 recovers sinh^2 r. gamma_bw == 0 is the zero-bandwidth
// limit (0 away from the carrier).
double thermal_occupation(double r_d, double gamma_bw_mhz, double offset_mhz);

// Instantaneous adiabatic dephasing rate (angular, 1/ns) for a |Delta S| = 2
// coherence:
//   gamma_phi(t) = (4 chi^2 kappa / delta_r^2)
//                  [N(omega_r) + |alpha|^2/2 (e^{-2r} cos^2 Phi + e^{2r} sin^2 Phi)]
// with Phi = theta - arg[alpha(t)] taken from the sector-0 trajectory.
double dephasing_rate(double t_ns, const traj::FieldTrajectory& trajectory,
                      const SqueezeParams& sqz, const SystemParams& params);

// Time integral of gamma_phi over the gate window (Simpson on the grid).
double integrated_dephasing(const traj::FieldTrajectory& trajectory, const SqueezeParams& sqz,
                            const SystemParams& params);

// gamma_{ij,kl} = ((S_ij - S_kl)/2)^2 * int gamma_phi dt.
Eigen::Matrix4d integrated_gamma(const traj::FieldTrajectory& trajectory,
                                 const SqueezeParams& sqz, const SystemParams& params);

// mu_{ij,kl} = phi_{ij} - phi_{kl} from the per-sector deterministic phases;
// needs all three sector trajectories.
Eigen::Matrix4d channel_phases(const traj::FieldTrajectory& trajectory,
                               const SystemParams& params);

ChannelElements analytic_channel(const traj::FieldTrajectory& trajectory,
                                 const SqueezeParams& sqz, const SystemParams& params);

// Single-qubit Z and global phases are removed by minimizing the error over
// the free angles (the global phase drops out of all matrix-element
// differences); initial guess from the Stark phases, then a grid + simplex
// polish.
struct EchoFit {
  double z1 = 0.0;
  double z2 = 0.0;
  double process_fidelity = 0.0;
};
EchoFit echo_correct(const ChannelElements& ch);

// E = 1 - <psi_T| E'(|psi_0><psi_0|) |psi_T> for the uniform-superposition
// initial state and psi_T = U_zz psi_0, after echo correction. For this
// channel family the overlap equals the process fidelity.
double gate_error(const ChannelElements& ch);

// F_avg = (d F_pro + 1)/(d + 1) with d = 4.
double average_fidelity(const ChannelElements& ch);

struct SqueezeScanPoint {
  double db = 0.0;
  double theta_rad = 0.0;
  double error = 0.0;
  double f_avg = 0.0;
  double gamma_00_11 = 0.0;
  double mu_zz = 0.0;
};

struct SqueezeScan {
  std::vector<SqueezeScanPoint> points;
  std::size_t argmin = 0;

  double best_db() const { return points[argmin].db; }
  double best_error() const { return points[argmin].error; }
};

// Grid scan of the analytic gate error over squeezing power at fixed angle;
// no interpolation beyond the grid.
SqueezeScan optimal_squeezing(const SystemParams& params, const DriveParams& drive,
                              const SqueezeParams& base, const std::vector<double>& db_grid,
                              double dt_ns = 0.005);

}  // namespace ripgate::channel
