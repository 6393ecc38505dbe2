#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <vector>

#include "ripgate/params.hpp"

namespace ripgate::traj {

using cd = std::complex<double>;

// Gaussian pulse amplitude in MHz; zero outside [-t_g/2, t_g/2].
double envelope(double t_ns, const DriveParams& drive);

// delta_r + s*chi in MHz for sector s = sigma_z1 + sigma_z2 in {+2, 0, -2}.
double sector_detuning(const SystemParams& params, int sector);

struct SectorTrajectory {
  int sector = 0;
  std::vector<cd> alpha;      // cavity amplitude per grid sample
  std::vector<double> phase;  // accumulated deterministic phase -int eps Re[alpha] dt (rad)
  double zz_area = 0.0;       // int 4 chi^2 |alpha|^2 / delta_r dt, angular (rad)

  double max_abs2() const;
  // |alpha(t_g/2)|^2 / max |alpha|^2
  double closure_ratio() const;
};

// Uniform grid over [-t_g/2, +t_g/2]; sector 0 is doubly degenerate
// (|01>, |10>) and stored once.
struct FieldTrajectory {
  double t_start_ns = 0.0;
  double dt_ns = 0.0;
  std::vector<double> time_ns;
  std::vector<SectorTrajectory> sectors;

  const SectorTrajectory& sector(int s) const;
  bool has_sector(int s) const;
  // Index of the grid sample nearest to t; throws if t is outside the grid.
  std::size_t sample_index(double t_ns) const;
};

struct PropagateOptions {
  double dt_ns = 0.005;
  bool include_kappa = false;  // adds -(kappa/2) alpha to the field ODE
};

// Integrates d(alpha)/dt = -i delta_s alpha - i eps(t) (angular units) with
// RK4 from vacuum at -t_g/2. The step must resolve the fastest sector
// rotation: dt <= 0.2/delta_s (angular).
FieldTrajectory propagate_alpha(const SystemParams& params, const DriveParams& drive,
                                int sector, const PropagateOptions& opt = {});

// All three sectors {+2, 0, -2} on a shared grid.
FieldTrajectory propagate_all(const SystemParams& params, const DriveParams& drive,
                              const PropagateOptions& opt = {});

// Principal-value arg per sample; samples with |alpha| below 1e-30 are
// undefined (the pulse starts from exact vacuum).
std::vector<std::optional<double>> arg_alpha(const SectorTrajectory& sector);

// Accumulated ZZ angular area A = int 4 chi^2 |alpha_0|^2/delta_r dt for the
// sector-0 trajectory. The gate condition is A = pi/2.
double parity_phase(const SystemParams& params, const DriveParams& drive, double dt_ns,
                    bool include_kappa = false);

// CSV columns: t_ns, re_alpha, im_alpha, abs2_alpha, arg_alpha, sector.
void write_csv(std::ostream& os, const FieldTrajectory& traj);

}  // namespace ripgate::traj
