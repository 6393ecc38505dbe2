#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "ripgate/channel.hpp"
#include "ripgate/params.hpp"
#include "ripgate/sparse.hpp"

namespace ripgate::cascade {

using cd = std::complex<double>;
using sparse::CMatRM;

// Diagonal-block populations above this trip a TruncationError.
inline constexpr double kTruncationGuard = 1e-4;
// PositivityError threshold for diagonal-block eigenvalues.
inline constexpr double kPositivityGuard = -1e-6;

struct Truncations {
  int cavity = 20;
  int source = 12;  // 1 disables the source mode entirely
};

struct RunOptions {
  double dt_ns = 0.01;
  // Pre-relaxation runs for max(5/Gamma_b, min(5/kappa, cap)); the cap keeps
  // narrow-linewidth cavities from demanding ~10^6 steps for a sub-1e-6
  // effect on the extracted exponents. A staleness exit fires earlier when
  // ||dX/dt||/||X|| per ns falls below `staleness_per_ns`.
  double prerelax_cap_ns = 400.0;
  double staleness_per_ns = 1e-8;
  bool full_diagnostics = true;     // evolve every diagonal sector block
  bool audit_halved_step = false;   // repeat the run at dt/2, record deltas
  int threads = 0;                  // 0 = hardware concurrency
  double sample_stride_ns = 1.0;    // trace/population sampling
  double eig_stride_ns = 10.0;      // positivity sampling (costly)
};

// Truncated joint cavity (x) source coherence block between two qubit
// configurations; the composite index is i_cavity * dim_source + i_source.
struct SectorBlock {
  int sector_bra = 0;
  int sector_ket = 0;
  CMatRM block;
  double time_ns = 0.0;
};

struct DiagnosticsSample {
  double t_ns = 0.0;
  double trace_deviation = 0.0;  // max |tr X - 1| over diagonal blocks
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  double top_cavity_pop = 0.0;
  double top_source_pop = 0.0;
  double photon_number = 0.0;  // <a^dag a> in the sector-0 diagonal block
};

struct CascadeDiagnostics {
  std::vector<DiagnosticsSample> samples;
  double prerelax_duration_ns = 0.0;
  double dt_used_ns = 0.0;
  double spectral_bound = 0.0;  // power-iteration |lambda|_max estimate
  double max_trace_drift = 0.0;
  double min_eigenvalue = 1.0;
  double max_top_cavity_pop = 0.0;
  double max_top_source_pop = 0.0;
  // max over the gate window of |tr X(t)|/|tr X(start)| - 1 for coherence
  // blocks. The reversible qubit-field entanglement makes |tr X| dip and
  // recover within the window, but it can never exceed its starting value.
  double max_coherence_excess = 0.0;
  double audit_max_dgamma = std::numeric_limits<double>::quiet_NaN();
  double audit_max_dmu = std::numeric_limits<double>::quiet_NaN();
};

struct GateRunResult {
  channel::ChannelElements elements;
  CascadeDiagnostics diagnostics;
  double wall_seconds = 0.0;
};

// Sparse operator set for one (bra, ket) sector pair of the cascaded master
// equation in the drive frame:
//   dX/dt = A0 X + X B0 - i eps(t) (D X - X D) + J X J^dag
// with A0 = -i H_bra - K/2, B0 = +i H_ket - K/2, K = J^dag J,
// H_s = delta_s a^dag a + i(lambda/2)(e^{-2 i theta} b^2 - h.c.)
//       + (i/2) sqrt(kappa Gamma_b) (b^dag a - a^dag b),
// J = sqrt(kappa) a + sqrt(Gamma_b) b.
struct PairGenerator {
  int dim_cavity = 0;
  int dim_source = 0;
  int dim = 0;
  int sector_bra = 0;
  int sector_ket = 0;
  sparse::BandedOperator a0;
  sparse::BandedOperator b0;
  sparse::BandedOperator drive;  // a + a^dag
  sparse::BandedOperator jump;
  sparse::BandedOperator jump_dag;
};

PairGenerator make_pair_generator(const SystemParams& params, const DpaParams& dpa,
                                  const Truncations& trunc, int sector_bra, int sector_ket);

// y = generator applied to x at drive amplitude eps (rad/ns); scratch must
// match x's shape.
void evaluate_rhs(const PairGenerator& gen, const CMatRM& x, double eps_rad_ns, CMatRM& y,
                  CMatRM& scratch);

// Power-iteration estimate of the generator's spectral radius at peak drive;
// used to clamp dt so RK4 stays inside its stability region.
double spectral_bound(const PairGenerator& gen, double eps_peak_rad_ns, int iters = 30);

// Full gate run: pre-relax the source+cavity to the squeezed steady state,
// integrate the sector-pair blocks across the gate window, extract
// e^{i mu - gamma} from normalized block traces.
GateRunResult run_gate(const SystemParams& params, const DriveParams& drive,
                       const DpaParams& dpa, const Truncations& trunc, const RunOptions& opt);

// Plain coherent-drive master equation (source mode removed); oracle for the
// zero-squeezing channel.
GateRunResult run_gate_plain(const SystemParams& params, const DriveParams& drive,
                             int cavity_dim, const RunOptions& opt);

}  // namespace ripgate::cascade
