#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ripgate::superop {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Column-stacking vectorization, vec(A X B) = (B^T kron A) vec(X).
CVec vec(const CMat& rho);
CMat unvec(const CVec& v, int dim);

// Dense Liouvillian matrix for d rho/dt = -i[H, rho] + sum_j D[J_j] rho.
// Intended for small dimensions (source-only oracles); the cascade integrator
// never materializes this.
CMat liouvillian(const CMat& h, const std::vector<CMat>& jumps);

// Shares one QR factorization of the trace-augmented Liouvillian between the
// steady-state solve and any number of regression solves.
class LiouvilleSolver {
 public:
  LiouvilleSolver(const CMat& liou, int dim);

  // Unique steady state, hermitized and trace-normalized.
  CMat steady_state() const;

  // Integrated quantum-regression correlator:
  //   int_0^inf tr[obs e^{L tau} seed] d tau = tr[obs Y],  L Y = -seed,
  // with tr(Y) pinned to zero. Requires tr(seed) = 0.
  std::complex<double> regression_integral(const CMat& obs, const CMat& seed) const;

 private:
  int dim_;
  Eigen::ColPivHouseholderQR<CMat> qr_;
};

CMat steady_state(const CMat& liou, int dim);
std::complex<double> regression_integral(const CMat& liou, const CMat& obs, const CMat& seed);

}  // namespace ripgate::superop
