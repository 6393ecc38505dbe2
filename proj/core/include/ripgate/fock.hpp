#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ripgate::fock {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cd = std::complex<double>;

// Truncation guard for state constructors: the combined population of the top
// two Fock levels must stay below this. (A tolerance of 1e-6 would reject
// r = 1 at dim 40, where the exact top-two population is ~2.7e-6.)
inline constexpr double kTruncationTolerance = 1e-5;

// Annihilation operator in the number basis, <n|a|n+1> = sqrt(n+1).
CMat ladder(int dim);
CMat number(int dim);
CMat identity(int dim);

// Kronecker product with the left factor varying slowest.
CMat tensor(const CMat& a, const CMat& b);

// exp((conj(xi) a^2 - xi a^dag^2)/2) with xi = r e^{i theta}; unitary on the
// truncated space because the generator is exactly anti-Hermitian.
CMat squeeze_operator(int dim, double r, double theta);

// Single-mode squeezed vacuum as a density operator. Quadrature variance
// along the theta/2-rotated axis is e^{-2r}/4 (vacuum variance 1/4,
// x = (a + a^dag)/2). Throws TruncationError if the top two levels hold more
// than kTruncationTolerance.
CMat squeezed_vacuum(int dim, double r, double theta);

CMat vacuum(int dim);

struct StateDiagnostics {
  double trace_deviation;        // |tr(rho) - 1|
  double hermiticity_deviation;  // max entrywise |rho - rho^dag|
  double min_eigenvalue;         // of the symmetrized state
  double purity;                 // tr(rho^2)
};

// Read-only report; never mutates the input.
StateDiagnostics diagnostics(const CMat& rho);

// Variance of X_phi = (a e^{-i phi} + a^dag e^{i phi})/2 in state rho.
double quadrature_variance(const CMat& rho, double phi);

}  // namespace ripgate::fock
