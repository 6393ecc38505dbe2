#include "ripgate/fock.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "ripgate/errors.hpp"

namespace ripgate::fock {

CMat ladder(int dim) {
  if (dim < 2) {
    throw InvalidDimensionError("ladder: dim must be >= 2, got " + std::to_string(dim));
  }
  CMat a = CMat::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    a(n, n + 1) = std::sqrt(double(n + 1));
  }
  return a;
}

CMat number(int dim) {
  if (dim < 1) {
    throw InvalidDimensionError("number: dim must be >= 1");
  }
  CMat n = CMat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = double(k);
  return n;
}

CMat identity(int dim) {
  if (dim < 1) {
    throw InvalidDimensionError("identity: dim must be >= 1");
  }
  return CMat::Identity(dim, dim);
}

CMat tensor(const CMat& a, const CMat& b) {
  CMat c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return c;
}

CMat squeeze_operator(int dim, double r, double theta) {
  const CMat a = ladder(dim);
  const cd xi = std::polar(r, theta);
  const CMat a2 = a * a;
  CMat gen = 0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
  return gen.exp();
}

CMat squeezed_vacuum(int dim, double r, double theta) {
  if (r < 0) {
    throw std::invalid_argument("squeezed_vacuum: r must be >= 0");
  }
  const CMat s = squeeze_operator(dim, r, theta);
  CVec psi = s.col(0);  // S|0>
  const double top_two = std::norm(psi(dim - 1)) + (dim >= 2 ? std::norm(psi(dim - 2)) : 0.0);
  if (top_two > kTruncationTolerance) {
    throw TruncationError(
        "squeezed_vacuum: top-two-level population " + std::to_string(top_two) +
            " exceeds " + std::to_string(kTruncationTolerance) + " at dim " + std::to_string(dim),
        top_two);
  }
  return psi * psi.adjoint();
}

CMat vacuum(int dim) {
  CMat rho = CMat::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return rho;
}

StateDiagnostics diagnostics(const CMat& rho) {
  StateDiagnostics d{};
  d.trace_deviation = std::abs(rho.trace() - cd(1.0, 0.0));
  d.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  CMat sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  d.purity = (rho * rho).trace().real();
  return d;
}

double quadrature_variance(const CMat& rho, double phi) {
  const int dim = int(rho.rows());
  const CMat a = ladder(dim);
  const CMat x = 0.5 * (a * std::polar(1.0, -phi) + a.adjoint() * std::polar(1.0, phi));
  const double mean = (rho * x).trace().real();
  const double mean_sq = (rho * x * x).trace().real();
  return mean_sq - mean * mean;
}

}  // namespace ripgate::fock
