#include "ripgate/superop.hpp"

#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace ripgate::superop {

using cd = std::complex<double>;

CVec vec(const CMat& rho) {
  CVec v(rho.size());
  int k = 0;
  for (int j = 0; j < rho.cols(); ++j) {
    for (int i = 0; i < rho.rows(); ++i) v(k++) = rho(i, j);
  }
  return v;
}

CMat unvec(const CVec& v, int dim) {
  CMat rho(dim, dim);
  int k = 0;
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) rho(i, j) = v(k++);
  }
  return rho;
}

CMat liouvillian(const CMat& h, const std::vector<CMat>& jumps) {
  const int dim = int(h.rows());
  const CMat id = CMat::Identity(dim, dim);
  const cd i_unit(0.0, 1.0);
  CMat liou = -i_unit * (Eigen::kroneckerProduct(id, h) -
                         Eigen::kroneckerProduct(h.transpose(), id));
  for (const CMat& j : jumps) {
    const CMat jdj = j.adjoint() * j;
    liou += Eigen::kroneckerProduct(j.conjugate(), j);
    liou -= 0.5 * Eigen::kroneckerProduct(id, jdj);
    liou -= 0.5 * Eigen::kroneckerProduct(jdj.transpose(), id);
  }
  return liou;
}

LiouvilleSolver::LiouvilleSolver(const CMat& liou, int dim) : dim_(dim) {
  const int n2 = dim * dim;
  if (liou.rows() != n2 || liou.cols() != n2) {
    throw std::invalid_argument("LiouvilleSolver: size mismatch");
  }
  CMat aug(n2 + 1, n2);
  aug.topRows(n2) = liou;
  aug.row(n2).setZero();
  for (int i = 0; i < dim; ++i) aug(n2, i * dim + i) = 1.0;  // trace row
  qr_.compute(aug);
}

CMat LiouvilleSolver::steady_state() const {
  const int n2 = dim_ * dim_;
  CVec rhs = CVec::Zero(n2 + 1);
  rhs(n2) = 1.0;
  CMat rho = unvec(qr_.solve(rhs), dim_);
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();
  return rho;
}

cd LiouvilleSolver::regression_integral(const CMat& obs, const CMat& seed) const {
  if (std::abs(seed.trace()) > 1e-9) {
    throw std::invalid_argument("regression_integral: seed must be traceless");
  }
  const int n2 = dim_ * dim_;
  CVec rhs(n2 + 1);
  rhs.head(n2) = -vec(seed);
  rhs(n2) = 0.0;  // pin tr(Y) = 0
  const CMat ymat = unvec(qr_.solve(rhs), dim_);
  return (obs * ymat).trace();
}

CMat steady_state(const CMat& liou, int dim) {
  return LiouvilleSolver(liou, dim).steady_state();
}

cd regression_integral(const CMat& liou, const CMat& obs, const CMat& seed) {
  const int dim = int(seed.rows());
  return LiouvilleSolver(liou, dim).regression_integral(obs, seed);
}

}  // namespace ripgate::superop
