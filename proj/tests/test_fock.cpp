#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "ripgate/errors.hpp"
#include "ripgate/fock.hpp"

using namespace ripgate;
using fock::CMat;
using cd = std::complex<double>;

namespace {

CMat random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  CMat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = cd(gauss(rng), gauss(rng));
  }
  return 0.5 * (m + m.adjoint().eval());
}

}  // namespace

TEST_CASE("ladder operator in the smallest space") {
  const CMat a = fock::ladder(2);
  CHECK(a(0, 1) == cd(1.0, 0.0));
  CHECK(a.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK_THROWS_AS(fock::ladder(1), InvalidDimensionError);
}

TEST_CASE("number operator is diagonal 0..dim-1") {
  const CMat a = fock::ladder(5);
  const CMat n = a.adjoint() * a;
  for (int k = 0; k < 5; ++k) {
    CHECK(n(k, k).real() == doctest::Approx(double(k)));
  }
  CHECK((n - fock::number(5)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("commutator [a, a^dag] = 1 away from the truncation edge") {
  const int dim = 30;
  const CMat a = fock::ladder(dim);
  const CMat comm = a * a.adjoint() - a.adjoint() * a;
  // Truncation only corrupts the top level; restrict to n <= 20.
  for (int n = 0; n <= 20; ++n) {
    for (int m = 0; m <= 20; ++m) {
      const double want = n == m ? 1.0 : 0.0;
      CHECK(std::abs(comm(n, m) - cd(want, 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("tensor: identities, trace factorization, commuting factors") {
  CHECK((fock::tensor(fock::identity(2), fock::identity(3)) - fock::identity(6))
            .cwiseAbs()
            .maxCoeff() == doctest::Approx(0.0));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat a = random_hermitian(3, rng);
    const CMat b = random_hermitian(4, rng);
    const cd lhs = fock::tensor(a, b).trace();
    const cd rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);

    const CMat left = fock::tensor(a, fock::identity(4)) * fock::tensor(fock::identity(3), b);
    CHECK((left - fock::tensor(a, b)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("tensor is associative exactly") {
  std::mt19937_64 rng(11);
  const CMat a = random_hermitian(2, rng);
  const CMat b = random_hermitian(3, rng);
  const CMat c = random_hermitian(2, rng);
  const CMat lhs = fock::tensor(fock::tensor(a, b), c);
  const CMat rhs = fock::tensor(a, fock::tensor(b, c));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("squeezed vacuum: photon number, minimum uncertainty, variance axis") {
  const CMat rho0 = fock::squeezed_vacuum(16, 0.0, 0.0);
  CHECK((rho0 - fock::vacuum(16)).cwiseAbs().maxCoeff() < 1e-14);

  const int dim = 40;
  const double r = 1.0;
  const CMat rho = fock::squeezed_vacuum(dim, r, 0.0);
  const CMat n = fock::number(dim);
  const double photons = (rho * n).trace().real();
  const double want = std::sinh(r) * std::sinh(r);
  // dim 40 keeps the truncation loss in <n> at the 1e-4 relative level.
  CHECK(photons == doctest::Approx(want).epsilon(1e-3));

  const double vx = fock::quadrature_variance(rho, 0.0);
  const double vp = fock::quadrature_variance(rho, 0.5 * M_PI);
  CHECK(vx == doctest::Approx(std::exp(-2.0 * r) / 4.0).epsilon(5e-3));
  CHECK(vx * vp == doctest::Approx(1.0 / 16.0).epsilon(5e-3));

  // Minimum uncertainty is exact once truncation stops biting.
  const CMat rho64 = fock::squeezed_vacuum(64, r, 0.0);
  const double vx64 = fock::quadrature_variance(rho64, 0.0);
  const double vp64 = fock::quadrature_variance(rho64, 0.5 * M_PI);
  CHECK(vx64 * vp64 == doctest::Approx(1.0 / 16.0).epsilon(1e-6));

  // theta rotates the squeezed axis to theta/2 (checked at a dimension where
  // truncation no longer limits the variance).
  const double theta = 0.8;
  const CMat rho_rot = fock::squeezed_vacuum(64, r, theta);
  CHECK(fock::quadrature_variance(rho_rot, theta / 2.0) ==
        doctest::Approx(std::exp(-2.0 * r) / 4.0).epsilon(1e-5));
  CHECK(fock::quadrature_variance(rho_rot, theta / 2.0 + 0.1) >
        fock::quadrature_variance(rho_rot, theta / 2.0));
  CHECK(fock::quadrature_variance(rho_rot, theta / 2.0 - 0.1) >
        fock::quadrature_variance(rho_rot, theta / 2.0));
}

TEST_CASE("squeezed vacuum photon number at 1e-6 relative once truncation is comfortable") {
  const int dim = 64;
  const double r = 1.0;
  const CMat rho = fock::squeezed_vacuum(dim, r, 0.3);
  const double photons = (rho * fock::number(dim)).trace().real();
  CHECK(photons == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-6));
}

TEST_CASE("squeezed vacuum truncation guard") {
  CHECK_THROWS_AS(fock::squeezed_vacuum(12, 1.5, 0.0), TruncationError);
  try {
    fock::squeezed_vacuum(12, 1.5, 0.0);
  } catch (const TruncationError& e) {
    CHECK(e.population > fock::kTruncationTolerance);
  }
}

TEST_CASE("diagnostics: vacuum, maximally mixed, squeezed purity") {
  const auto d_vac = fock::diagnostics(fock::vacuum(8));
  CHECK(d_vac.trace_deviation == doctest::Approx(0.0));
  CHECK(d_vac.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d_vac.purity == doctest::Approx(1.0));

  const CMat mixed = CMat::Identity(4, 4) / 4.0;
  CHECK(fock::diagnostics(mixed).purity == doctest::Approx(0.25));

  const CMat sq = fock::squeezed_vacuum(40, 1.0, 0.0);
  const auto d_sq = fock::diagnostics(sq);
  CHECK(d_sq.purity == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d_sq.hermiticity_deviation < 1e-12);
}

TEST_CASE("diagnostics never mutates its input") {
  const CMat rho = fock::squeezed_vacuum(24, 0.5, 0.2);
  const CMat copy = rho;
  (void)fock::diagnostics(rho);
  CHECK((rho - copy).cwiseAbs().maxCoeff() == 0.0);
}
