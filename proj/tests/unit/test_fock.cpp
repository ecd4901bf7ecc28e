#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "squeezeamp/fock.hpp"

using namespace squeezeamp;
using testutil::max_abs;

TEST_SUITE("fock") {

TEST_CASE("annihilator matrix elements") {
  const Matrix a1 = annihilator(TruncatedMode(1)).matrix();
  CHECK(a1(0, 1) == cplx(1.0));
  CHECK(a1(0, 0) == cplx(0.0));
  CHECK(a1(1, 0) == cplx(0.0));
  CHECK(a1(1, 1) == cplx(0.0));

  const Matrix a3 = annihilator(TruncatedMode(3)).matrix();
  CHECK(a3(2, 3).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      if (m != n - 1) CHECK(a3(m, n) == cplx(0.0));
    }
  }
  Vector vac = Vector::Zero(4);
  vac(0) = 1.0;
  CHECK((a3 * vac).norm() == 0.0);
  CHECK(max_abs(creator(TruncatedMode(3)).matrix() - a3.adjoint()) == 0.0);
}

TEST_CASE("truncated mode needs at least one excitation") {
  CHECK_THROWS_AS(TruncatedMode(0), Error);
  CHECK(TruncatedMode(4).dim() == 5);
}

TEST_CASE("commutator is the identity away from the top level") {
  const int n_max = 6;
  const Matrix a = annihilator(TruncatedMode(n_max)).matrix();
  const Matrix c = a * a.adjoint() - a.adjoint() * a;
  CHECK(max_abs(c.topLeftCorner(n_max, n_max) - Matrix::Identity(n_max, n_max)) < 1e-14);
  CHECK(c(n_max, n_max).real() == doctest::Approx(-n_max));
}

TEST_CASE("tensor products") {
  const TruncatedMode m(1);
  const TruncatedOperator id = TruncatedOperator::identity(Layout::single(m));
  const TruncatedOperator id4 = tensor(id, id);
  CHECK(id4.layout().is_two_mode());
  CHECK(max_abs(id4.matrix() - Matrix::Identity(4, 4)) == 0.0);

  const Layout lay = Layout::two_mode(3);
  const TruncatedOperator a_on_a = tensor(annihilator(TruncatedMode(3)), TruncatedOperator::identity(Layout::single(TruncatedMode(3))));
  const QuantumState s10 = fock_state(lay, 1, 0);
  const Vector out = a_on_a.matrix() * s10.vector();
  CHECK((out - fock_state(lay, 0, 0).vector()).norm() < 1e-15);

  const TruncatedOperator nn = tensor(number_operator(TruncatedMode(3)), number_operator(TruncatedMode(3)));
  const Vector v = nn.matrix() * fock_state(lay, 2, 3).vector();
  CHECK((v - 6.0 * fock_state(lay, 2, 3).vector()).norm() < 1e-14);

  CHECK_THROWS_AS(tensor(id4, id), Error);
  CHECK(lay.index(2, 3) == 2 * 4 + 3);
}

TEST_CASE("squeeze unitary") {
  const TruncatedMode m(20);
  const Matrix s0 = squeeze_unitary(m, 0.0, 0.0).matrix();
  CHECK(max_abs(s0 - Matrix::Identity(21, 21)) < 1e-15);

  const Matrix s = squeeze_unitary(m, 0.7, 0.0).matrix();
  const Matrix s_pi = squeeze_unitary(m, 0.7, M_PI).matrix();
  const Matrix s_neg = squeeze_unitary(m, -0.7, 0.0).matrix();
  CHECK(max_abs(s.adjoint() * s - Matrix::Identity(21, 21)) < 1e-10);
  CHECK(max_abs(s_pi - s.inverse()) < 1e-10);
  CHECK(max_abs(s_pi - s_neg) < 1e-10);

  // Squeezed vacuum overlap |<0|S|0>|^2 = 1/cosh r.
  const Matrix s5 = squeeze_unitary(m, 0.5, 0.0).matrix();
  CHECK(std::norm(s5(0, 0)) == doctest::Approx(1.0 / std::cosh(0.5)).epsilon(1e-4));
  CHECK(1.0 / std::cosh(0.5) == doctest::Approx(0.88681).epsilon(1e-5));
}

TEST_CASE("squeezing compresses q and stretches p on interior levels") {
  // q = (a + a^dag)/sqrt2, p = i(a^dag - a)/sqrt2; S_0^dag q S_0 = e^{-r} q, S_pi^dag q S_pi = e^{r} q.
  const int n_max = 80;
  const int interior = 6;
  const double r = 0.5;
  const TruncatedMode m(n_max);
  const Matrix a = annihilator(m).matrix();
  const Matrix q = (a + a.adjoint()) / std::sqrt(2.0);
  const Matrix p = kI * (a.adjoint() - a) / std::sqrt(2.0);
  for (double theta : {0.0, M_PI}) {
    const double sign = theta == 0.0 ? -1.0 : 1.0;
    const Matrix s = squeeze_unitary(m, r, theta).matrix();
    const Matrix qs = s.adjoint() * q * s;
    const Matrix ps = s.adjoint() * p * s;
    CHECK(max_abs((qs - std::exp(sign * r) * q).topLeftCorner(interior, interior)) < 1e-8);
    CHECK(max_abs((ps - std::exp(-sign * r) * p).topLeftCorner(interior, interior)) < 1e-8);
  }
}

TEST_CASE("Bell and product states") {
  const Layout lay = Layout::two_mode(2);
  const QuantumState phi = make_bell_phi(lay);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(phi.vector()(lay.index(0, 1)) - cplx(h)) < 1e-15);
  CHECK(std::abs(std::abs(phi.vector()(lay.index(1, 0))) - h) < 1e-15);
  CHECK(std::abs(phi.vector()(lay.index(1, 0)).real()) < 1e-15);

  const QuantumState psi = make_bell_psi(lay);
  CHECK(std::abs(psi.vector()(lay.index(0, 0)) - 0.5) < 1e-15);
  CHECK(std::abs(psi.vector()(lay.index(0, 1)) - 0.5) < 1e-15);
  CHECK(std::abs(psi.vector()(lay.index(1, 0)) - 0.5) < 1e-15);
  CHECK(std::abs(psi.vector()(lay.index(1, 1)) + 0.5) < 1e-15);

  for (const QuantumState& s : {phi, psi, make_plus_plus(lay), make_plus_state(TruncatedMode(3))}) {
    CHECK(std::abs(s.vector().norm() - 1.0) < 1e-12);
  }
  double outside = 0.0;
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j <= 2; ++j) {
      if (i > 1 || j > 1) outside += std::norm(psi.vector()(lay.index(i, j))) + std::norm(phi.vector()(lay.index(i, j)));
    }
  }
  CHECK(outside == 0.0);
}

TEST_CASE("fidelity") {
  const Layout lay = Layout::two_mode(1);
  const QuantumState phi = make_bell_phi(lay);
  CHECK(fidelity(phi, phi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(fock_state(lay, 0, 1), fock_state(lay, 1, 0)) == 0.0);

  Matrix rho = Matrix::Zero(4, 4);
  rho(lay.index(0, 1), lay.index(0, 1)) = 0.5;
  rho(lay.index(1, 0), lay.index(1, 0)) = 0.5;
  CHECK(fidelity(phi, QuantumState::mixed(lay, rho)) == doctest::Approx(0.5).epsilon(1e-14));

  std::mt19937_64 rng(7);
  Vector x = testutil::random_matrix(4, rng).col(0);
  x.normalize();
  Vector y = testutil::random_matrix(4, rng).col(1);
  y.normalize();
  const QuantumState sx = QuantumState::pure(lay, x);
  const QuantumState sy = QuantumState::pure(lay, y);
  CHECK(fidelity(sx, sy) == doctest::Approx(fidelity(sy, sx)).epsilon(1e-14));
  const QuantumState sy_phase = QuantumState::pure(lay, std::exp(kI * 1.234) * y);
  CHECK(fidelity(sx, sy_phase) == doctest::Approx(fidelity(sx, sy)).epsilon(1e-14));
  CHECK(fidelity(sx, QuantumState::mixed(sy)) == doctest::Approx(fidelity(sx, sy)).epsilon(1e-12));

  CHECK_THROWS_AS(fidelity(phi, fock_state(Layout::two_mode(2), 0, 1)), Error);
}

TEST_CASE("state invariants are enforced") {
  const Layout lay = Layout::two_mode(1);
  CHECK_THROWS_AS(QuantumState::pure(lay, Vector::Ones(4)), Error);
  Matrix rho = Matrix::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(QuantumState::mixed(lay, rho));
  rho(0, 1) = cplx(0.0, 0.1);
  CHECK_THROWS_AS(QuantumState::mixed(lay, rho), Error);
  CHECK_THROWS_AS(QuantumState::mixed(lay, 2.0 * Matrix::Identity(4, 4) / 4.0), Error);
  CHECK_THROWS_AS(QuantumState::pure(lay, Vector::Ones(9) / 3.0), Error);

  Matrix neg = Matrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_FALSE(QuantumState::mixed(lay, neg).is_positive());
}

TEST_CASE("leakage monitor") {
  const Layout lay = Layout::two_mode(4);
  CHECK(truncation_leakage(fock_state(lay, 0, 1)) == 0.0);
  CHECK(truncation_leakage(fock_state(lay, 3, 0)) == doctest::Approx(1.0));
  CHECK(truncation_leakage(fock_state(lay, 1, 4)) == doctest::Approx(1.0));
  CHECK(truncation_leakage(QuantumState::mixed(fock_state(lay, 2, 2))) == 0.0);
}

TEST_CASE("operator flags") {
  const Layout lay = Layout::single(TruncatedMode(3));
  const TruncatedOperator a = annihilator(TruncatedMode(3));
  CHECK_FALSE(a.is_hermitian());
  CHECK((a + a.adjoint()).is_hermitian());
  CHECK_THROWS_AS(a.assert_hermitian(), Error);
  CHECK(squeeze_unitary(TruncatedMode(3), 0.4, 0.0).is_unitary(1e-12));
  CHECK_THROWS_AS(TruncatedOperator(lay, Matrix::Identity(3, 3)), Error);
}

}  // TEST_SUITE
