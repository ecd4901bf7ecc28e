#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "squeezeamp/interactions.hpp"
#include "squeezeamp/matrix_exp.hpp"

using namespace squeezeamp;
using testutil::max_abs;

TEST_SUITE("matrix_exp") {

TEST_CASE("exp of zero and diagonal matrices") {
  CHECK(max_abs(matrix_exp(Matrix::Zero(5, 5)) - Matrix::Identity(5, 5)) < 1e-15);
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = cplx(-2.0, 0.5);
  d(2, 2) = cplx(0.0, 7.0);
  const Matrix e = matrix_exp(d);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-13 * std::abs(std::exp(d(i, i))) + 1e-15);
}

TEST_CASE("exp(A) exp(-A) is the identity") {
  std::mt19937_64 rng(11);
  for (double scale : {0.01, 0.3, 1.0, 3.0, 10.0}) {
    Matrix a = testutil::random_matrix(8, rng);
    a *= scale / one_norm(a);
    const Matrix p = matrix_exp(a) * matrix_exp(-a);
    CHECK(max_abs(p - Matrix::Identity(8, 8)) < 1e-10);
  }
}

TEST_CASE("agrees with an independent Taylor oracle") {
  std::mt19937_64 rng(12);
  for (double scale : {0.1, 1.0, 5.0}) {
    Matrix a = testutil::random_matrix(6, rng);
    a *= scale / one_norm(a);
    const Matrix x = matrix_exp(a);
    const Matrix y = testutil::taylor_expm(a);
    CHECK(max_abs(x - y) < 1e-12 * std::max(1.0, max_abs(y)));
  }
}

TEST_CASE("unitary evolution of a Hermitian generator") {
  std::mt19937_64 rng(13);
  const Layout lay = Layout::two_mode(2);
  const TruncatedOperator h(lay, testutil::random_hermitian(lay.dim(), rng));
  const TruncatedOperator u = unitary_evolution(h, 0.8);
  CHECK(u.is_unitary(1e-12));

  // Beamsplitter on n_max = 1 as a Rabi rotation in the single-excitation sector.
  const Layout q = Layout::two_mode(1);
  const double g = 1.3;
  const double t = 0.4;
  const Matrix m = unitary_evolution(h_beamsplitter(g, q), t).matrix();
  CHECK(std::abs(m(q.index(0, 1), q.index(0, 1)) - std::cos(g * t)) < 1e-14);
  CHECK(std::abs(m(q.index(1, 0), q.index(0, 1)) - cplx(0.0, -std::sin(g * t))) < 1e-14);
  CHECK(std::abs(m(q.index(0, 0), q.index(0, 0)) - 1.0) < 1e-14);
}

TEST_CASE("exp_action matches the dense exponential") {
  std::mt19937_64 rng(14);
  const Matrix a = testutil::random_matrix(10, rng, 0.7);
  const Matrix x = testutil::random_matrix(10, rng).leftCols(3);
  const LinearAction act = [&](const Matrix& v) { return Matrix(a * v); };
  const Matrix y = exp_action(act, one_norm(a), x);
  CHECK(max_abs(y - matrix_exp(a) * x) < 1e-11 * max_abs(y));
}

TEST_CASE("one norm") {
  Matrix a(2, 2);
  a << cplx(1.0), cplx(0.0, -3.0), cplx(-2.0), cplx(4.0);
  CHECK(one_norm(a) == doctest::Approx(7.0));
  CHECK(one_norm(SparseMatrix(a.sparseView())) == doctest::Approx(7.0));
}

}  // TEST_SUITE
