#pragma once

#include <cmath>
#include <random>

#include "squeezeamp/fock.hpp"

namespace testutil {

using namespace squeezeamp;

inline Matrix random_matrix(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = cplx(d(rng), d(rng));
  }
  return m;
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
  const Matrix m = random_matrix(n, rng, scale);
  return 0.5 * (m + m.adjoint());
}

inline QuantumState random_density(const Layout& layout, std::mt19937_64& rng) {
  const Matrix g = random_matrix(layout.dim(), rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::mixed(layout, rho);
}

// Plain Taylor series with scaling and squaring; no Pade, no balancing.
inline Matrix taylor_expm(const Matrix& a) {
  double norm = 0.0;
  for (int j = 0; j < a.cols(); ++j) norm = std::max(norm, a.col(j).cwiseAbs().sum());
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.25) ++s;
  const Matrix x = a / std::ldexp(1.0, s);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = (term * x / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = (sum * sum).eval();
  return sum;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testutil
