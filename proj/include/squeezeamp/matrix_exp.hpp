#pragma once

#include <functional>

#include "squeezeamp/fock.hpp"

namespace squeezeamp {

/// exp(A) by scaling and squaring around a degree-13 Pade approximant,
/// with the scaling exponent chosen from the 1-norm of A.
Matrix matrix_exp(const Matrix& a);
TruncatedOperator matrix_exp(const TruncatedOperator& a);

/// exp(-i H t) for Hermitian H.
TruncatedOperator unitary_evolution(const TruncatedOperator& hamiltonian, double t);

double one_norm(const Matrix& a);
double one_norm(const SparseMatrix& a);

/// Action of a matrix exponential on a vector or matrix, exp(A) x, with A
/// given only through its action. `norm_bound` must bound the induced
/// 1-norm of A; it sets the number of Taylor substeps.
using LinearAction = std::function<Matrix(const Matrix&)>;
Matrix exp_action(const LinearAction& a, double norm_bound, const Matrix& x, double tol = 1e-15);

}  // namespace squeezeamp
