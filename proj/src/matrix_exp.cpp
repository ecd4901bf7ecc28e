#include "squeezeamp/matrix_exp.hpp"

#include <cmath>

#include <Eigen/LU>

namespace squeezeamp {

namespace {

// Pade(13,13) numerator coefficients and the 1-norm threshold below which
// the approximant meets double precision without scaling (Higham 2005).
constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

double one_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

double one_norm(const SparseMatrix& a) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

Matrix matrix_exp(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error("matrix_exp: matrix must be square");
  if (!a.allFinite()) throw Error("matrix_exp: non-finite entries");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);

  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = scaled * scaled;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const double* b = kPade13;

  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Matrix u = scaled * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

TruncatedOperator matrix_exp(const TruncatedOperator& a) {
  return TruncatedOperator(a.layout(), matrix_exp(a.matrix()));
}

TruncatedOperator unitary_evolution(const TruncatedOperator& hamiltonian, double t) {
  return matrix_exp(cplx(0.0, -t) * hamiltonian);
}

Matrix exp_action(const LinearAction& a, double norm_bound, const Matrix& x, double tol) {
  if (norm_bound < 0.0 || !std::isfinite(norm_bound)) throw Error("exp_action: invalid norm bound");
  // Each substep applies a Taylor polynomial of A/s with ||A/s||_1 <= 4,
  // truncated once two consecutive terms fall below tol relative to x.
  constexpr double kStepNorm = 4.0;
  constexpr int kMaxTerms = 80;
  const int substeps = std::max(1, static_cast<int>(std::ceil(norm_bound / kStepNorm)));
  const double inv = 1.0 / substeps;

  Matrix y = x;
  for (int s = 0; s < substeps; ++s) {
    Matrix term = y;
    Matrix acc = y;
    const double scale = std::max(y.cwiseAbs().maxCoeff(), 1e-300);
    double previous = 1.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      term = a(term) * (inv / k);
      acc += term;
      const double size = term.cwiseAbs().maxCoeff() / scale;
      if (size <= tol && previous <= tol) break;
      previous = size;
      if (k == kMaxTerms) throw Error("exp_action: Taylor series failed to converge");
    }
    y = std::move(acc);
  }
  return y;
}

}  // namespace squeezeamp
