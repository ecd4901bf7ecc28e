#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "squeezeamp/protocols.hpp"

namespace squeezeamp {

namespace {

constexpr int kMinHeadroom = 60;

// <m|S(r)|n> falls off like tanh(r)^{|m-n|/2}; keep the working truncation
// wide enough that the discarded tail is below ~1e-14.
int working_headroom(double r_peak) {
  if (r_peak <= 0.0) return kMinHeadroom;
  const double need = 2.0 * std::log(1e-14) / std::log(std::tanh(r_peak));
  return std::max(kMinHeadroom, static_cast<int>(std::ceil(need)) + 10);
}

// exp(r G) for the unit squeeze generator G = (a^2 - a^dag^2)/2 in a working
// truncation, via one eigendecomposition of the Hermitian i G.
class SqueezeFamily {
 public:
  explicit SqueezeFamily(int n_work) {
    const Matrix a = annihilator(TruncatedMode(n_work)).matrix();
    const Matrix a2 = a * a;
    const Matrix hermitian = kI * 0.5 * (a2 - a2.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
    vectors_ = solver.eigenvectors();
    values_ = solver.eigenvalues();
  }

  // Leading `out_dim` columns of S = exp(r G) = V diag(e^{-i r mu}) V^dag.
  Matrix leading_columns(double r, Eigen::Index out_dim) const {
    const Eigen::VectorXcd phase = (values_.cast<cplx>() * cplx(0.0, -r)).array().exp();
    return vectors_ * (phase.asDiagonal() * vectors_.topRows(out_dim).adjoint());
  }

 private:
  Matrix vectors_;
  Eigen::VectorXd values_;
};

std::vector<double> simpson_weights(int intervals, double h) {
  std::vector<double> w(intervals + 1, 0.0);
  for (int i = 0; i <= intervals; ++i) {
    const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] = c * h / 3.0;
  }
  return w;
}

}  // namespace

TruncatedOperator magnus_average_numeric(const ContinuousDriveSpec& drive, const CouplingSpec& coupling,
                                         int quadrature_points, const Layout& layout) {
  if (quadrature_points < 64) throw Error("magnus_average_numeric: needs at least 64 quadrature points");
  if (!layout.is_two_mode()) throw Error("magnus_average_numeric: needs a two-mode layout");

  const int da = layout.mode_a().dim();
  const int db = layout.mode_b().dim();
  const int n_work = std::max(layout.mode_a().n_max(), layout.mode_b().n_max()) + working_headroom(0.5 * std::abs(drive.k));
  const SqueezeFamily family(n_work);
  const SparseMatrix a = annihilator(TruncatedMode(n_work)).matrix().sparseView();
  const SparseMatrix n = SparseMatrix(a.adjoint()) * a;

  const bool bs = coupling.kind == CouplingKind::beamsplitter;
  const double tc = drive.period;
  const double window = bs ? tc : 2.0 * tc;
  const int intervals = quadrature_points + (quadrature_points % 2);
  const double h = window / intervals;
  const auto weights = simpson_weights(intervals, h);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  Matrix acc = Matrix::Zero(layout.dim(), layout.dim());
  for (int i = 0; i <= intervals; ++i) {
    const double t = i * h;
    // U_c = exp(F (a^2 - a^dag^2)) = exp(2F G)
    if (bs) {
      const double f = 0.25 * drive.k * std::sin(kTwoPi * t / tc);
      const Matrix cols = family.leading_columns(2.0 * f, std::max(da, db));
      const Matrix a_full = cols.adjoint() * (a * cols);
      const Matrix ad_full = a_full.adjoint();
      const Matrix a_a = a_full.topLeftCorner(da, da);
      const Matrix ad_a = ad_full.topLeftCorner(da, da);
      const Matrix a_b = a_full.topLeftCorner(db, db);
      const Matrix ad_b = ad_full.topLeftCorner(db, db);
      acc += weights[i] * (Eigen::kroneckerProduct(a_a, ad_b).eval() + Eigen::kroneckerProduct(ad_a, a_b).eval());
    } else {
      const double fa = 0.25 * drive.k * std::sin(std::numbers::pi * t / tc);
      const double fb = 0.25 * drive.k * std::sin(kTwoPi * t / tc);
      const Matrix cols_a = family.leading_columns(2.0 * fa, da);
      const Matrix cols_b = family.leading_columns(2.0 * fb, db);
      const Matrix n_a = cols_a.adjoint() * (n * cols_a);
      const Matrix n_b = cols_b.adjoint() * (n * cols_b);
      acc += weights[i] * Eigen::kroneckerProduct(n_a, n_b).eval();
    }
  }
  acc *= coupling.strength / window;
  return TruncatedOperator(layout, std::move(acc));
}

}  // namespace squeezeamp
