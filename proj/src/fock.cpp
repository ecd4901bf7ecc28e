#include "squeezeamp/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "squeezeamp/matrix_exp.hpp"

namespace squeezeamp {

namespace {

constexpr double kStateTol = 1e-10;

cplx ipow(cplx base, int exponent) {
  cplx out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

void require_same_layout(const Layout& x, const Layout& y, const char* what) {
  if (!(x == y)) {
    throw Error(std::string(what) + ": layout mismatch (" + x.describe() + " vs " + y.describe() + ")");
  }
}

}  // namespace

TruncatedMode::TruncatedMode(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw Error("TruncatedMode: n_max must be >= 1, got " + std::to_string(n_max));
}

Layout Layout::single(TruncatedMode mode) { return Layout(mode, mode, false); }

Layout Layout::two_mode(TruncatedMode a, TruncatedMode b) { return Layout(a, b, true); }

TruncatedMode Layout::mode_b() const {
  if (!two_mode_) throw Error("Layout::mode_b on a single-mode layout");
  return b_;
}

Eigen::Index Layout::index(int n_a, int n_b) const {
  if (n_a < 0 || n_a > a_.n_max()) throw Error("Layout::index: n_a out of range");
  if (!two_mode_) {
    if (n_b != 0) throw Error("Layout::index: single-mode layout has no mode b");
    return n_a;
  }
  if (n_b < 0 || n_b > b_.n_max()) throw Error("Layout::index: n_b out of range");
  return static_cast<Eigen::Index>(n_a) * b_.dim() + n_b;
}

std::string Layout::describe() const {
  std::ostringstream out;
  if (two_mode_) {
    out << "two-mode(" << a_.n_max() << "," << b_.n_max() << ")";
  } else {
    out << "single(" << a_.n_max() << ")";
  }
  return out.str();
}

// --- TruncatedOperator ------------------------------------------------------

TruncatedOperator::TruncatedOperator(Layout layout, Matrix entries)
    : layout_(layout), entries_(std::move(entries)) {
  if (entries_.rows() != layout_.dim() || entries_.cols() != layout_.dim()) {
    throw Error("TruncatedOperator: matrix is " + std::to_string(entries_.rows()) + "x" +
                std::to_string(entries_.cols()) + " but layout " + layout_.describe() + " needs dim " +
                std::to_string(layout_.dim()));
  }
}

TruncatedOperator TruncatedOperator::identity(Layout layout) {
  return TruncatedOperator(layout, Matrix::Identity(layout.dim(), layout.dim()));
}

TruncatedOperator TruncatedOperator::zero(Layout layout) {
  return TruncatedOperator(layout, Matrix::Zero(layout.dim(), layout.dim()));
}

TruncatedOperator TruncatedOperator::adjoint() const { return TruncatedOperator(layout_, entries_.adjoint()); }

SparseMatrix TruncatedOperator::sparse(double drop_below) const {
  SparseMatrix out = entries_.sparseView(1.0, drop_below);
  out.makeCompressed();
  return out;
}

double max_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool TruncatedOperator::is_hermitian(double tol) const {
  return max_norm(entries_ - entries_.adjoint()) < tol;
}

bool TruncatedOperator::is_unitary(double tol) const {
  return max_norm(entries_.adjoint() * entries_ - Matrix::Identity(dim(), dim())) < tol;
}

const TruncatedOperator& TruncatedOperator::assert_hermitian(double tol) const {
  if (!is_hermitian(tol)) throw Error("operator is not Hermitian to tolerance");
  return *this;
}

const TruncatedOperator& TruncatedOperator::assert_unitary(double tol) const {
  if (!is_unitary(tol)) throw Error("operator is not unitary to tolerance");
  return *this;
}

TruncatedOperator operator+(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same_layout(x.layout_, y.layout_, "operator+");
  return TruncatedOperator(x.layout_, x.entries_ + y.entries_);
}

TruncatedOperator operator-(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same_layout(x.layout_, y.layout_, "operator-");
  return TruncatedOperator(x.layout_, x.entries_ - y.entries_);
}

TruncatedOperator operator*(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same_layout(x.layout_, y.layout_, "operator*");
  return TruncatedOperator(x.layout_, x.entries_ * y.entries_);
}

TruncatedOperator operator*(cplx s, const TruncatedOperator& x) {
  return TruncatedOperator(x.layout_, s * x.entries_);
}

TruncatedOperator commutator(const TruncatedOperator& x, const TruncatedOperator& y) { return x * y - y * x; }

// --- QuantumState -------------------------------------------------------------

QuantumState QuantumState::pure(Layout layout, Vector amplitudes) {
  if (amplitudes.size() != layout.dim()) throw Error("QuantumState::pure: vector size does not match layout");
  if (std::abs(amplitudes.norm() - 1.0) > kStateTol) {
    throw Error("QuantumState::pure: state is not normalized (norm " + std::to_string(amplitudes.norm()) + ")");
  }
  return QuantumState(layout, std::move(amplitudes));
}

QuantumState QuantumState::mixed(Layout layout, Matrix rho) {
  if (rho.rows() != layout.dim() || rho.cols() != layout.dim()) {
    throw Error("QuantumState::mixed: matrix size does not match layout");
  }
  if (max_norm(rho - rho.adjoint()) > kStateTol) throw Error("QuantumState::mixed: density matrix not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > kStateTol) {
    throw Error("QuantumState::mixed: trace is " + std::to_string(rho.trace().real()) + ", expected 1");
  }
  return QuantumState(layout, std::move(rho));
}

QuantumState QuantumState::mixed(const QuantumState& pure_state) {
  return QuantumState(pure_state.layout_, pure_state.to_density());
}

const Vector& QuantumState::vector() const {
  if (!is_pure()) throw Error("QuantumState::vector on a mixed state");
  return std::get<Vector>(data_);
}

const Matrix& QuantumState::density() const {
  if (is_pure()) throw Error("QuantumState::density on a pure state; use to_density()");
  return std::get<Matrix>(data_);
}

Matrix QuantumState::to_density() const {
  if (is_pure()) {
    const Vector& v = std::get<Vector>(data_);
    return v * v.adjoint();
  }
  return std::get<Matrix>(data_);
}

double QuantumState::min_eigenvalue() const {
  if (is_pure()) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(density(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double QuantumState::trace() const {
  return is_pure() ? vector().squaredNorm() : density().trace().real();
}

// --- Operators ----------------------------------------------------------------

TruncatedOperator annihilator(TruncatedMode mode) {
  Matrix a = Matrix::Zero(mode.dim(), mode.dim());
  for (int n = 1; n <= mode.n_max(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return TruncatedOperator(Layout::single(mode), std::move(a));
}

TruncatedOperator creator(TruncatedMode mode) { return annihilator(mode).adjoint(); }

TruncatedOperator number_operator(TruncatedMode mode) {
  Matrix n = Matrix::Zero(mode.dim(), mode.dim());
  for (int k = 0; k <= mode.n_max(); ++k) n(k, k) = static_cast<double>(k);
  return TruncatedOperator(Layout::single(mode), std::move(n));
}

TruncatedOperator tensor(const TruncatedOperator& on_a, const TruncatedOperator& on_b) {
  if (on_a.layout().is_two_mode() || on_b.layout().is_two_mode()) {
    throw Error("tensor: both factors must be single-mode operators");
  }
  Matrix k = Eigen::kroneckerProduct(on_a.matrix(), on_b.matrix()).eval();
  return TruncatedOperator(Layout::two_mode(on_a.layout().mode_a(), on_b.layout().mode_a()), std::move(k));
}

TruncatedOperator mode_a_annihilator(const Layout& layout) {
  return tensor(annihilator(layout.mode_a()), TruncatedOperator::identity(Layout::single(layout.mode_b())));
}

TruncatedOperator mode_b_annihilator(const Layout& layout) {
  return tensor(TruncatedOperator::identity(Layout::single(layout.mode_a())), annihilator(layout.mode_b()));
}

TruncatedOperator squeeze_unitary(TruncatedMode mode, double r, double theta) {
  if (!std::isfinite(r) || !std::isfinite(theta)) throw Error("squeeze_unitary: non-finite parameters");
  const Matrix a = annihilator(mode).matrix();
  const Matrix a2 = a * a;
  const Matrix generator = (0.5 * r) * (a2 * std::exp(-kI * theta) - a2.adjoint() * std::exp(kI * theta));
  return TruncatedOperator(Layout::single(mode), matrix_exp(generator));
}

TruncatedOperator squeeze_pair(const Layout& layout, double r, double theta_a, double theta_b) {
  return tensor(squeeze_unitary(layout.mode_a(), r, theta_a), squeeze_unitary(layout.mode_b(), r, theta_b));
}

TruncatedOperator displacement_operator(TruncatedMode mode, cplx alpha) {
  // D(alpha) = e^{-|alpha|^2/2} e^{alpha a^dag} e^{-alpha* a}. Both exponentials are
  // nilpotent polynomials whose truncated matrix elements are exact, and the
  // intermediate sum only runs over levels below min(m, n).
  const int d = mode.dim();
  Matrix raise = Matrix::Zero(d, d);  // <m| e^{alpha a^dag} |k>
  Matrix lower = Matrix::Zero(d, d);  // <k| e^{-alpha* a} |n>
  std::vector<double> log_fact(d + 1, 0.0);
  for (int k = 1; k <= d; ++k) log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));
  for (int m = 0; m < d; ++m) {
    for (int k = 0; k <= m; ++k) {
      const int j = m - k;
      // alpha^j / j! * sqrt(m!/k!)
      const double mag = std::exp(0.5 * (log_fact[m] - log_fact[k]) - log_fact[j]);
      raise(m, k) = mag * ipow(alpha, j);
      lower(k, m) = mag * ipow(-std::conj(alpha), j);
    }
  }
  Matrix out = std::exp(-0.5 * std::norm(alpha)) * (raise * lower);
  return TruncatedOperator(Layout::single(mode), std::move(out));
}

// --- States -------------------------------------------------------------------

QuantumState fock_state(const Layout& layout, int n_a, int n_b) {
  Vector v = Vector::Zero(layout.dim());
  v(layout.index(n_a, n_b)) = 1.0;
  return QuantumState::pure(layout, std::move(v));
}

QuantumState make_bell_phi(const Layout& layout) {
  if (!layout.is_two_mode()) throw Error("make_bell_phi: needs a two-mode layout");
  // (|01> - i|10>)/sqrt2: the state exp(-i g (a b^dag + a^dag b) pi/(4g)) |01>.
  const double h = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(layout.dim());
  v(layout.index(0, 1)) = h;
  v(layout.index(1, 0)) = -kI * h;
  return QuantumState::pure(layout, std::move(v));
}

QuantumState make_bell_psi(const Layout& layout) {
  if (!layout.is_two_mode()) throw Error("make_bell_psi: needs a two-mode layout");
  // (|0 +> + |1 ->)/sqrt2 = (|00> + |01> + |10> - |11>)/2
  Vector v = Vector::Zero(layout.dim());
  v(layout.index(0, 0)) = 0.5;
  v(layout.index(0, 1)) = 0.5;
  v(layout.index(1, 0)) = 0.5;
  v(layout.index(1, 1)) = -0.5;
  return QuantumState::pure(layout, std::move(v));
}

QuantumState make_plus_state(TruncatedMode mode) {
  const double h = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(mode.dim());
  v(0) = h;
  v(1) = h;
  return QuantumState::pure(Layout::single(mode), std::move(v));
}

QuantumState make_plus_plus(const Layout& layout) {
  if (!layout.is_two_mode()) throw Error("make_plus_plus: needs a two-mode layout");
  Vector v = Vector::Zero(layout.dim());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) v(layout.index(i, j)) = 0.5;
  }
  return QuantumState::pure(layout, std::move(v));
}

double fidelity(const QuantumState& target, const QuantumState& achieved) {
  require_same_layout(target.layout(), achieved.layout(), "fidelity");
  if (!target.is_pure()) throw Error("fidelity: target must be a pure state");
  const Vector& t = target.vector();
  double f = 0.0;
  if (achieved.is_pure()) {
    f = std::norm(t.dot(achieved.vector()));
  } else {
    f = t.dot(achieved.density() * t).real();
  }
  return std::clamp(f, 0.0, 1.0);
}

double trace_distance(const QuantumState& x, const QuantumState& y) {
  require_same_layout(x.layout(), y.layout(), "trace_distance");
  const Matrix diff = x.to_density() - y.to_density();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double truncation_leakage(const QuantumState& state) {
  const Layout& layout = state.layout();
  const int na = layout.mode_a().n_max();
  const int nb = layout.is_two_mode() ? layout.mode_b().n_max() : 0;
  auto population = [&](Eigen::Index i) {
    return state.is_pure() ? std::norm(state.vector()(i)) : state.density()(i, i).real();
  };
  double leak = 0.0;
  for (int i = 0; i <= na; ++i) {
    for (int j = 0; j <= nb; ++j) {
      const bool top_a = i >= na - 1;
      const bool top_b = layout.is_two_mode() && j >= nb - 1;
      if (top_a || top_b) leak += population(layout.index(i, j));
    }
  }
  return leak;
}

QuantumState apply(const TruncatedOperator& op, const QuantumState& state) {
  require_same_layout(op.layout(), state.layout(), "apply");
  if (!state.is_pure()) throw Error("apply: use conjugate() for density matrices");
  return QuantumState::pure(state.layout(), op.matrix() * state.vector());
}

QuantumState conjugate(const TruncatedOperator& op, const QuantumState& state) {
  require_same_layout(op.layout(), state.layout(), "conjugate");
  if (state.is_pure()) return QuantumState::pure(state.layout(), op.matrix() * state.vector());
  return QuantumState::mixed(state.layout(), op.matrix() * state.density() * op.matrix().adjoint());
}

cplx expectation(const TruncatedOperator& op, const QuantumState& state) {
  require_same_layout(op.layout(), state.layout(), "expectation");
  if (state.is_pure()) return state.vector().dot(op.matrix() * state.vector());
  return (op.matrix() * state.density()).trace();
}

}  // namespace squeezeamp
