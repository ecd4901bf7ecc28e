#pragma once

// Truncated Fock-space primitives for one or two bosonic modes.
//
// Two-mode operators are Kronecker products with mode a in the leftmost
// slot, so the basis state |n_a, n_b> lives at index n_a * (n_max_b + 1) + n_b.

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace squeezeamp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncatedMode {
 public:
  explicit TruncatedMode(int n_max);

  int n_max() const { return n_max_; }
  int dim() const { return n_max_ + 1; }

  bool operator==(const TruncatedMode&) const = default;

 private:
  int n_max_;
};

class Layout {
 public:
  static Layout single(TruncatedMode mode);
  static Layout two_mode(TruncatedMode a, TruncatedMode b);
  static Layout two_mode(int n_max) { return two_mode(TruncatedMode(n_max), TruncatedMode(n_max)); }

  bool is_two_mode() const { return two_mode_; }
  TruncatedMode mode_a() const { return a_; }
  // Throws for single-mode layouts.
  TruncatedMode mode_b() const;
  int dim() const { return two_mode_ ? a_.dim() * b_.dim() : a_.dim(); }
  Eigen::Index index(int n_a, int n_b) const;

  bool operator==(const Layout&) const = default;
  std::string describe() const;

 private:
  Layout(TruncatedMode a, TruncatedMode b, bool two_mode) : a_(a), b_(b), two_mode_(two_mode) {}

  TruncatedMode a_;
  TruncatedMode b_;
  bool two_mode_;
};

/// A dense complex operator on a truncated one- or two-mode Fock space.
///
/// Values are immutable: arithmetic returns new operators.
class TruncatedOperator {
 public:
  TruncatedOperator(Layout layout, Matrix entries);

  static TruncatedOperator identity(Layout layout);
  static TruncatedOperator zero(Layout layout);

  const Layout& layout() const { return layout_; }
  const Matrix& matrix() const { return entries_; }
  int dim() const { return layout_.dim(); }
  cplx operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  TruncatedOperator adjoint() const;
  SparseMatrix sparse(double drop_below = 0.0) const;

  bool is_hermitian(double tol = 1e-12) const;
  bool is_unitary(double tol = 1e-12) const;
  // Throw if the claimed property fails in max-norm.
  const TruncatedOperator& assert_hermitian(double tol = 1e-12) const;
  const TruncatedOperator& assert_unitary(double tol = 1e-12) const;

  friend TruncatedOperator operator+(const TruncatedOperator& x, const TruncatedOperator& y);
  friend TruncatedOperator operator-(const TruncatedOperator& x, const TruncatedOperator& y);
  friend TruncatedOperator operator*(const TruncatedOperator& x, const TruncatedOperator& y);
  friend TruncatedOperator operator*(cplx s, const TruncatedOperator& x);
  friend TruncatedOperator operator*(const TruncatedOperator& x, cplx s) { return s * x; }

 private:
  Layout layout_;
  Matrix entries_;
};

TruncatedOperator commutator(const TruncatedOperator& x, const TruncatedOperator& y);
double max_norm(const Matrix& m);

/// Pure state vector or density matrix on a truncated layout.
class QuantumState {
 public:
  enum class Kind { pure, mixed };

  // Both factories check the cheap invariants (normalization, trace,
  // Hermiticity) to 1e-10; positivity is checked on demand.
  static QuantumState pure(Layout layout, Vector amplitudes);
  static QuantumState mixed(Layout layout, Matrix rho);
  static QuantumState mixed(const QuantumState& pure_state);

  Kind kind() const { return std::holds_alternative<Vector>(data_) ? Kind::pure : Kind::mixed; }
  bool is_pure() const { return kind() == Kind::pure; }
  const Layout& layout() const { return layout_; }
  const Vector& vector() const;
  const Matrix& density() const;
  // Density matrix for either kind (outer product for pure states).
  Matrix to_density() const;

  double min_eigenvalue() const;
  bool is_positive(double tol = 1e-10) const { return min_eigenvalue() >= -tol; }
  double trace() const;

 private:
  QuantumState(Layout layout, std::variant<Vector, Matrix> data) : layout_(layout), data_(std::move(data)) {}

  Layout layout_;
  std::variant<Vector, Matrix> data_;
};

TruncatedOperator annihilator(TruncatedMode mode);
TruncatedOperator creator(TruncatedMode mode);
TruncatedOperator number_operator(TruncatedMode mode);
TruncatedOperator tensor(const TruncatedOperator& on_a, const TruncatedOperator& on_b);

// Two-mode ladder operators a = a (x) I, b = I (x) a.
TruncatedOperator mode_a_annihilator(const Layout& layout);
TruncatedOperator mode_b_annihilator(const Layout& layout);

/// S(r, theta) = exp[(r/2)(a^2 e^{-i theta} - a^dag^2 e^{i theta})], exponentiated
/// in the truncated space, hence exactly unitary there.
TruncatedOperator squeeze_unitary(TruncatedMode mode, double r, double theta);
TruncatedOperator squeeze_pair(const Layout& layout, double r, double theta_a, double theta_b);

/// Compression of the exact displacement operator D(alpha) onto the truncated
/// space. Matrix elements are exact (normal-ordered form), so the result is
/// not unitary once |alpha| is comparable to sqrt(n_max).
TruncatedOperator displacement_operator(TruncatedMode mode, cplx alpha);

QuantumState fock_state(const Layout& layout, int n_a, int n_b = 0);
QuantumState make_bell_phi(const Layout& layout);
QuantumState make_bell_psi(const Layout& layout);
QuantumState make_plus_state(TruncatedMode mode);
QuantumState make_plus_plus(const Layout& layout);

/// |<target|psi>|^2, or <target|rho|target> when the achieved state is mixed.
double fidelity(const QuantumState& target, const QuantumState& achieved);
double trace_distance(const QuantumState& x, const QuantumState& y);

/// Population in the top two Fock levels of either mode.
double truncation_leakage(const QuantumState& state);

QuantumState apply(const TruncatedOperator& op, const QuantumState& state);
QuantumState conjugate(const TruncatedOperator& op, const QuantumState& state);
cplx expectation(const TruncatedOperator& op, const QuantumState& state);

}  // namespace squeezeamp
