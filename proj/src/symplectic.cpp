#include "squeezeamp/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "squeezeamp/matrix_exp.hpp"

namespace squeezeamp {

namespace {

// Acts with the same 2x2 block on (q_a, p_b) and (q_b, p_a).
Vec4 apply_block(const Mat2& m, const Vec4& x) {
  Vec4 out;
  out.head<2>() = m * x.head<2>();
  out.tail<2>() = m * x.tail<2>();
  return out;
}

Mat2 rotation(double angle) {
  Mat2 m;
  m << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  return m;
}

Mat2 squaring_power(const Mat2& m, int n) {
  Mat2 result = Mat2::Identity();
  Mat2 base = m;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

// <m| D(alpha) |n> for m in {0, 1}.
void displacement_rows(cplx alpha, int dim, Eigen::RowVectorXcd& row0, Eigen::RowVectorXcd& row1) {
  const double x = std::norm(alpha);
  const double env = std::exp(-0.5 * x);
  const cplx mc = -std::conj(alpha);
  row0.resize(dim);
  row1.resize(dim);
  row0(0) = env;
  row1(0) = env * alpha;
  cplx lower = 1.0;  // (-alpha*)^{n-1} / sqrt((n-1)!)
  for (int n = 1; n < dim; ++n) {
    const double sq = std::sqrt(static_cast<double>(n));
    row1(n) = env * lower / sq * (n - x);
    lower *= mc / sq;
    row0(n) = env * lower;
  }
}

}  // namespace

Mat2 omega2() {
  Mat2 o;
  o << 0.0, 1.0, -1.0, 0.0;
  return o;
}

SymplecticBlock build_block(double g, double dt, double r) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("build_block: dt must be > 0");
  const double c = std::cos(g * dt);
  const double s = std::sin(g * dt);
  const double e2 = std::exp(2.0 * r);
  SymplecticBlock blk;
  blk.a << c, s / e2, -e2 * s, c;
  blk.b << c, e2 * s, -s / e2, c;
  blk.m = blk.a * blk.b;
  blk.g = g;
  blk.dt = dt;
  blk.r = r;
  return blk;
}

double block_s_tilde(const SymplecticBlock& blk) { return std::sin(blk.g * blk.dt) * std::cosh(2.0 * blk.r); }

Mat2 block_power_reference(const SymplecticBlock& blk, int n) {
  if (n < 1) throw Error("block_power: N must be >= 1");
  Mat2 out = blk.m;
  for (int i = 1; i < n; ++i) out = blk.m * out;
  return out;
}

Mat2 block_power(const SymplecticBlock& blk, int n) {
  if (n < 1) throw Error("block_power: N must be >= 1");
  if (n == 1) return blk.m;
  // Eigenvalues 1 - 2 s~^2 +- 2 i s~ sqrt(1 - s~^2); complex sqrt covers s~ > 1.
  const double st = block_s_tilde(blk);
  const double tau = 0.5 * blk.m.trace();
  const cplx root = std::sqrt(cplx(tau * tau - 1.0, 0.0));
  const cplx l1 = tau + root;
  const cplx l2 = tau - root;
  if (std::abs(std::abs(st) - 1.0) < 1e-9 || std::abs(l1 - l2) < 1e-6) return squaring_power(blk.m, n);

  // Spectral projectors P_1 = (M - l2)/(l1 - l2), P_2 = (M - l1)/(l2 - l1) are
  // the right-left eigenvector products normalized so that v_l v_r = 1.
  const Eigen::Matrix2cd m = blk.m.cast<cplx>();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd p1 = (m - l2 * id) / (l1 - l2);
  const Eigen::Matrix2cd p2 = (m - l1 * id) / (l2 - l1);
  const Eigen::Matrix2cd mn = std::pow(l1, n) * p1 + std::pow(l2, n) * p2;
  return mn.real();
}

EffectiveQuadraticHamiltonian extract_effective_hamiltonian(const Mat2& mn, double t) {
  if (!(t > 0.0)) throw Error("extract_effective_hamiltonian: t must be > 0");
  const double det = mn.determinant();
  if (std::abs(det - 1.0) > 1e-8) throw Error("extract_effective_hamiltonian: det(M^N) must be 1");
  double tau = 0.5 * mn.trace();
  if (std::abs(tau) > 1.0 + 0.5e-9) {
    throw Error("extract_effective_hamiltonian: |tr M^N| > 2, no principal-branch logarithm (reduce dt)");
  }
  tau = std::clamp(tau, -1.0, 1.0);
  const double theta = std::acos(tau);
  if (std::abs(theta - std::numbers::pi) < 1e-9) {
    throw Error("extract_effective_hamiltonian: rotation angle reached pi, outside the principal branch");
  }
  const double factor = theta < 1e-8 ? 1.0 + theta * theta / 6.0 : theta / std::sin(theta);
  const Mat2 x = factor * (mn - tau * Mat2::Identity());
  // log M^N = Omega [[u, v], [v, u]] t = [[v, u], [-u, -v]] t
  return {0.5 * (x(0, 1) - x(1, 0)) / t, 0.5 * (x(0, 0) - x(1, 1)) / t};
}

cplx AccumulatedDisplacement::gamma() const { return cplx(d(0), d(3)) / std::sqrt(2.0); }
cplx AccumulatedDisplacement::nu() const { return cplx(d(2), d(1)) / std::sqrt(2.0); }

Vec4 displacement_drive(const DisplacementAmplitudes& amp) {
  const double k = std::sqrt(2.0);
  return Vec4(k * amp.alpha_a.real(), k * amp.alpha_b.imag(), k * amp.alpha_b.real(), k * amp.alpha_a.imag());
}

Mat2 segment_integral(double g, double dt) {
  if (g == 0.0) return dt * Mat2::Identity();
  // (g Omega)^{-1} = -Omega / g
  return (-omega2() / g) * (rotation(g * dt) - Mat2::Identity());
}

AccumulatedDisplacement accumulate_displacements(const SymplecticBlock& blk,
                                                 const std::vector<DisplacementAmplitudes>& amplitudes) {
  if (amplitudes.empty() || amplitudes.size() % 2 != 0) {
    throw Error("accumulate_displacements: expected 2N per-segment amplitudes, got " +
                std::to_string(amplitudes.size()));
  }
  const Mat2 s = segment_integral(blk.g, blk.dt);
  const Mat2 e_plus = Eigen::Vector2d(std::exp(blk.r), std::exp(-blk.r)).asDiagonal();
  const Mat2 e_minus = Eigen::Vector2d(std::exp(-blk.r), std::exp(blk.r)).asDiagonal();
  const Mat2 first = blk.a * e_plus * s;
  const Mat2 second = e_minus * s;
  Vec4 acc = Vec4::Zero();
  for (std::size_t j = 0; j < amplitudes.size(); j += 2) {
    const Vec4 step = apply_block(first, displacement_drive(amplitudes[j])) +
                      apply_block(second, displacement_drive(amplitudes[j + 1]));
    acc = apply_block(blk.m, acc) + step;
  }
  return {acc};
}

TruncatedOperator fock_realization(const EffectiveQuadraticHamiltonian& eff, const AccumulatedDisplacement& disp,
                                   double t, const Layout& layout) {
  if (!layout.is_two_mode()) throw Error("fock_realization: needs a two-mode layout");
  const TruncatedOperator a = mode_a_annihilator(layout);
  const TruncatedOperator b = mode_b_annihilator(layout);
  const TruncatedOperator ad = a.adjoint();
  const TruncatedOperator bd = b.adjoint();
  // q_a q_b + p_a p_b = a b^dag + a^dag b;  {q, p} = i (a^dag^2 - a^2)
  const TruncatedOperator h = cplx(eff.u) * (a * bd + ad * b) +
                              cplx(0.0, 0.5 * eff.v) * (ad * ad - a * a + bd * bd - b * b);
  const TruncatedOperator u = unitary_evolution(h, t);
  const TruncatedOperator d = tensor(displacement_operator(layout.mode_a(), disp.gamma()),
                                     displacement_operator(layout.mode_b(), disp.nu()));
  return d * u;
}

GaussianSequenceResult gaussian_bs_sequence(double g, double r, int trotter_steps, double total_time,
                                            const std::vector<DisplacementAmplitudes>& amplitudes) {
  if (trotter_steps < 1) throw Error("gaussian_bs_sequence: N must be >= 1");
  if (amplitudes.size() != 2u * static_cast<std::size_t>(trotter_steps)) {
    throw Error("gaussian_bs_sequence: expected one amplitude pair per free segment");
  }
  const double dt = total_time / (2.0 * trotter_steps);
  // Squeezing (pi,pi) before (0,0) makes the repetition map B A, which is the
  // A B form with r -> -r.
  const SymplecticBlock blk = build_block(g, dt, -r);
  GaussianSequenceResult res;
  res.mn = block_power(blk, trotter_steps);
  res.eff = extract_effective_hamiltonian(res.mn, total_time);
  res.disp = accumulate_displacements(blk, amplitudes);
  return res;
}

Vector gaussian_bs_noiseless_state(const EffectiveQuadraticHamiltonian& eff, double t, const Layout& layout) {
  const TruncatedOperator a = mode_a_annihilator(layout);
  const TruncatedOperator b = mode_b_annihilator(layout);
  const TruncatedOperator ad = a.adjoint();
  const TruncatedOperator bd = b.adjoint();
  const TruncatedOperator h = cplx(eff.u) * (a * bd + ad * b) +
                              cplx(0.0, 0.5 * eff.v) * (ad * ad - a * a + bd * bd - b * b);
  const SparseMatrix hs = h.sparse();
  const SparseMatrix gen = cplx(0.0, -t) * hs;
  const Vector start = fock_state(layout, 0, 1).vector();
  const Matrix out = exp_action([&](const Matrix& x) -> Matrix { return gen * x; }, one_norm(gen), start);
  return out.col(0);
}

double displaced_fidelity(const QuantumState& target, const Vector& psi, const AccumulatedDisplacement& disp) {
  const Layout& layout = target.layout();
  if (!target.is_pure()) throw Error("displaced_fidelity: target must be pure");
  const int da = layout.mode_a().dim();
  const int db = layout.mode_b().dim();
  if (psi.size() != layout.dim()) throw Error("displaced_fidelity: state dimension mismatch");
  const Vector& tv = target.vector();
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < db; ++j) {
      if ((i > 1 || j > 1) && tv(layout.index(i, j)) != cplx(0.0)) {
        throw Error("displaced_fidelity: target must live on n <= 1 in each mode");
      }
    }
  }
  Eigen::RowVectorXcd a0, a1, b0, b1;
  displacement_rows(disp.gamma(), da, a0, a1);
  displacement_rows(disp.nu(), db, b0, b1);
  // psi as a da x db matrix, row index n_a.
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> pm(psi.data(), da, db);
  const Eigen::RowVectorXcd* ra[2] = {&a0, &a1};
  const Eigen::RowVectorXcd* rb[2] = {&b0, &b1};
  cplx overlap = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cplx coeff = std::conj(tv(layout.index(i, j)));
      if (coeff == cplx(0.0)) continue;
      // <i j| D_a (x) D_b |psi> = sum_kl <i|D_a|k> <j|D_b|l> psi_kl
      overlap += coeff * (*ra[i] * pm * rb[j]->transpose())(0, 0);
    }
  }
  return std::min(1.0, std::norm(overlap));
}

}  // namespace squeezeamp
