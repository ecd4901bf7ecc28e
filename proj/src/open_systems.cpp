#include "squeezeamp/open_systems.hpp"

#include <algorithm>
#include <cmath>

#include "squeezeamp/matrix_exp.hpp"

namespace squeezeamp {

namespace {

void require_rate(double rate, const char* what) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw Error(std::string(what) + " must be finite and >= 0");
}

void require_same_layout(const Layout& x, const Layout& y, const char* where) {
  if (!(x == y)) throw Error(std::string(where) + ": layout mismatch (" + x.describe() + " vs " + y.describe() + ")");
}

}  // namespace

void validate(const NoiseSpec& noise) {
  std::visit(
      [](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RandomDisplacements>) {
          require_rate(n.sigma, "sigma");
        } else if constexpr (std::is_same_v<T, Loss>) {
          require_rate(n.eta_a, "eta_a");
          require_rate(n.eta_b, "eta_b");
        } else if constexpr (std::is_same_v<T, Thermal>) {
          require_rate(n.eta_c_a, "eta_c_a");
          require_rate(n.eta_c_b, "eta_c_b");
          require_rate(n.eta_h_a, "eta_h_a");
          require_rate(n.eta_h_b, "eta_h_b");
          const auto ordered = [](double c, double h) { return h < c || (h == 0.0 && c == 0.0); };
          if (!ordered(n.eta_c_a, n.eta_h_a) || !ordered(n.eta_c_b, n.eta_h_b)) {
            throw Error("thermal noise: heating rate must be below the loss rate on each mode");
          }
        } else {
          require_rate(n.gamma_a, "gamma_a");
          require_rate(n.gamma_b, "gamma_b");
        }
      },
      noise);
}

std::string_view noise_name(const NoiseSpec& noise) {
  static constexpr std::string_view names[] = {"displacement", "loss", "thermal", "dephasing"};
  return names[noise.index()];
}

bool is_lindblad(const NoiseSpec& noise) { return !std::holds_alternative<RandomDisplacements>(noise); }

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

DisplacementAmplitudes sample_displacements(double sigma, RngStream& rng) {
  require_rate(sigma, "sigma");
  const double re_a = rng.normal();
  const double im_a = rng.normal();
  const double re_b = rng.normal();
  const double im_b = rng.normal();
  if (sigma == 0.0) return {};
  return {cplx(sigma * re_a, sigma * im_a), cplx(sigma * re_b, sigma * im_b)};
}

LindbladGenerator::LindbladGenerator(TruncatedOperator hamiltonian, std::vector<JumpTerm> jumps,
                                     std::vector<DoubleCommutatorTerm> double_commutators)
    : hamiltonian_(std::move(hamiltonian)),
      jumps_(std::move(jumps)),
      double_commutators_(std::move(double_commutators)) {
  hamiltonian_.assert_hermitian(1e-10);
  const Layout& layout = hamiltonian_.layout();
  h_sparse_ = hamiltonian_.sparse();
  h_effective_ = h_sparse_;
  for (const JumpTerm& j : jumps_) {
    require_same_layout(j.op.layout(), layout, "LindbladGenerator");
    require_rate(j.rate, "jump rate");
    if (j.rate == 0.0) continue;
    SparseMatrix op = j.op.sparse();
    SparseMatrix op_adj = SparseMatrix(op.adjoint());
    h_effective_ += cplx(0.0, -0.5 * j.rate) * SparseMatrix(op_adj * op);
    sparse_jumps_.push_back({std::move(op), std::move(op_adj), j.rate});
  }
  for (const DoubleCommutatorTerm& d : double_commutators_) {
    require_same_layout(d.op.layout(), layout, "LindbladGenerator");
    require_rate(d.coefficient, "double-commutator coefficient");
    if (d.coefficient == 0.0) continue;
    sparse_commutators_.push_back({d.op.sparse(), d.coefficient});
  }
  h_effective_.makeCompressed();
}

Matrix LindbladGenerator::apply(const Matrix& rho) const {
  // -i (H_eff rho - rho H_eff^dag) + sum rate L rho L^dag
  Matrix out = cplx(0.0, -1.0) * (h_effective_ * rho);
  out += cplx(0.0, 1.0) * (rho * SparseMatrix(h_effective_.adjoint()));
  for (const SparseJump& j : sparse_jumps_) {
    const Matrix l_rho = j.op * rho;
    out += j.rate * (l_rho * j.op_adjoint);
  }
  for (const SparseCommutator& c : sparse_commutators_) {
    const Matrix x_rho = c.op * rho;
    const Matrix rho_x = rho * c.op;
    // [X,[X,rho]] = X^2 rho - 2 X rho X + rho X^2
    out -= c.coefficient * (c.op * x_rho - 2.0 * (x_rho * c.op) + rho_x * c.op);
  }
  return out;
}

Matrix LindbladGenerator::apply_hermitian(const Matrix& rho) const {
  const Matrix z = cplx(0.0, -1.0) * (h_effective_ * rho);
  Matrix out = z + z.adjoint();
  for (const SparseJump& j : sparse_jumps_) {
    const Matrix l_rho = j.op * rho;
    out += j.rate * (l_rho * j.op_adjoint);
  }
  for (const SparseCommutator& c : sparse_commutators_) {
    const Matrix x_rho = c.op * rho;
    const Matrix rho_x = rho * c.op;
    out -= c.coefficient * (c.op * x_rho - 2.0 * (x_rho * c.op) + rho_x * c.op);
  }
  return out;
}

double LindbladGenerator::max_rate() const {
  double m = 0.0;
  for (const JumpTerm& j : jumps_) m = std::max(m, j.rate);
  for (const DoubleCommutatorTerm& d : double_commutators_) m = std::max(m, d.coefficient);
  return m;
}

double LindbladGenerator::hamiltonian_norm() const { return one_norm(h_sparse_); }

double LindbladGenerator::generator_scale() const {
  double scale = one_norm(h_sparse_);
  for (const SparseJump& j : sparse_jumps_) {
    scale += j.rate * one_norm(SparseMatrix(j.op_adjoint * j.op));
  }
  for (const SparseCommutator& c : sparse_commutators_) {
    const double x = one_norm(c.op);
    scale += 2.0 * c.coefficient * x * x;
  }
  return scale;
}

double LindbladGenerator::superoperator_norm_bound() const {
  // ||rho -> A rho B||_1 = ||A||_1 ||B||_inf with ||B||_inf = ||B^dag||_1.
  auto inf_norm = [](const SparseMatrix& m) { return one_norm(SparseMatrix(m.adjoint())); };
  double bound = one_norm(h_effective_) + inf_norm(h_effective_);
  for (const SparseJump& j : sparse_jumps_) bound += j.rate * one_norm(j.op) * inf_norm(j.op);
  for (const SparseCommutator& c : sparse_commutators_) {
    const double x = one_norm(c.op) + inf_norm(c.op);
    bound += c.coefficient * x * x;
  }
  return bound;
}

Matrix dissipator(const TruncatedOperator& jump, const QuantumState& rho) {
  require_same_layout(jump.layout(), rho.layout(), "dissipator");
  if (rho.is_pure()) throw Error("dissipator: expects a mixed-kind state");
  const Matrix& r = rho.density();
  const Matrix& l = jump.matrix();
  const Matrix ldl = l.adjoint() * l;
  return l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl);
}

Matrix lindblad_rhs(const TruncatedOperator& hamiltonian, const std::vector<JumpTerm>& jumps,
                    const QuantumState& rho) {
  require_same_layout(hamiltonian.layout(), rho.layout(), "lindblad_rhs");
  const QuantumState mixed = rho.is_pure() ? QuantumState::mixed(rho) : rho;
  const Matrix& r = mixed.density();
  const Matrix& h = hamiltonian.matrix();
  Matrix out = cplx(0.0, -1.0) * (h * r - r * h);
  for (const JumpTerm& j : jumps) out += j.rate * dissipator(j.op, mixed);
  return out;
}

QuantumState integrate_master_equation(const LindbladGenerator& generator, const QuantumState& rho0, double duration,
                                       int substeps) {
  require_same_layout(generator.layout(), rho0.layout(), "integrate_master_equation");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw Error("integrate_master_equation: duration must be >= 0");
  if (substeps < 1) throw Error("integrate_master_equation: substeps must be >= 1");
  Matrix rho = rho0.to_density();
  if (duration == 0.0) return QuantumState::mixed(rho0.layout(), std::move(rho));

  const double h = duration / substeps;
  const double metric = (generator.max_rate() + generator.hamiltonian_norm()) * h;
  if (!(metric < 0.05)) {
    throw Error("integrate_master_equation: step too large, (max rate + ||H||) * h = " + std::to_string(metric) +
                " (needs < 0.05)");
  }
  for (int step = 0; step < substeps; ++step) {
    const Matrix k1 = generator.apply_hermitian(rho);
    const Matrix k2 = generator.apply_hermitian(rho + (0.5 * h) * k1);
    const Matrix k3 = generator.apply_hermitian(rho + (0.5 * h) * k2);
    const Matrix k4 = generator.apply_hermitian(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  // RK4 keeps Hermiticity only up to rounding; symmetrize before handing back.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuantumState::mixed(rho0.layout(), std::move(rho));
}

QuantumState integrate_master_equation(const TruncatedOperator& hamiltonian, const std::vector<JumpTerm>& jumps,
                                       const QuantumState& rho0, double duration, int substeps) {
  return integrate_master_equation(LindbladGenerator(hamiltonian, jumps), rho0, duration, substeps);
}

QuantumState propagate_master_equation(const LindbladGenerator& generator, const QuantumState& rho0,
                                       double duration, double tol) {
  require_same_layout(generator.layout(), rho0.layout(), "propagate_master_equation");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw Error("propagate_master_equation: duration must be >= 0");
  Matrix rho = rho0.to_density();
  if (duration > 0.0) {
    // Every Taylor term L^k(rho) stays Hermitian, so the cheaper apply is valid.
    rho = exp_action([&](const Matrix& x) -> Matrix { return duration * generator.apply_hermitian(x); },
                     generator.superoperator_norm_bound() * duration, rho, tol);
    rho = 0.5 * (rho + rho.adjoint()).eval();
  }
  return QuantumState::mixed(rho0.layout(), std::move(rho));
}

int recommended_substeps(const LindbladGenerator& generator, double duration) {
  if (!(duration >= 0.0)) throw Error("recommended_substeps: duration must be >= 0");
  const double scale = std::max(generator.generator_scale(), generator.max_rate() + generator.hamiltonian_norm());
  const double steps = std::ceil(scale * duration / 0.049);
  return std::max(1, static_cast<int>(steps));
}

}  // namespace squeezeamp
