#pragma once

// Noise and decoherence: random displacements, Lindblad dissipators and a
// fixed-step RK4 master-equation integrator, plus the closed-form generators
// that bang-bang amplification produces in the Trotter limit.

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include "squeezeamp/fock.hpp"
#include "squeezeamp/interactions.hpp"

namespace squeezeamp {

struct RandomDisplacements {
  double sigma;  // std-dev of each real component of alpha_a, alpha_b
};
struct Loss {
  double eta_a;
  double eta_b;
};
struct Thermal {
  double eta_c_a;
  double eta_c_b;
  double eta_h_a;
  double eta_h_b;
};
struct Dephasing {
  double gamma_a;
  double gamma_b;
};

using NoiseSpec = std::variant<RandomDisplacements, Loss, Thermal, Dephasing>;

/// Throws on negative rates or heating at or above the loss rate.
void validate(const NoiseSpec& noise);
std::string_view noise_name(const NoiseSpec& noise);
bool is_lindblad(const NoiseSpec& noise);

/// Independent, reproducible normal stream for one trajectory.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  double normal() { return normal_(engine_); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Re and Im of both amplitudes drawn independently from N(0, sigma^2).
DisplacementAmplitudes sample_displacements(double sigma, RngStream& rng);

struct JumpTerm {
  TruncatedOperator op;
  double rate;
};

// Contributes -coefficient [X, [X, rho]].
struct DoubleCommutatorTerm {
  TruncatedOperator op;
  double coefficient;
};

/// drho/dt = -i[H, rho] + sum rate D_L(rho) - sum c [X,[X,rho]].
class LindbladGenerator {
 public:
  LindbladGenerator(TruncatedOperator hamiltonian, std::vector<JumpTerm> jumps,
                    std::vector<DoubleCommutatorTerm> double_commutators = {});

  const TruncatedOperator& hamiltonian() const { return hamiltonian_; }
  const std::vector<JumpTerm>& jumps() const { return jumps_; }
  const std::vector<DoubleCommutatorTerm>& double_commutators() const { return double_commutators_; }
  const Layout& layout() const { return hamiltonian_.layout(); }

  Matrix apply(const Matrix& rho) const;
  // Same as apply() but assumes rho is Hermitian, which halves the work.
  Matrix apply_hermitian(const Matrix& rho) const;

  double max_rate() const;
  double hamiltonian_norm() const;
  /// ||H||_1 plus the dissipative rates weighted by their operator norms;
  /// sets the RK4 step count.
  double generator_scale() const;
  /// Induced 1-norm bound of rho -> L(rho) on vectorized matrices.
  double superoperator_norm_bound() const;

 private:
  struct SparseJump {
    SparseMatrix op;
    SparseMatrix op_adjoint;
    double rate;
  };
  struct SparseCommutator {
    SparseMatrix op;
    double coefficient;
  };

  TruncatedOperator hamiltonian_;
  std::vector<JumpTerm> jumps_;
  std::vector<DoubleCommutatorTerm> double_commutators_;
  SparseMatrix h_sparse_;
  SparseMatrix h_effective_;  // H - (i/2) sum rate L^dag L
  std::vector<SparseJump> sparse_jumps_;
  std::vector<SparseCommutator> sparse_commutators_;
};

/// L rho L^dag - (L^dag L rho + rho L^dag L)/2
Matrix dissipator(const TruncatedOperator& jump, const QuantumState& rho);
Matrix lindblad_rhs(const TruncatedOperator& hamiltonian, const std::vector<JumpTerm>& jumps, const QuantumState& rho);

/// Classical RK4 with `substeps` equal steps. Requires
/// (max rate + ||H||_1) * duration / substeps < 0.05.
QuantumState integrate_master_equation(const LindbladGenerator& generator, const QuantumState& rho0, double duration,
                                       int substeps);
QuantumState integrate_master_equation(const TruncatedOperator& hamiltonian, const std::vector<JumpTerm>& jumps,
                                       const QuantumState& rho0, double duration, int substeps);
/// Smallest step count meeting the precondition with the full generator
/// scale in place of (max rate + ||H||).
int recommended_substeps(const LindbladGenerator& generator, double duration);

/// exp(duration L) rho0 by a scaled Taylor series of the generator (each
/// substep has superoperator norm <= 4). RK4 is the reference integrator.
QuantumState propagate_master_equation(const LindbladGenerator& generator, const QuantumState& rho0,
                                       double duration, double tol = 1e-13);

/// -i[H_amp, .] + sum eta (cosh^2 r D_L + sinh^2 r D_L^dag) for lowering jumps L.
LindbladGenerator amplified_loss_generator(double r, const std::vector<JumpTerm>& lowering_jumps,
                                           const TruncatedOperator& amplified_hamiltonian);

/// omega / ln(coth^2 r) with k_B = 1. Tends to 0 as r -> 0+, so r = 0 is rejected.
double effective_temperature(double r, double omega);

/// Trotter-limit dephasing generator. Each entry of `modes` carries a mode
/// ladder operator L with its dephasing rate gamma; the bare channel is
/// -gamma/2 [L^dag L, [L^dag L, .]].
LindbladGenerator amplified_dephasing_generator(double r, const std::vector<JumpTerm>& modes,
                                                const TruncatedOperator& amplified_hamiltonian);

struct ThermalRates {
  double loss;
  double heating;
};
/// Effective per-mode loss and heating rates after amplification.
ThermalRates amplified_thermal_rates(double r, double eta_c, double eta_h);

/// Trotter-limit thermal generator on a two-mode layout.
LindbladGenerator amplified_thermal_generator(double r, const Thermal& rates,
                                              const TruncatedOperator& amplified_hamiltonian);

}  // namespace squeezeamp
