#pragma once

// Gaussian backend for the amplified beamsplitter with random displacements.
//
// Phase-space vectors use the ordering x = (q_a, p_b, q_b, p_a). The
// beamsplitter never mixes the (q_a, p_b) pair with the (q_b, p_a) pair, so
// every map is a 2x2 block applied identically to both halves.

#include <vector>

#include <Eigen/Dense>

#include "squeezeamp/fock.hpp"
#include "squeezeamp/interactions.hpp"

namespace squeezeamp {

using Mat2 = Eigen::Matrix2d;
using Vec4 = Eigen::Vector4d;

/// [[0, 1], [-1, 0]]
Mat2 omega2();

struct SymplecticBlock {
  Mat2 m;
  Mat2 a;  // M = A B
  Mat2 b;
  double g;
  double dt;
  double r;
};

/// One Trotter repetition, M = A B with
/// A = [[c, e^{-2r} s], [-e^{2r} s, c]], B = [[c, e^{2r} s], [-e^{-2r} s, c]],
/// c = cos(g dt), s = sin(g dt).
SymplecticBlock build_block(double g, double dt, double r);

/// sin(g dt) cosh(2r); the eigenvalues of M are complex on the unit circle
/// below 1 and real negative from 1 on.
double block_s_tilde(const SymplecticBlock& blk);

/// M^N from the spectral decomposition over the two eigenvalues, with
/// repeated squaring when they (nearly) coincide.
Mat2 block_power(const SymplecticBlock& blk, int n);
/// Plain repeated multiplication, kept as the reference.
Mat2 block_power_reference(const SymplecticBlock& blk, int n);

struct EffectiveQuadraticHamiltonian {
  double u;
  double v;
};

/// Solves exp(Omega [[u, v], [v, u]] t) = Mn on the principal branch.
/// Throws when |tr Mn| > 2 (hyperbolic; no real logarithm of this form).
EffectiveQuadraticHamiltonian extract_effective_hamiltonian(const Mat2& mn, double t);

struct AccumulatedDisplacement {
  Vec4 d;  // (q_a, p_b, q_b, p_a)

  cplx gamma() const;  // displacement of mode a
  cplx nu() const;     // displacement of mode b
};

/// sqrt2 (Re alpha_a, Im alpha_b, Re alpha_b, Im alpha_a)
Vec4 displacement_drive(const DisplacementAmplitudes& amp);

/// int_0^dt e^{g Omega (dt - s)} ds = (g Omega)^{-1} (e^{g Omega dt} - I)
Mat2 segment_integral(double g, double dt);

/// Sum over repetitions j of M^{N-j} (D_{j,2} + A D_{j,1}), where D_{j,1} =
/// E_+ S d_{2j-1} and D_{j,2} = E_- S d_{2j}, S = segment_integral, E_+- =
/// diag(e^{+-r}, e^{-+r}). `amplitudes` holds one entry per free segment in
/// time order, so its length must be 2N.
AccumulatedDisplacement accumulate_displacements(const SymplecticBlock& blk,
                                                 const std::vector<DisplacementAmplitudes>& amplitudes);

/// D(gamma) (x) D(nu) exp(-i H_eff t), H_eff = u (q_a q_b + p_a p_b) + (v/2)({q_a,p_a} + {q_b,p_b}).
TruncatedOperator fock_realization(const EffectiveQuadraticHamiltonian& eff, const AccumulatedDisplacement& disp,
                                   double t, const Layout& layout);

/// Heisenberg-picture map of the bang-bang beamsplitter sequence as simulated
/// by the Fock backend: squeezes (pi,pi) then (0,0) in each repetition, with
/// the displacement sampled once per free segment.
struct GaussianSequenceResult {
  Mat2 mn;
  EffectiveQuadraticHamiltonian eff;
  AccumulatedDisplacement disp;
};
GaussianSequenceResult gaussian_bs_sequence(double g, double r, int trotter_steps, double total_time,
                                            const std::vector<DisplacementAmplitudes>& amplitudes);

/// exp(-i H_eff t) |01>, shared by every noise trajectory at fixed (r, N).
Vector gaussian_bs_noiseless_state(const EffectiveQuadraticHamiltonian& eff, double t, const Layout& layout);

/// |<target| D(gamma) (x) D(nu) |psi>|^2 for a target supported on n <= 1 in
/// each mode, from closed-form displacement matrix elements.
double displaced_fidelity(const QuantumState& target, const Vector& psi, const AccumulatedDisplacement& disp);

}  // namespace squeezeamp
