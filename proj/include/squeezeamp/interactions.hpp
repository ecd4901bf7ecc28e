#pragma once

// Coupling, correction, and noise Hamiltonians in the interaction picture
// (hbar = 1). No free-oscillator terms appear anywhere.

#include <string_view>

#include "squeezeamp/fock.hpp"

namespace squeezeamp {

enum class CouplingKind { beamsplitter, cross_kerr };

std::string_view to_string(CouplingKind kind);
CouplingKind parse_coupling_kind(std::string_view text);

struct CouplingSpec {
  CouplingKind kind;
  double strength;  // g or chi

  CouplingSpec(CouplingKind k, double s);
  static CouplingSpec beamsplitter(double g) { return {CouplingKind::beamsplitter, g}; }
  static CouplingSpec cross_kerr(double chi) { return {CouplingKind::cross_kerr, chi}; }
};

struct DisplacementAmplitudes {
  cplx alpha_a{0.0, 0.0};
  cplx alpha_b{0.0, 0.0};
};

/// g (a b^dag + a^dag b)
TruncatedOperator h_beamsplitter(double g, const Layout& layout);
/// chi a^dag a b^dag b
TruncatedOperator h_cross_kerr(double chi, const Layout& layout);
TruncatedOperator coupling_hamiltonian(const CouplingSpec& spec, const Layout& layout);

/// chi cosh(2r) sinh^2(r): rate of the global rotation that the cross-Kerr
/// sequence leaves behind.
double rotation_correction_rate(double chi, double r);
/// rotation_correction_rate(chi, r) (a^dag a + b^dag b)
TruncatedOperator h_rotation_correction(double chi, double r, const Layout& layout);

/// i(alpha_a a^dag + alpha_b b^dag) + h.c.
TruncatedOperator h_displacement(const DisplacementAmplitudes& d, const Layout& layout);

/// pi/(4g) for the beamsplitter Bell gate, pi/chi for the cross-Kerr one.
double gate_time(const CouplingSpec& spec);

/// |01> for the beamsplitter gate, |++> for cross-Kerr.
QuantumState gate_input_state(CouplingKind kind, const Layout& layout);
/// |Phi> for the beamsplitter gate, |Psi> for cross-Kerr.
QuantumState gate_target_state(CouplingKind kind, const Layout& layout);

}  // namespace squeezeamp
