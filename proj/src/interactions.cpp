#include "squeezeamp/interactions.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace squeezeamp {

std::string_view to_string(CouplingKind kind) {
  return kind == CouplingKind::beamsplitter ? "beamsplitter" : "cross_kerr";
}

CouplingKind parse_coupling_kind(std::string_view text) {
  if (text == "bs" || text == "beamsplitter") return CouplingKind::beamsplitter;
  if (text == "ck" || text == "cross_kerr" || text == "cross-kerr") return CouplingKind::cross_kerr;
  throw Error("unknown coupling kind '" + std::string(text) + "' (expected bs or ck)");
}

CouplingSpec::CouplingSpec(CouplingKind k, double s) : kind(k), strength(s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error("CouplingSpec: strength must be positive and finite");
}

TruncatedOperator h_beamsplitter(double g, const Layout& layout) {
  if (!(g > 0.0)) throw Error("h_beamsplitter: g must be positive");
  const TruncatedOperator a = mode_a_annihilator(layout);
  const TruncatedOperator b = mode_b_annihilator(layout);
  return cplx(g) * (a * b.adjoint() + a.adjoint() * b);
}

TruncatedOperator h_cross_kerr(double chi, const Layout& layout) {
  if (!(chi > 0.0)) throw Error("h_cross_kerr: chi must be positive");
  Matrix h = Matrix::Zero(layout.dim(), layout.dim());
  for (int i = 0; i <= layout.mode_a().n_max(); ++i) {
    for (int j = 0; j <= layout.mode_b().n_max(); ++j) {
      const auto k = layout.index(i, j);
      h(k, k) = chi * i * j;
    }
  }
  return TruncatedOperator(layout, std::move(h));
}

TruncatedOperator coupling_hamiltonian(const CouplingSpec& spec, const Layout& layout) {
  return spec.kind == CouplingKind::beamsplitter ? h_beamsplitter(spec.strength, layout)
                                                 : h_cross_kerr(spec.strength, layout);
}

double rotation_correction_rate(double chi, double r) {
  const double sh = std::sinh(r);
  return chi * std::cosh(2.0 * r) * sh * sh;
}

TruncatedOperator h_rotation_correction(double chi, double r, const Layout& layout) {
  if (!(chi > 0.0)) throw Error("h_rotation_correction: chi must be positive");
  if (!std::isfinite(r)) throw Error("h_rotation_correction: r must be finite");
  const double rate = rotation_correction_rate(chi, r);
  Matrix h = Matrix::Zero(layout.dim(), layout.dim());
  for (int i = 0; i <= layout.mode_a().n_max(); ++i) {
    for (int j = 0; j <= layout.mode_b().n_max(); ++j) {
      const auto k = layout.index(i, j);
      h(k, k) = rate * (i + j);
    }
  }
  return TruncatedOperator(layout, std::move(h));
}

TruncatedOperator h_displacement(const DisplacementAmplitudes& d, const Layout& layout) {
  const TruncatedOperator a = mode_a_annihilator(layout);
  const TruncatedOperator b = mode_b_annihilator(layout);
  const TruncatedOperator drive = kI * (d.alpha_a * a.adjoint() + d.alpha_b * b.adjoint());
  return drive + drive.adjoint();
}

double gate_time(const CouplingSpec& spec) {
  return spec.kind == CouplingKind::beamsplitter ? std::numbers::pi / (4.0 * spec.strength)
                                                 : std::numbers::pi / spec.strength;
}

QuantumState gate_input_state(CouplingKind kind, const Layout& layout) {
  return kind == CouplingKind::beamsplitter ? fock_state(layout, 0, 1) : make_plus_plus(layout);
}

QuantumState gate_target_state(CouplingKind kind, const Layout& layout) {
  return kind == CouplingKind::beamsplitter ? make_bell_phi(layout) : make_bell_psi(layout);
}

}  // namespace squeezeamp
