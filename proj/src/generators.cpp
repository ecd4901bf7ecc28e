#include <cmath>

#include "squeezeamp/open_systems.hpp"

namespace squeezeamp {

namespace {

void require_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error("squeezing strength r must be finite and >= 0");
}

bool strictly_lowering(const TruncatedOperator& op) {
  const Matrix& m = op.matrix();
  bool any = false;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) == cplx(0.0, 0.0)) continue;
      if (r >= c) return false;
      any = true;
    }
  }
  return any;
}

}  // namespace

LindbladGenerator amplified_loss_generator(double r, const std::vector<JumpTerm>& lowering_jumps,
                                           const TruncatedOperator& amplified_hamiltonian) {
  require_r(r);
  const double c2 = std::cosh(r) * std::cosh(r);
  const double s2 = std::sinh(r) * std::sinh(r);
  std::vector<JumpTerm> jumps;
  for (const JumpTerm& j : lowering_jumps) {
    if (!strictly_lowering(j.op)) throw Error("amplified_loss_generator: jump operators must be lowering operators");
    jumps.push_back({j.op, j.rate * c2});
    if (s2 > 0.0) jumps.push_back({j.op.adjoint(), j.rate * s2});
  }
  return LindbladGenerator(amplified_hamiltonian, std::move(jumps));
}

double effective_temperature(double r, double omega) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error("effective_temperature: r must be > 0 (T -> 0 as r -> 0+)");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error("effective_temperature: omega must be > 0");
  const double coth = 1.0 / std::tanh(r);
  return omega / std::log(coth * coth);
}

LindbladGenerator amplified_dephasing_generator(double r, const std::vector<JumpTerm>& modes,
                                                const TruncatedOperator& amplified_hamiltonian) {
  require_r(r);
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  std::vector<JumpTerm> jumps;
  std::vector<DoubleCommutatorTerm> commutators;
  for (const JumpTerm& m : modes) {
    if (!(m.rate >= 0.0)) throw Error("amplified_dephasing_generator: gamma must be >= 0");
    const TruncatedOperator& l = m.op;
    const TruncatedOperator ld = l.adjoint();
    commutators.push_back({ld * l, 0.5 * m.rate * ch * ch});
    if (sh == 0.0) continue;
    const TruncatedOperator l2 = l * l;
    const TruncatedOperator ld2 = ld * ld;
    jumps.push_back({l2, 0.25 * m.rate * sh * sh});
    jumps.push_back({ld2, 0.25 * m.rate * sh * sh});
    commutators.push_back({l2, 0.125 * m.rate * sh * sh});
    commutators.push_back({ld2, 0.125 * m.rate * sh * sh});
  }
  return LindbladGenerator(amplified_hamiltonian, std::move(jumps), std::move(commutators));
}

ThermalRates amplified_thermal_rates(double r, double eta_c, double eta_h) {
  require_r(r);
  validate(Thermal{eta_c, eta_c, eta_h, eta_h});
  const double c2 = std::cosh(r) * std::cosh(r);
  const double s2 = std::sinh(r) * std::sinh(r);
  return {eta_c * c2 + eta_h * s2, eta_c * s2 + eta_h * c2};
}

LindbladGenerator amplified_thermal_generator(double r, const Thermal& rates,
                                              const TruncatedOperator& amplified_hamiltonian) {
  validate(rates);
  const Layout& layout = amplified_hamiltonian.layout();
  const TruncatedOperator a = mode_a_annihilator(layout);
  const TruncatedOperator b = mode_b_annihilator(layout);
  const ThermalRates ra = amplified_thermal_rates(r, rates.eta_c_a, rates.eta_h_a);
  const ThermalRates rb = amplified_thermal_rates(r, rates.eta_c_b, rates.eta_h_b);
  std::vector<JumpTerm> jumps;
  auto add = [&](const TruncatedOperator& op, double rate) {
    if (rate > 0.0) jumps.push_back({op, rate});
  };
  add(a, ra.loss);
  add(a.adjoint(), ra.heating);
  add(b, rb.loss);
  add(b.adjoint(), rb.heating);
  return LindbladGenerator(amplified_hamiltonian, std::move(jumps));
}

}  // namespace squeezeamp
