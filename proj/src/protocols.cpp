#include "squeezeamp/protocols.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "squeezeamp/matrix_exp.hpp"

namespace squeezeamp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonnegative_r(double r_a, double r_b) {
  if (!(r_a >= 0.0) || !(r_b >= 0.0) || !std::isfinite(r_a) || !std::isfinite(r_b)) {
    throw Error("squeezing strengths must be finite and >= 0");
  }
}

Sequence make_sequence(const BangBangProtocol& p, const std::vector<SqueezeAngles>& pattern, double rotation_rate) {
  if (p.r_a() != p.r_b()) throw Error("sequences are only built for equal squeezing strengths r_a = r_b");
  const int n = p.trotter_steps();
  const double dt = p.total_time() / (static_cast<double>(pattern.size()) * n);
  Sequence seq{p.coupling(), p.r_a(), p.total_time(), {}, rotation_rate};
  seq.segments.reserve(pattern.size() * n);
  for (int rep = 0; rep < n; ++rep) {
    for (const SqueezeAngles& angles : pattern) seq.segments.push_back({angles, dt});
  }
  return seq;
}

TruncatedOperator squeezed_ladder(TruncatedMode mode, double r, double theta) {
  const TruncatedOperator a = annihilator(mode);
  return cplx(std::cosh(r)) * a - (std::exp(kI * theta) * std::sinh(r)) * a.adjoint();
}

}  // namespace

BangBangProtocol::BangBangProtocol(CouplingSpec coupling, double r_a, double r_b, int trotter_steps,
                                   double total_time)
    : coupling_(coupling), r_a_(r_a), r_b_(r_b), trotter_steps_(trotter_steps), total_time_(total_time) {
  require_nonnegative_r(r_a, r_b);
  if (trotter_steps < 1) throw Error("BangBangProtocol: trotter_steps must be >= 1");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) throw Error("BangBangProtocol: total_time must be > 0");
}

double amplification_factor(CouplingKind kind, double r_a, double r_b) {
  require_nonnegative_r(r_a, r_b);
  if (kind == CouplingKind::beamsplitter) {
    return std::cosh(r_a) * std::cosh(r_b) + std::sinh(r_a) * std::sinh(r_b);
  }
  return std::cosh(2.0 * r_a) * std::cosh(2.0 * r_b);
}

double amplification_factor(const BangBangProtocol& protocol) {
  return amplification_factor(protocol.coupling().kind, protocol.r_a(), protocol.r_b());
}

double squeezing_for_amplification(CouplingKind kind, double lambda2) {
  if (!(lambda2 >= 1.0)) throw Error("amplification factor must be >= 1");
  if (kind == CouplingKind::beamsplitter) return 0.5 * std::acosh(lambda2);
  return 0.5 * std::acosh(std::sqrt(lambda2));
}

double squeezing_db(double r) {
  if (!(r >= 0.0)) throw Error("squeezing_db: r must be >= 0");
  return 10.0 * std::log10(std::exp(2.0 * r));
}

double squeezing_from_db(double db) {
  if (!(db >= 0.0)) throw Error("squeezing_from_db: dB must be >= 0");
  return db * std::log(10.0) / 20.0;
}

Sequence build_bs_sequence(const BangBangProtocol& protocol) {
  if (protocol.coupling().kind != CouplingKind::beamsplitter) throw Error("build_bs_sequence: needs a beamsplitter");
  return make_sequence(protocol, {{kPi, kPi}, {0.0, 0.0}}, 0.0);
}

Sequence build_ck_sequence(const BangBangProtocol& protocol) {
  if (protocol.coupling().kind != CouplingKind::cross_kerr) throw Error("build_ck_sequence: needs a cross-Kerr coupling");
  const double rate = rotation_correction_rate(protocol.coupling().strength, protocol.r_a());
  return make_sequence(protocol, {{kPi, kPi}, {0.0, kPi}, {kPi, 0.0}, {0.0, 0.0}}, rate);
}

Sequence build_sequence(const BangBangProtocol& protocol) {
  return protocol.coupling().kind == CouplingKind::beamsplitter ? build_bs_sequence(protocol)
                                                                : build_ck_sequence(protocol);
}

TruncatedOperator rotation_unitary(const Layout& layout, double rate, double t) {
  Matrix u = Matrix::Zero(layout.dim(), layout.dim());
  for (int i = 0; i <= layout.mode_a().n_max(); ++i) {
    for (int j = 0; j <= layout.mode_b().n_max(); ++j) {
      const auto k = layout.index(i, j);
      u(k, k) = std::exp(kI * (rate * (i + j) * t));
    }
  }
  return TruncatedOperator(layout, std::move(u));
}

QuantumState apply_sequence(const Sequence& sequence, const QuantumState& initial, const FreeEvolver& free_evolver) {
  const Layout& layout = initial.layout();
  std::vector<std::pair<SqueezeAngles, TruncatedOperator>> cache;
  auto squeeze_for = [&](const SqueezeAngles& angles) -> const TruncatedOperator& {
    for (const auto& [key, op] : cache) {
      if (key == angles) return op;
    }
    cache.emplace_back(angles, squeeze_pair(layout, sequence.r, angles.theta_a, angles.theta_b));
    return cache.back().second;
  };

  QuantumState state = initial;
  for (const Segment& seg : sequence.segments) {
    const TruncatedOperator& s = squeeze_for(seg.angles);
    state = conjugate(s, state);
    state = free_evolver(state, seg.duration);
    state = conjugate(s.adjoint(), state);
  }
  if (sequence.rotation_rate != 0.0) {
    state = conjugate(rotation_unitary(layout, sequence.rotation_rate, sequence.total_time), state);
  }
  return state;
}

QuantumState apply_sequence_in_frame(const Sequence& sequence, const QuantumState& initial,
                                     const FrameEvolver& frame_evolver) {
  QuantumState state = initial;
  for (const Segment& seg : sequence.segments) state = frame_evolver(state, seg.duration, seg.angles);
  if (sequence.rotation_rate != 0.0) {
    state = conjugate(rotation_unitary(initial.layout(), sequence.rotation_rate, sequence.total_time), state);
  }
  return state;
}

TruncatedOperator squeezed_ladder_a(const Layout& layout, double r, double theta) {
  return tensor(squeezed_ladder(layout.mode_a(), r, theta), TruncatedOperator::identity(Layout::single(layout.mode_b())));
}

TruncatedOperator squeezed_ladder_b(const Layout& layout, double r, double theta) {
  return tensor(TruncatedOperator::identity(Layout::single(layout.mode_a())), squeezed_ladder(layout.mode_b(), r, theta));
}

}  // namespace squeezeamp
