#pragma once

// Bang-bang Hamiltonian-amplification sequences and the closed-form
// amplification factors of the continuous-drive variants.
//
// Time ordering: operator products act right to left, but segment lists are
// stored in time order, so segments.front() acts on the input first.

#include <functional>
#include <vector>

#include "squeezeamp/fock.hpp"
#include "squeezeamp/interactions.hpp"

namespace squeezeamp {

struct SqueezeAngles {
  double theta_a;
  double theta_b;

  bool operator==(const SqueezeAngles&) const = default;
};

class BangBangProtocol {
 public:
  BangBangProtocol(CouplingSpec coupling, double r_a, double r_b, int trotter_steps, double total_time);
  static BangBangProtocol equal_squeezing(CouplingSpec coupling, double r, int trotter_steps, double total_time) {
    return BangBangProtocol(coupling, r, r, trotter_steps, total_time);
  }

  const CouplingSpec& coupling() const { return coupling_; }
  double r_a() const { return r_a_; }
  double r_b() const { return r_b_; }
  int trotter_steps() const { return trotter_steps_; }
  double total_time() const { return total_time_; }

 private:
  CouplingSpec coupling_;
  double r_a_;
  double r_b_;
  int trotter_steps_;
  double total_time_;
};

/// cosh(r_a + r_b) for the beamsplitter, cosh(2 r_a) cosh(2 r_b) for cross-Kerr.
double amplification_factor(CouplingKind kind, double r_a, double r_b);
double amplification_factor(const BangBangProtocol& protocol);
/// Equal squeezing strength that reaches `lambda2`.
double squeezing_for_amplification(CouplingKind kind, double lambda2);

/// 10 log10(e^{2r}).
double squeezing_db(double r);
double squeezing_from_db(double db);

struct Segment {
  SqueezeAngles angles;
  double duration;
};

struct Sequence {
  CouplingSpec coupling;
  double r;
  double total_time;
  std::vector<Segment> segments;
  // Rate of the trailing rotation R(t) = exp(i rate (n_a + n_b) t); zero for
  // the beamsplitter sequence.
  double rotation_rate;
};

Sequence build_bs_sequence(const BangBangProtocol& protocol);
Sequence build_ck_sequence(const BangBangProtocol& protocol);
Sequence build_sequence(const BangBangProtocol& protocol);

/// exp(i rate (n_a + n_b) t) as a diagonal unitary.
TruncatedOperator rotation_unitary(const Layout& layout, double rate, double t);

/// Evolves a state for dt under the (possibly noisy or dissipative) free dynamics.
using FreeEvolver = std::function<QuantumState(const QuantumState&, double)>;

/// Applies the sequence literally: each segment conjugates the free evolution
/// by explicit truncated squeeze unitaries, S^dag U(dt) S. Squeezes are
/// noise-free and instantaneous.
QuantumState apply_sequence(const Sequence& sequence, const QuantumState& initial, const FreeEvolver& free_evolver);

/// Free evolution expressed in the squeezed frame of one segment: the evolver
/// must apply exp(dt L') where L' is the free generator with every ladder
/// operator replaced by S^dag a S (see squeezed_ladder_a/b).
using FrameEvolver = std::function<QuantumState(const QuantumState&, double, const SqueezeAngles&)>;

/// Same dynamics as apply_sequence, but the squeezes are absorbed into the
/// generators, so intermediate states never carry the large photon numbers
/// of the physically squeezed state.
QuantumState apply_sequence_in_frame(const Sequence& sequence, const QuantumState& initial,
                                     const FrameEvolver& frame_evolver);

/// S^dag a S = cosh(r) a - e^{i theta} sinh(r) a^dag on mode a (resp. b) of a
/// two-mode layout; the compression of the exact transformed operator.
TruncatedOperator squeezed_ladder_a(const Layout& layout, double r, double theta);
TruncatedOperator squeezed_ladder_b(const Layout& layout, double r, double theta);

// --- continuous drives -------------------------------------------------------

/// Modified Bessel function of the first kind by its ascending series.
double bessel_i(int n, double x);

/// lambda_2 = I_0(K) for the globally driven beamsplitter.
double continuous_factor_bs(double k);

struct CrossKerrDriveFactors {
  double lambda2;
  // z(K) = I_0^2 - I_0 + 2 sum (-1)^n I_4n I_2n. The period-averaged Hamiltonian
  // carries chi * z/2 * (n_a + n_b) on top of lambda2 * H_cK.
  double z;
};
CrossKerrDriveFactors continuous_factor_ck(double k);

struct ContinuousDriveSpec {
  double k;       // dimensionless drive amplitude
  double period;  // T_c

  ContinuousDriveSpec(double k_amplitude, double period_tc);
};

/// First-order Magnus term (1/T) int_0^T U_c^dag(t) H U_c(t) dt by composite
/// Simpson quadrature, with U_c built from numerically exponentiated squeeze
/// generators at the closed-form integrated drive. The beamsplitter drive has
/// period T_c, the cross-Kerr one 2 T_c. Conjugation happens in a larger
/// working truncation and the result is compressed onto `layout`.
TruncatedOperator magnus_average_numeric(const ContinuousDriveSpec& drive, const CouplingSpec& coupling,
                                         int quadrature_points, const Layout& layout);

}  // namespace squeezeamp
