#pragma once

// Trajectory kernels. Sequences are propagated in the squeezed frame of each
// segment: the generator is rewritten with S^dag a S in place of a, so the
// state itself stays close to the vacuum sector even at large squeezing.

#include <cstdint>
#include <functional>
#include <vector>

#include "squeezeamp/fock.hpp"
#include "squeezeamp/open_systems.hpp"
#include "squeezeamp/protocols.hpp"

namespace squeezeamp {

/// Compressions of S^dag x S for the ladder and number operators of both modes.
struct FrameOperators {
  SparseMatrix a;
  SparseMatrix b;
  SparseMatrix n_a;
  SparseMatrix n_b;
};
FrameOperators frame_operators(const Layout& layout, double r, const SqueezeAngles& angles);

SparseMatrix frame_coupling(const CouplingSpec& coupling, const FrameOperators& ops);
/// i (alpha_a a'^dag + alpha_b b'^dag) + h.c.
SparseMatrix frame_displacement(const DisplacementAmplitudes& d, const FrameOperators& ops);

/// psi <- exp(-i t H) psi by a scaled Taylor series, H Hermitian and
/// ||H||_2 <= norm_bound.
void expm_multiply_hermitian(const SparseMatrix& h, double t, double norm_bound, Vector& psi, double tol = 1e-13);

/// Largest |eigenvalue| of a Hermitian sparse matrix.
double spectral_norm_hermitian(const SparseMatrix& h);

/// Pure-state propagation of a bang-bang sequence with displacement noise,
/// one amplitude pair per segment.
class PureSequenceEvolver {
 public:
  PureSequenceEvolver(const Sequence& sequence, const Layout& layout);

  const Layout& layout() const { return layout_; }
  std::size_t segment_count() const { return sequence_.segments.size(); }
  Vector run(const Vector& psi0, const std::vector<DisplacementAmplitudes>& amplitudes) const;

 private:
  struct FrameData {
    SqueezeAngles angles;
    SparseMatrix coupling;
    SparseMatrix a;
    SparseMatrix b;
    double coupling_norm;
    double a_norm;
    double b_norm;
  };
  const FrameData& frame_for(const SqueezeAngles& angles) const;

  Sequence sequence_;
  Layout layout_;
  std::vector<FrameData> frames_;
  Eigen::VectorXcd rotation_phases_;
};

/// Free generator of a Lindblad noise model in a squeezed frame.
LindbladGenerator frame_generator(const CouplingSpec& coupling, const NoiseSpec& noise, const Layout& layout, double r,
                                  const SqueezeAngles& angles);

enum class Integrator { taylor, rk4 };

/// Density-matrix propagation of a bang-bang sequence whose free segments
/// follow a Lindblad master equation.
class LindbladSequenceEvolver {
 public:
  LindbladSequenceEvolver(const Sequence& sequence, const Layout& layout, const NoiseSpec& noise,
                          Integrator integrator = Integrator::taylor);

  QuantumState run(const QuantumState& rho0) const;
  /// Total RK4 steps per run, for cost estimates.
  long long total_substeps() const;

 private:
  struct FrameData {
    SqueezeAngles angles;
    LindbladGenerator generator;
    int substeps;
  };

  Sequence sequence_;
  Layout layout_;
  Integrator integrator_;
  std::vector<FrameData> frames_;
};

/// exp(t L_r) rho0 with L_r the Trotter-limit generator for loss, thermal or
/// dephasing noise (H_lambda2 = lambda2 H_0 in the lab frame).
QuantumState trotter_limit_evolution(const CouplingSpec& coupling, const NoiseSpec& noise, double r,
                                     const QuantumState& rho0, double duration,
                                     Integrator integrator = Integrator::taylor);

// --- Monte Carlo ----------------------------------------------------------------

struct TrajectorySample {
  double infidelity;
  double leakage;
};

struct TrajectoryStats {
  double mean_infidelity;
  double stderr_infidelity;
  double leakage_max;
  int samples;
};

/// One trajectory from its own RNG stream.
using TrajectoryFn = std::function<TrajectorySample(RngStream&)>;

/// Threads used by the parallel kernels: SQUEEZEAMP_THREADS if set, else the
/// OpenMP default.
int worker_threads();

/// Streams first_stream .. first_stream + samples - 1 of `seed`, reduced in
/// stream order so the two variants give identical bytes.
TrajectoryStats average_trajectories_serial(const TrajectoryFn& fn, std::uint64_t seed, std::uint64_t first_stream,
                                            int samples);
TrajectoryStats average_trajectories(const TrajectoryFn& fn, std::uint64_t seed, std::uint64_t first_stream,
                                     int samples);

TrajectoryStats reduce_samples(const std::vector<TrajectorySample>& samples);

}  // namespace squeezeamp
