#include "squeezeamp/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "squeezeamp/matrix_exp.hpp"

namespace squeezeamp {

namespace {

Matrix single_ladder(int n_max, double r, double theta) {
  const Matrix a = annihilator(TruncatedMode(n_max)).matrix();
  return std::cosh(r) * a - (std::exp(kI * theta) * std::sinh(r)) * a.adjoint();
}

// cosh(2r) n + sinh^2 r - (sinh 2r / 2)(e^{i theta} a^dag^2 + e^{-i theta} a^2), the
// exact compression of S^dag n S.
Matrix single_number(int n_max, double r, double theta) {
  const Matrix a = annihilator(TruncatedMode(n_max)).matrix();
  const Matrix a2 = a * a;
  const Matrix n = a.adjoint() * a;
  const Matrix id = Matrix::Identity(n_max + 1, n_max + 1);
  const double s = std::sinh(r);
  return std::cosh(2.0 * r) * n + (s * s) * id -
         (0.5 * std::sinh(2.0 * r)) * (std::exp(kI * theta) * a2.adjoint() + std::exp(-kI * theta) * a2);
}

SparseMatrix to_sparse(const Matrix& m) {
  SparseMatrix out = m.sparseView(1.0, 0.0);
  out.makeCompressed();
  return out;
}

Eigen::VectorXcd rotation_diagonal(const Layout& layout, double rate, double t) {
  Eigen::VectorXcd d(layout.dim());
  for (int i = 0; i <= layout.mode_a().n_max(); ++i) {
    for (int j = 0; j <= layout.mode_b().n_max(); ++j) d(layout.index(i, j)) = std::exp(kI * (rate * (i + j) * t));
  }
  return d;
}

}  // namespace

FrameOperators frame_operators(const Layout& layout, double r, const SqueezeAngles& angles) {
  if (!layout.is_two_mode()) throw Error("frame_operators: needs a two-mode layout");
  const int na = layout.mode_a().n_max();
  const int nb = layout.mode_b().n_max();
  const Matrix ia = Matrix::Identity(na + 1, na + 1);
  const Matrix ib = Matrix::Identity(nb + 1, nb + 1);
  FrameOperators ops;
  ops.a = to_sparse(Eigen::kroneckerProduct(single_ladder(na, r, angles.theta_a), ib).eval());
  ops.b = to_sparse(Eigen::kroneckerProduct(ia, single_ladder(nb, r, angles.theta_b)).eval());
  ops.n_a = to_sparse(Eigen::kroneckerProduct(single_number(na, r, angles.theta_a), ib).eval());
  ops.n_b = to_sparse(Eigen::kroneckerProduct(ia, single_number(nb, r, angles.theta_b)).eval());
  return ops;
}

SparseMatrix frame_coupling(const CouplingSpec& coupling, const FrameOperators& ops) {
  SparseMatrix h;
  if (coupling.kind == CouplingKind::beamsplitter) {
    const SparseMatrix ab = ops.a * SparseMatrix(ops.b.adjoint());
    h = coupling.strength * (ab + SparseMatrix(ab.adjoint()));
  } else {
    h = coupling.strength * (ops.n_a * ops.n_b);
  }
  h.prune(cplx(0.0), 0.0);
  h.makeCompressed();
  return h;
}

SparseMatrix frame_displacement(const DisplacementAmplitudes& d, const FrameOperators& ops) {
  const SparseMatrix x = (kI * d.alpha_a) * SparseMatrix(ops.a.adjoint()) + (kI * d.alpha_b) * SparseMatrix(ops.b.adjoint());
  SparseMatrix h = x + SparseMatrix(x.adjoint());
  h.makeCompressed();
  return h;
}

void expm_multiply_hermitian(const SparseMatrix& h, double t, double norm_bound, Vector& psi, double tol) {
  constexpr double kStepNorm = 4.0;
  constexpr int kMaxTerms = 60;
  const double total = norm_bound * std::abs(t);
  const int substeps = std::max(1, static_cast<int>(std::ceil(total / kStepNorm)));
  const cplx factor(0.0, -t / substeps);
  Vector term(psi.size());
  Vector next(psi.size());
  for (int s = 0; s < substeps; ++s) {
    term = psi;
    const double scale = psi.norm();
    double previous = 1.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      next.noalias() = h * term;
      term = next * (factor / static_cast<double>(k));
      psi += term;
      const double size = term.norm() / scale;
      if (size <= tol && previous <= tol) break;
      previous = size;
      if (k == kMaxTerms) throw Error("expm_multiply_hermitian: Taylor series failed to converge");
    }
  }
}

double spectral_norm_hermitian(const SparseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver{Matrix(h), Eigen::EigenvaluesOnly};
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// --- pure states ---------------------------------------------------------------

PureSequenceEvolver::PureSequenceEvolver(const Sequence& sequence, const Layout& layout)
    : sequence_(sequence), layout_(layout) {
  for (const Segment& seg : sequence_.segments) {
    const bool seen = std::any_of(frames_.begin(), frames_.end(),
                                  [&](const FrameData& f) { return f.angles == seg.angles; });
    if (seen) continue;
    const FrameOperators ops = frame_operators(layout_, sequence_.r, seg.angles);
    FrameData f{seg.angles, frame_coupling(sequence_.coupling, ops), ops.a, ops.b, 0.0, 0.0, 0.0};
    f.coupling_norm = spectral_norm_hermitian(f.coupling);
    f.a_norm = one_norm(f.a);
    f.b_norm = one_norm(f.b);
    frames_.push_back(std::move(f));
  }
  if (sequence_.rotation_rate != 0.0) {
    rotation_phases_ = rotation_diagonal(layout_, sequence_.rotation_rate, sequence_.total_time);
  }
}

const PureSequenceEvolver::FrameData& PureSequenceEvolver::frame_for(const SqueezeAngles& angles) const {
  for (const FrameData& f : frames_) {
    if (f.angles == angles) return f;
  }
  throw Error("PureSequenceEvolver: unknown squeeze angles");
}

Vector PureSequenceEvolver::run(const Vector& psi0, const std::vector<DisplacementAmplitudes>& amplitudes) const {
  if (psi0.size() != layout_.dim()) throw Error("PureSequenceEvolver: state dimension mismatch");
  if (!amplitudes.empty() && amplitudes.size() != sequence_.segments.size()) {
    throw Error("PureSequenceEvolver: need one amplitude pair per segment");
  }
  Vector psi = psi0;
  for (std::size_t k = 0; k < sequence_.segments.size(); ++k) {
    const Segment& seg = sequence_.segments[k];
    const FrameData& f = frame_for(seg.angles);
    const bool noisy = !amplitudes.empty() && (amplitudes[k].alpha_a != cplx(0.0) || amplitudes[k].alpha_b != cplx(0.0));
    if (!noisy) {
      expm_multiply_hermitian(f.coupling, seg.duration, f.coupling_norm, psi);
      continue;
    }
    const DisplacementAmplitudes& d = amplitudes[k];
    const SparseMatrix xa = (kI * d.alpha_a) * SparseMatrix(f.a.adjoint()) + (kI * d.alpha_b) * SparseMatrix(f.b.adjoint());
    SparseMatrix h = f.coupling + xa + SparseMatrix(xa.adjoint());
    const double bound = f.coupling_norm + 2.0 * (std::abs(d.alpha_a) * f.a_norm + std::abs(d.alpha_b) * f.b_norm);
    expm_multiply_hermitian(h, seg.duration, bound, psi);
  }
  if (rotation_phases_.size() > 0) psi = rotation_phases_.cwiseProduct(psi);
  return psi;
}

// --- Lindblad ---------------------------------------------------------------------

LindbladGenerator frame_generator(const CouplingSpec& coupling, const NoiseSpec& noise, const Layout& layout, double r,
                                  const SqueezeAngles& angles) {
  validate(noise);
  const FrameOperators ops = frame_operators(layout, r, angles);
  const TruncatedOperator h(layout, Matrix(frame_coupling(coupling, ops)));
  const TruncatedOperator a(layout, Matrix(ops.a));
  const TruncatedOperator b(layout, Matrix(ops.b));
  std::vector<JumpTerm> jumps;
  auto add = [&](const TruncatedOperator& op, double rate) {
    if (rate > 0.0) jumps.push_back({op, rate});
  };
  if (const auto* loss = std::get_if<Loss>(&noise)) {
    add(a, loss->eta_a);
    add(b, loss->eta_b);
  } else if (const auto* th = std::get_if<Thermal>(&noise)) {
    add(a, th->eta_c_a);
    add(a.adjoint(), th->eta_h_a);
    add(b, th->eta_c_b);
    add(b.adjoint(), th->eta_h_b);
  } else if (const auto* dp = std::get_if<Dephasing>(&noise)) {
    add(TruncatedOperator(layout, Matrix(ops.n_a)), dp->gamma_a);
    add(TruncatedOperator(layout, Matrix(ops.n_b)), dp->gamma_b);
  } else {
    throw Error("frame_generator: displacement noise has no Lindblad generator");
  }
  return LindbladGenerator(h, std::move(jumps));
}

LindbladSequenceEvolver::LindbladSequenceEvolver(const Sequence& sequence, const Layout& layout,
                                                 const NoiseSpec& noise, Integrator integrator)
    : sequence_(sequence), layout_(layout), integrator_(integrator) {
  for (const Segment& seg : sequence_.segments) {
    const bool seen = std::any_of(frames_.begin(), frames_.end(),
                                  [&](const FrameData& f) { return f.angles == seg.angles; });
    if (seen) continue;
    LindbladGenerator gen = frame_generator(sequence_.coupling, noise, layout_, sequence_.r, seg.angles);
    const int steps = recommended_substeps(gen, seg.duration);
    frames_.push_back({seg.angles, std::move(gen), steps});
  }
}

QuantumState LindbladSequenceEvolver::run(const QuantumState& rho0) const {
  QuantumState rho = rho0.is_pure() ? QuantumState::mixed(rho0) : rho0;
  for (const Segment& seg : sequence_.segments) {
    const auto it = std::find_if(frames_.begin(), frames_.end(),
                                 [&](const FrameData& f) { return f.angles == seg.angles; });
    rho = integrator_ == Integrator::rk4 ? integrate_master_equation(it->generator, rho, seg.duration, it->substeps)
                                         : propagate_master_equation(it->generator, rho, seg.duration);
  }
  if (sequence_.rotation_rate != 0.0) {
    const Eigen::VectorXcd d = rotation_diagonal(layout_, sequence_.rotation_rate, sequence_.total_time);
    Matrix m = d.asDiagonal() * rho.density() * d.conjugate().asDiagonal();
    rho = QuantumState::mixed(layout_, std::move(m));
  }
  return rho;
}

long long LindbladSequenceEvolver::total_substeps() const {
  long long total = 0;
  for (const Segment& seg : sequence_.segments) {
    for (const FrameData& f : frames_) {
      if (f.angles == seg.angles) total += f.substeps;
    }
  }
  return total;
}

QuantumState trotter_limit_evolution(const CouplingSpec& coupling, const NoiseSpec& noise, double r,
                                     const QuantumState& rho0, double duration, Integrator integrator) {
  validate(noise);
  const Layout& layout = rho0.layout();
  const double lambda2 = amplification_factor(coupling.kind, r, r);
  const TruncatedOperator h = cplx(lambda2) * coupling_hamiltonian(coupling, layout);
  const TruncatedOperator a = mode_a_annihilator(layout);
  const TruncatedOperator b = mode_b_annihilator(layout);
  const QuantumState mixed = rho0.is_pure() ? QuantumState::mixed(rho0) : rho0;
  auto run = [&](const LindbladGenerator& gen) {
    if (integrator == Integrator::taylor) return propagate_master_equation(gen, mixed, duration);
    return integrate_master_equation(gen, mixed, duration, recommended_substeps(gen, duration));
  };
  if (const auto* loss = std::get_if<Loss>(&noise)) {
    return run(amplified_loss_generator(r, {{a, loss->eta_a}, {b, loss->eta_b}}, h));
  }
  if (const auto* th = std::get_if<Thermal>(&noise)) return run(amplified_thermal_generator(r, *th, h));
  if (const auto* dp = std::get_if<Dephasing>(&noise)) {
    return run(amplified_dephasing_generator(r, {{a, dp->gamma_a}, {b, dp->gamma_b}}, h));
  }
  throw Error("trotter_limit_evolution: needs a Lindblad noise model");
}

// --- Monte Carlo ------------------------------------------------------------------

int worker_threads() {
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("SQUEEZEAMP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) threads = std::min<int>(threads, static_cast<int>(cap));
  }
  return std::max(1, threads);
}

TrajectoryStats reduce_samples(const std::vector<TrajectorySample>& samples) {
  if (samples.empty()) throw Error("reduce_samples: no samples");
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  double leak = 0.0;
  for (const TrajectorySample& s : samples) {
    sum += s.infidelity;
    leak = std::max(leak, s.leakage);
  }
  const double mean = sum / n;
  double var = 0.0;
  for (const TrajectorySample& s : samples) var += (s.infidelity - mean) * (s.infidelity - mean);
  const double stderr_value = samples.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return {std::clamp(mean, 0.0, 1.0), stderr_value, leak, static_cast<int>(samples.size())};
}

TrajectoryStats average_trajectories_serial(const TrajectoryFn& fn, std::uint64_t seed, std::uint64_t first_stream,
                                            int samples) {
  if (samples < 1) throw Error("average_trajectories: samples must be >= 1");
  std::vector<TrajectorySample> out(samples);
  for (int i = 0; i < samples; ++i) {
    RngStream rng(seed, first_stream + static_cast<std::uint64_t>(i));
    out[i] = fn(rng);
  }
  return reduce_samples(out);
}

TrajectoryStats average_trajectories(const TrajectoryFn& fn, std::uint64_t seed, std::uint64_t first_stream,
                                     int samples) {
  if (samples < 1) throw Error("average_trajectories: samples must be >= 1");
  std::vector<TrajectorySample> out(samples);
  std::string failure;
  bool failed = false;
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (int i = 0; i < samples; ++i) {
    try {
      RngStream rng(seed, first_stream + static_cast<std::uint64_t>(i));
      out[i] = fn(rng);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (!failed) failure = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw Error(failure);
  return reduce_samples(out);
}

}  // namespace squeezeamp
