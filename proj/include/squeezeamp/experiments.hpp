#pragma once

// Figure-level sweeps: configuration, baseline-noise calibration and the
// Monte Carlo / master-equation drivers behind `squeezeamp run`.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squeezeamp/kernels.hpp"
#include "squeezeamp/open_systems.hpp"
#include "squeezeamp/protocols.hpp"

namespace squeezeamp {

enum class Figure { fig2a, fig2b, fig3a, fig3b, fig3c, fig3d, custom };
enum class Backend { fock, symplectic, automatic };
enum class NoiseKind { displacement, loss, thermal, dephasing };
enum class SweepKind { sigma_dt, squeezing_db };
// Whether sigma is the std-dev of each real component of alpha or of the
// complex amplitude as a whole (sigma / sqrt2 per component).
enum class SigmaConvention { per_component, per_amplitude };

std::string_view to_string(Figure f);
std::string_view to_string(Backend b);
std::string_view to_string(NoiseKind k);
std::string_view to_string(SweepKind k);
std::string_view to_string(SigmaConvention c);
Figure parse_figure(std::string_view text);
Backend parse_backend(std::string_view text);
NoiseKind parse_noise_kind(std::string_view text);
SweepKind parse_sweep_kind(std::string_view text);
SigmaConvention parse_sigma_convention(std::string_view text);

struct ExperimentConfig {
  Figure figure = Figure::fig2a;
  CouplingKind coupling = CouplingKind::beamsplitter;
  double strength = 1.0;

  NoiseKind noise = NoiseKind::displacement;
  // Unset: calibrated so that the unamplified gate reaches target_infidelity.
  std::optional<double> noise_rate;
  double thermal_ratio = 0.1;  // eta_h / eta_c
  SigmaConvention sigma_convention = SigmaConvention::per_component;
  double target_infidelity = 0.5;

  SweepKind sweep = SweepKind::sigma_dt;
  std::vector<double> lambdas{1.0, 2.0, 5.0, 10.0, 20.0};
  double sigma_dt_min = 1e-3;
  double sigma_dt_max = 1.0;
  int sigma_points_per_decade = 20;
  double db_min = 0.0;
  double db_max = 16.0;
  double db_step = 1.0;
  std::vector<int> trotter_steps{5};
  bool trotter_limit = true;  // N -> infinity curve for Lindblad noise

  int samples = 1000;
  std::uint64_t seed = 1;
  Backend backend = Backend::automatic;
  int n_max_pure = 12;
  int n_max_mixed = 7;
  std::string output = "out";
  bool ci = false;
};

/// Paper defaults for a figure (custom starts from the fig3 layout).
ExperimentConfig default_config(Figure figure);
/// Reduced grids, samples and truncations for quick runs.
void apply_ci_profile(ExperimentConfig& cfg);

/// Parses the JSON configuration (schema in docs/config.md) on top of the
/// defaults of its "figure" field. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
/// Canonical JSON with every resolved field, used for hashing.
std::string config_to_json(const ExperimentConfig& cfg);
/// Throws on inconsistent settings.
void validate(const ExperimentConfig& cfg);

std::vector<double> sigma_dt_grid(const ExperimentConfig& cfg);
std::vector<double> db_grid(const ExperimentConfig& cfg);

/// noise_rate mapped onto a NoiseSpec (same rate on both modes; thermal
/// heating at thermal_ratio times the loss rate).
NoiseSpec make_noise(NoiseKind kind, double rate, double thermal_ratio = 0.1,
                     SigmaConvention convention = SigmaConvention::per_component);

/// Backend actually used for a coupling/noise pair.
Backend resolve_backend(Backend requested, CouplingKind coupling, NoiseKind noise);

// --- single sweep points ------------------------------------------------------

struct PointSpec {
  CouplingSpec coupling{CouplingKind::beamsplitter, 1.0};
  double r = 0.0;
  int trotter_steps = 1;
  double total_time = 1.0;
  NoiseSpec noise = RandomDisplacements{0.0};
  Backend backend = Backend::fock;
  int n_max = 8;
  int samples = 1;
  std::uint64_t seed = 1;
  std::uint64_t first_stream = 0;
  bool parallel = true;
};

/// Mean infidelity of the amplified gate for one (r, N, noise) point:
/// trajectory average for displacement noise, one master-equation run
/// (samples = 1, stderr = 0) for Lindblad noise.
TrajectoryStats evaluate_point(const PointSpec& spec);

/// Same gate in the N -> infinity limit, from the amplified Lindbladian.
TrajectoryStats evaluate_trotter_limit(const CouplingSpec& coupling, const NoiseSpec& noise, double r,
                                       double total_time, int n_max);

// --- calibration ----------------------------------------------------------------

struct CalibrationOptions {
  double strength = 1.0;
  int trotter_steps = 1;  // only matters for displacement noise
  int samples = 1000;
  std::uint64_t seed = 1;
  std::uint64_t first_stream = 0;
  int n_max = 8;
  double thermal_ratio = 0.1;
  SigmaConvention sigma_convention = SigmaConvention::per_component;
  Backend backend = Backend::automatic;
};

struct CalibrationResult {
  double rate;
  double infidelity;
  double stderr_infidelity;
  double tolerance;
  int evaluations;
};

/// Bisection on the noise rate of the unamplified gate until
/// |1 - F - target| < 0.01 (Lindblad) or 0.02 (displacements). Trajectory
/// streams are fixed across evaluations, so the stochastic objective is a
/// deterministic function of the rate.
CalibrationResult calibrate_baseline_noise(CouplingKind coupling, NoiseKind noise, double target,
                                           const CalibrationOptions& options = {});

// --- figure runs ------------------------------------------------------------------

struct ResultRecord {
  double sweep_x;       // sigma * dt_ref or squeezing in dB
  double n_or_lambda;   // lambda2 (sigma sweeps) or N; +inf for the Trotter limit
  double mean_infidelity;
  double stderr_infidelity;
  int samples;
  double leakage_max;
  double wall_seconds;
};

struct CalibrationEntry {
  int trotter_steps;  // 0 when the rate is shared by every N
  CalibrationResult result;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<ResultRecord> records;
  std::vector<CalibrationEntry> calibrations;
  double wall_seconds = 0.0;
};

using ProgressFn = std::function<void(const ResultRecord&)>;

RunResult run_fig2(const ExperimentConfig& cfg, const ProgressFn& progress = {});
RunResult run_fig3(const ExperimentConfig& cfg, const ProgressFn& progress = {});
/// Dispatches on cfg.figure / cfg.sweep.
RunResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

}  // namespace squeezeamp
