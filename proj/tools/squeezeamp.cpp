// squeezeamp: figure sweeps and baseline-noise calibration from the command line.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "squeezeamp/experiments.hpp"
#include "squeezeamp/report.hpp"

using namespace squeezeamp;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunArgs {
  std::string config;
  std::optional<std::string> figure;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<std::string> out;
  std::optional<std::string> backend;
  bool ci = false;
  bool quiet = false;
};

int do_run(const RunArgs& a) {
  nlohmann::json j = nlohmann::json::object();
  if (!a.config.empty()) {
    try {
      j = nlohmann::json::parse(read_text(a.config));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("config: invalid JSON: " + std::string(e.what()));
    }
  }
  if (a.figure) j["figure"] = *a.figure;
  if (a.ci) j["ci"] = true;
  ExperimentConfig cfg = parse_config(j.dump());
  if (a.samples) cfg.samples = *a.samples;
  if (a.seed) cfg.seed = *a.seed;
  if (a.backend) cfg.backend = parse_backend(*a.backend);
  if (a.out) cfg.output = *a.out;
  validate(cfg);

  if (!a.quiet) {
    std::fprintf(stderr, "squeezeamp %s: %s, %s + %s, backend %s, %d samples, seed %llu\n", SQUEEZEAMP_VERSION,
                 std::string(to_string(cfg.figure)).c_str(), std::string(to_string(cfg.coupling)).c_str(),
                 std::string(to_string(cfg.noise)).c_str(),
                 std::string(to_string(resolve_backend(cfg.backend, cfg.coupling, cfg.noise))).c_str(), cfg.samples,
                 static_cast<unsigned long long>(cfg.seed));
  }
  ProgressFn progress;
  if (!a.quiet) {
    progress = [](const ResultRecord& r) {
      std::fprintf(stderr, "  x=%-10.4g series=%-6g 1-F=%.4e +- %.1e leak=%.1e (%.2fs)\n", r.sweep_x, r.n_or_lambda,
                   r.mean_infidelity, r.stderr_infidelity, r.leakage_max, r.wall_seconds);
    };
  }
  const RunResult run = run_experiment(cfg, progress);
  if (!a.quiet) {
    for (const CalibrationEntry& c : run.calibrations) {
      std::fprintf(stderr, "  calibrated rate %.6g (N=%d): 1-F=%.4f\n", c.result.rate, c.trotter_steps,
                   c.result.infidelity);
    }
  }
  const OutputPaths p = write_outputs(run, cfg.output);
  std::printf("%s\n%s\n%s\n", p.csv.string().c_str(), p.svg.string().c_str(), p.manifest.string().c_str());
  return 0;
}

struct CalibrateArgs {
  std::string coupling = "bs";
  std::string noise = "loss";
  double target = 0.5;
  double strength = 1.0;
  int steps = 1;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::optional<int> n_max;
  double thermal_ratio = 0.1;
  std::string backend = "auto";
};

int do_calibrate(const CalibrateArgs& a) {
  const CouplingKind coupling = parse_coupling_kind(a.coupling);
  const NoiseKind noise = parse_noise_kind(a.noise == "disp" ? "displacement" : a.noise);
  CalibrationOptions opt;
  opt.strength = a.strength;
  opt.trotter_steps = a.steps;
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.thermal_ratio = a.thermal_ratio;
  opt.backend = parse_backend(a.backend);
  opt.n_max = a.n_max ? *a.n_max
                      : (noise == NoiseKind::displacement ? (coupling == CouplingKind::beamsplitter ? 12 : 8)
                                                          : (coupling == CouplingKind::beamsplitter ? 7 : 6));
  const CalibrationResult r = calibrate_baseline_noise(coupling, noise, a.target, opt);
  nlohmann::json j = {{"coupling", to_string(coupling)},
                      {"noise", to_string(noise)},
                      {"target", a.target},
                      {"rate", r.rate},
                      {"infidelity", r.infidelity},
                      {"stderr", r.stderr_infidelity},
                      {"tolerance", r.tolerance},
                      {"evaluations", r.evaluations},
                      {"n_max", opt.n_max}};
  if (noise == NoiseKind::displacement) {
    j["trotter_steps"] = a.steps;
    j["samples"] = a.samples;
    j["seed"] = a.seed;
  }
  if (noise == NoiseKind::thermal) j["thermal_ratio"] = a.thermal_ratio;
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian amplification of two-mode bosonic gates: figure sweeps and noise calibration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SQUEEZEAMP_VERSION));

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a figure sweep and write CSV, SVG and manifest");
  run_cmd->add_option("--config", run.config, "JSON configuration file");
  run_cmd->add_option("--figure", run.figure, "fig2a|fig2b|fig3a|fig3b|fig3c|fig3d|custom");
  run_cmd->add_option("--seed", run.seed, "RNG seed (u64)");
  run_cmd->add_option("--samples", run.samples, "Trajectories per point")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--backend", run.backend, "fock|symplectic|auto");
  run_cmd->add_flag("--ci", run.ci, "Reduced grids and samples");
  run_cmd->add_flag("-q,--quiet", run.quiet, "No progress output");

  CalibrateArgs cal;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "Noise rate giving the target infidelity without amplification");
  cal_cmd->add_option("--coupling", cal.coupling, "bs|ck")->required();
  cal_cmd->add_option("--noise", cal.noise, "loss|dephasing|thermal|displacement")->required();
  cal_cmd->add_option("--target", cal.target, "Target infidelity")->capture_default_str();
  cal_cmd->add_option("--strength", cal.strength, "g or chi")->capture_default_str();
  cal_cmd->add_option("--steps", cal.steps, "Trotter steps N (displacement noise)")->capture_default_str();
  cal_cmd->add_option("--samples", cal.samples, "Trajectories per evaluation")->capture_default_str();
  cal_cmd->add_option("--seed", cal.seed, "RNG seed")->capture_default_str();
  cal_cmd->add_option("--n-max", cal.n_max, "Fock truncation per mode");
  cal_cmd->add_option("--thermal-ratio", cal.thermal_ratio, "eta_h / eta_c")->capture_default_str();
  cal_cmd->add_option("--backend", cal.backend, "fock|symplectic|auto")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return do_run(run);
    return do_calibrate(cal);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "squeezeamp: error: %s\n", e.what());
    return 1;
  }
}
