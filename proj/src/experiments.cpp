#include "squeezeamp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "squeezeamp/symplectic.hpp"

namespace squeezeamp {

using nlohmann::json;

namespace {

template <class E, std::size_t K>
E parse_enum(std::string_view text, const std::pair<std::string_view, E> (&table)[K], const char* what) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  std::string expected;
  for (const auto& [name, value] : table) expected += (expected.empty() ? "" : ", ") + std::string(name);
  throw Error("unknown " + std::string(what) + " '" + std::string(text) + "' (expected one of: " + expected + ")");
}

constexpr std::pair<std::string_view, Figure> kFigures[] = {
    {"fig2a", Figure::fig2a}, {"fig2b", Figure::fig2b}, {"fig3a", Figure::fig3a}, {"fig3b", Figure::fig3b},
    {"fig3c", Figure::fig3c}, {"fig3d", Figure::fig3d}, {"custom", Figure::custom}};
constexpr std::pair<std::string_view, Backend> kBackends[] = {
    {"fock", Backend::fock}, {"symplectic", Backend::symplectic}, {"auto", Backend::automatic}};
constexpr std::pair<std::string_view, NoiseKind> kNoise[] = {{"displacement", NoiseKind::displacement},
                                                             {"loss", NoiseKind::loss},
                                                             {"thermal", NoiseKind::thermal},
                                                             {"dephasing", NoiseKind::dephasing}};
constexpr std::pair<std::string_view, SweepKind> kSweeps[] = {{"sigma_dt", SweepKind::sigma_dt},
                                                              {"squeezing_db", SweepKind::squeezing_db}};
constexpr std::pair<std::string_view, SigmaConvention> kConventions[] = {
    {"per_component", SigmaConvention::per_component}, {"per_amplitude", SigmaConvention::per_amplitude}};

template <class E, std::size_t K>
std::string_view enum_name(E value, const std::pair<std::string_view, E> (&table)[K]) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

bool is_fig2(Figure f) { return f == Figure::fig2a || f == Figure::fig2b; }

int default_n_max_pure(CouplingKind kind) { return kind == CouplingKind::beamsplitter ? 12 : 8; }
int default_n_max_mixed(CouplingKind kind) { return kind == CouplingKind::beamsplitter ? 7 : 6; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Reference step of the unamplified sequence; fixes sigma for a given sigma*dt.
double reference_step(const CouplingSpec& coupling, int n) {
  const int per_rep = coupling.kind == CouplingKind::beamsplitter ? 2 : 4;
  return gate_time(coupling) / (per_rep * n);
}

std::uint64_t curve_stream(std::size_t curve) { return static_cast<std::uint64_t>(curve) << 32; }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; }) == allowed.end()) {
      throw Error("unknown key '" + item.key() + "' in " + where);
    }
  }
}

}  // namespace

std::string_view to_string(Figure f) { return enum_name(f, kFigures); }
std::string_view to_string(Backend b) { return enum_name(b, kBackends); }
std::string_view to_string(NoiseKind k) { return enum_name(k, kNoise); }
std::string_view to_string(SweepKind k) { return enum_name(k, kSweeps); }
std::string_view to_string(SigmaConvention c) { return enum_name(c, kConventions); }
Figure parse_figure(std::string_view text) { return parse_enum(text, kFigures, "figure"); }
Backend parse_backend(std::string_view text) { return parse_enum(text, kBackends, "backend"); }
NoiseKind parse_noise_kind(std::string_view text) { return parse_enum(text, kNoise, "noise kind"); }
SweepKind parse_sweep_kind(std::string_view text) { return parse_enum(text, kSweeps, "sweep kind"); }
SigmaConvention parse_sigma_convention(std::string_view text) {
  return parse_enum(text, kConventions, "sigma convention");
}

ExperimentConfig default_config(Figure figure) {
  ExperimentConfig cfg;
  cfg.figure = figure;
  switch (figure) {
    case Figure::fig2a:
    case Figure::fig2b:
      cfg.coupling = figure == Figure::fig2a ? CouplingKind::beamsplitter : CouplingKind::cross_kerr;
      cfg.noise = NoiseKind::displacement;
      cfg.sweep = SweepKind::sigma_dt;
      cfg.trotter_steps = {5};
      break;
    case Figure::fig3a:
    case Figure::fig3b:
    case Figure::fig3c:
    case Figure::fig3d:
    case Figure::custom:
      cfg.coupling = (figure == Figure::fig3c || figure == Figure::fig3d) ? CouplingKind::cross_kerr
                                                                          : CouplingKind::beamsplitter;
      cfg.noise = (figure == Figure::fig3b || figure == Figure::fig3d) ? NoiseKind::loss : NoiseKind::displacement;
      cfg.sweep = SweepKind::squeezing_db;
      cfg.trotter_steps = {1, 2, 3, 5, 10};
      break;
  }
  cfg.n_max_pure = default_n_max_pure(cfg.coupling);
  cfg.n_max_mixed = default_n_max_mixed(cfg.coupling);
  return cfg;
}

void apply_ci_profile(ExperimentConfig& cfg) {
  cfg.ci = true;
  cfg.samples = std::min(cfg.samples, 100);
  cfg.sigma_points_per_decade = std::min(cfg.sigma_points_per_decade, 4);
  cfg.db_step = std::max(cfg.db_step, 2.0);
  const bool bs = cfg.coupling == CouplingKind::beamsplitter;
  cfg.n_max_pure = std::min(cfg.n_max_pure, bs ? 10 : 6);
  cfg.n_max_mixed = std::min(cfg.n_max_mixed, bs ? 6 : 5);
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.strength > 0.0) || !std::isfinite(cfg.strength)) throw Error("config: coupling strength must be > 0");
  if (cfg.samples < 1) throw Error("config: samples must be >= 1");
  if (cfg.trotter_steps.empty()) throw Error("config: trotter_steps must not be empty");
  for (int n : cfg.trotter_steps) {
    if (n < 1) throw Error("config: every Trotter step count must be >= 1");
  }
  if (cfg.n_max_pure < 1 || cfg.n_max_mixed < 1) throw Error("config: n_max must be >= 1");
  if (cfg.noise_rate && !(*cfg.noise_rate >= 0.0)) throw Error("config: noise rate must be >= 0");
  if (!(cfg.thermal_ratio >= 0.0 && cfg.thermal_ratio < 1.0)) throw Error("config: thermal_ratio must be in [0, 1)");
  if (!(cfg.target_infidelity >= 0.0 && cfg.target_infidelity < 1.0)) {
    throw Error("config: target_infidelity must be in [0, 1)");
  }
  if (cfg.sweep == SweepKind::sigma_dt) {
    if (cfg.noise != NoiseKind::displacement) throw Error("config: a sigma_dt sweep needs displacement noise");
    if (cfg.trotter_steps.size() != 1) throw Error("config: a sigma_dt sweep takes exactly one Trotter step count");
    if (cfg.lambdas.empty()) throw Error("config: lambdas must not be empty");
    for (double l : cfg.lambdas) {
      if (!(l >= 1.0)) throw Error("config: every amplification factor must be >= 1");
    }
    if (!(cfg.sigma_dt_min > 0.0) || !(cfg.sigma_dt_max >= cfg.sigma_dt_min) || cfg.sigma_points_per_decade < 1) {
      throw Error("config: sigma_dt grid needs 0 < min <= max and points_per_decade >= 1");
    }
  } else {
    if (!(cfg.db_min >= 0.0) || !(cfg.db_max >= cfg.db_min) || !(cfg.db_step > 0.0)) {
      throw Error("config: dB grid needs 0 <= min <= max and step > 0");
    }
  }
  if (cfg.backend == Backend::symplectic &&
      !(cfg.coupling == CouplingKind::beamsplitter && cfg.noise == NoiseKind::displacement)) {
    throw Error("config: the symplectic backend only covers the beamsplitter with displacement noise");
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, {"figure", "coupling", "noise", "sweep", "samples", "seed", "backend", "truncation", "output", "ci"},
             "config");
  try {
    const Figure figure = parse_figure(j.value("figure", std::string("fig2a")));
    ExperimentConfig cfg = default_config(figure);
    const bool named = figure != Figure::custom;

    if (j.contains("coupling")) {
      const json& c = j["coupling"];
      check_keys(c, {"kind", "strength"}, "coupling");
      if (c.contains("kind")) {
        const CouplingKind kind = parse_coupling_kind(c["kind"].get<std::string>());
        if (named && kind != cfg.coupling) throw Error("config: coupling kind conflicts with the figure");
        cfg.coupling = kind;
      }
      if (c.contains("strength")) cfg.strength = c["strength"].get<double>();
    }
    if (j.contains("noise")) {
      const json& n = j["noise"];
      check_keys(n, {"kind", "rate", "thermal_ratio", "sigma_convention", "target_infidelity"}, "noise");
      if (n.contains("kind")) {
        const NoiseKind kind = parse_noise_kind(n["kind"].get<std::string>());
        if (named && kind != cfg.noise) throw Error("config: noise kind conflicts with the figure");
        cfg.noise = kind;
      }
      if (n.contains("rate") && !n["rate"].is_null()) cfg.noise_rate = n["rate"].get<double>();
      if (n.contains("thermal_ratio")) cfg.thermal_ratio = n["thermal_ratio"].get<double>();
      if (n.contains("sigma_convention")) {
        cfg.sigma_convention = parse_sigma_convention(n["sigma_convention"].get<std::string>());
      }
      if (n.contains("target_infidelity")) cfg.target_infidelity = n["target_infidelity"].get<double>();
    }
    if (j.contains("sweep")) {
      const json& s = j["sweep"];
      check_keys(s, {"kind", "lambdas", "sigma_dt", "db", "trotter_steps", "trotter_limit"}, "sweep");
      if (s.contains("kind")) {
        const SweepKind kind = parse_sweep_kind(s["kind"].get<std::string>());
        if (named && kind != cfg.sweep) throw Error("config: sweep kind conflicts with the figure");
        cfg.sweep = kind;
        if (!named && kind == SweepKind::sigma_dt && !s.contains("trotter_steps")) cfg.trotter_steps = {5};
      }
      if (s.contains("lambdas")) cfg.lambdas = s["lambdas"].get<std::vector<double>>();
      if (s.contains("sigma_dt")) {
        const json& g = s["sigma_dt"];
        check_keys(g, {"min", "max", "points_per_decade"}, "sweep.sigma_dt");
        cfg.sigma_dt_min = g.value("min", cfg.sigma_dt_min);
        cfg.sigma_dt_max = g.value("max", cfg.sigma_dt_max);
        cfg.sigma_points_per_decade = g.value("points_per_decade", cfg.sigma_points_per_decade);
      }
      if (s.contains("db")) {
        const json& g = s["db"];
        check_keys(g, {"min", "max", "step"}, "sweep.db");
        cfg.db_min = g.value("min", cfg.db_min);
        cfg.db_max = g.value("max", cfg.db_max);
        cfg.db_step = g.value("step", cfg.db_step);
      }
      if (s.contains("trotter_steps")) cfg.trotter_steps = s["trotter_steps"].get<std::vector<int>>();
      if (s.contains("trotter_limit")) cfg.trotter_limit = s["trotter_limit"].get<bool>();
    }
    cfg.n_max_pure = default_n_max_pure(cfg.coupling);
    cfg.n_max_mixed = default_n_max_mixed(cfg.coupling);
    if (j.contains("truncation")) {
      const json& t = j["truncation"];
      check_keys(t, {"n_max_pure", "n_max_mixed"}, "truncation");
      cfg.n_max_pure = t.value("n_max_pure", cfg.n_max_pure);
      cfg.n_max_mixed = t.value("n_max_mixed", cfg.n_max_mixed);
    }
    if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("backend")) cfg.backend = parse_backend(j["backend"].get<std::string>());
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (j.contains("ci") && j["ci"].get<bool>()) apply_ci_profile(cfg);
    validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["figure"] = to_string(cfg.figure);
  j["coupling"] = {{"kind", to_string(cfg.coupling)}, {"strength", cfg.strength}};
  j["noise"] = {{"kind", to_string(cfg.noise)},
                {"rate", cfg.noise_rate ? json(*cfg.noise_rate) : json(nullptr)},
                {"thermal_ratio", cfg.thermal_ratio},
                {"sigma_convention", to_string(cfg.sigma_convention)},
                {"target_infidelity", cfg.target_infidelity}};
  j["sweep"] = {{"kind", to_string(cfg.sweep)},
                {"lambdas", cfg.lambdas},
                {"sigma_dt",
                 {{"min", cfg.sigma_dt_min}, {"max", cfg.sigma_dt_max}, {"points_per_decade", cfg.sigma_points_per_decade}}},
                {"db", {{"min", cfg.db_min}, {"max", cfg.db_max}, {"step", cfg.db_step}}},
                {"trotter_steps", cfg.trotter_steps},
                {"trotter_limit", cfg.trotter_limit}};
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["backend"] = to_string(cfg.backend);
  j["truncation"] = {{"n_max_pure", cfg.n_max_pure}, {"n_max_mixed", cfg.n_max_mixed}};
  j["output"] = cfg.output;
  j["ci"] = cfg.ci;
  return j.dump(2);
}

std::vector<double> sigma_dt_grid(const ExperimentConfig& cfg) {
  const double lo = std::log10(cfg.sigma_dt_min);
  const double hi = std::log10(cfg.sigma_dt_max);
  const int count = static_cast<int>(std::floor((hi - lo) * cfg.sigma_points_per_decade + 1e-9)) + 1;
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) grid.push_back(std::pow(10.0, lo + static_cast<double>(k) / cfg.sigma_points_per_decade));
  return grid;
}

std::vector<double> db_grid(const ExperimentConfig& cfg) {
  const int count = static_cast<int>(std::floor((cfg.db_max - cfg.db_min) / cfg.db_step + 1e-9)) + 1;
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) grid.push_back(cfg.db_min + k * cfg.db_step);
  return grid;
}

NoiseSpec make_noise(NoiseKind kind, double rate, double thermal_ratio, SigmaConvention convention) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw Error("make_noise: rate must be finite and >= 0");
  switch (kind) {
    case NoiseKind::displacement:
      return RandomDisplacements{convention == SigmaConvention::per_component ? rate : rate / std::sqrt(2.0)};
    case NoiseKind::loss:
      return Loss{rate, rate};
    case NoiseKind::thermal:
      return Thermal{rate, rate, thermal_ratio * rate, thermal_ratio * rate};
    case NoiseKind::dephasing:
      return Dephasing{rate, rate};
  }
  throw Error("make_noise: unknown noise kind");
}

Backend resolve_backend(Backend requested, CouplingKind coupling, NoiseKind noise) {
  const bool gaussian = coupling == CouplingKind::beamsplitter && noise == NoiseKind::displacement;
  if (requested == Backend::symplectic && !gaussian) {
    throw Error("symplectic backend only covers the beamsplitter with displacement noise");
  }
  if (requested == Backend::automatic) return gaussian ? Backend::symplectic : Backend::fock;
  return requested;
}

// --- points -----------------------------------------------------------------------

TrajectoryStats evaluate_point(const PointSpec& spec) {
  const Layout layout = Layout::two_mode(spec.n_max);
  const CouplingKind kind = spec.coupling.kind;
  const QuantumState input = gate_input_state(kind, layout);
  const QuantumState target = gate_target_state(kind, layout);
  const BangBangProtocol protocol =
      BangBangProtocol::equal_squeezing(spec.coupling, spec.r, spec.trotter_steps, spec.total_time);
  const Sequence sequence = build_sequence(protocol);

  if (is_lindblad(spec.noise)) {
    if (spec.backend == Backend::symplectic) throw Error("symplectic backend cannot propagate Lindblad noise");
    const LindbladSequenceEvolver evolver(sequence, layout, spec.noise);
    const QuantumState rho = evolver.run(input);
    return reduce_samples({{1.0 - fidelity(target, rho), truncation_leakage(rho)}});
  }

  const double sigma = std::get<RandomDisplacements>(spec.noise).sigma;
  const int samples = sigma == 0.0 ? 1 : spec.samples;
  const std::size_t segments = sequence.segments.size();
  auto run = [&](const TrajectoryFn& fn) {
    return spec.parallel ? average_trajectories(fn, spec.seed, spec.first_stream, samples)
                         : average_trajectories_serial(fn, spec.seed, spec.first_stream, samples);
  };
  auto draw = [&](RngStream& rng) {
    std::vector<DisplacementAmplitudes> amps(segments);
    for (auto& a : amps) a = sample_displacements(sigma, rng);
    return amps;
  };

  if (spec.backend == Backend::symplectic) {
    if (kind != CouplingKind::beamsplitter) throw Error("symplectic backend needs the beamsplitter coupling");
    const double dt = spec.total_time / (2.0 * spec.trotter_steps);
    const SymplecticBlock blk = build_block(spec.coupling.strength, dt, -spec.r);
    const Mat2 mn = block_power(blk, spec.trotter_steps);
    const EffectiveQuadraticHamiltonian eff = extract_effective_hamiltonian(mn, spec.total_time);
    const Vector psi = gaussian_bs_noiseless_state(eff, spec.total_time, layout);
    const double leak = truncation_leakage(QuantumState::pure(layout, psi));
    return run([&](RngStream& rng) -> TrajectorySample {
      const AccumulatedDisplacement disp = accumulate_displacements(blk, draw(rng));
      return {1.0 - displaced_fidelity(target, psi, disp), leak};
    });
  }

  const PureSequenceEvolver evolver(sequence, layout);
  return run([&](RngStream& rng) -> TrajectorySample {
    const QuantumState out = QuantumState::pure(layout, evolver.run(input.vector(), draw(rng)));
    return {1.0 - fidelity(target, out), truncation_leakage(out)};
  });
}

TrajectoryStats evaluate_trotter_limit(const CouplingSpec& coupling, const NoiseSpec& noise, double r,
                                       double total_time, int n_max) {
  const Layout layout = Layout::two_mode(n_max);
  const QuantumState rho = trotter_limit_evolution(coupling, noise, r, gate_input_state(coupling.kind, layout), total_time);
  return reduce_samples({{1.0 - fidelity(gate_target_state(coupling.kind, layout), rho), truncation_leakage(rho)}});
}

// --- calibration --------------------------------------------------------------------

CalibrationResult calibrate_baseline_noise(CouplingKind coupling, NoiseKind noise, double target,
                                           const CalibrationOptions& options) {
  if (!(target >= 0.0 && target < 1.0)) throw Error("calibrate_baseline_noise: target must be in [0, 1)");
  const CouplingSpec spec(coupling, options.strength);
  const bool stochastic = noise == NoiseKind::displacement;
  const double tol = stochastic ? 0.02 : 0.01;
  if (target == 0.0) return {0.0, 0.0, 0.0, tol, 0};

  const double t_gate = gate_time(spec);
  int evaluations = 0;
  auto objective = [&](double rate) {
    ++evaluations;
    const NoiseSpec ns = make_noise(noise, rate, options.thermal_ratio, options.sigma_convention);
    if (!stochastic) return evaluate_trotter_limit(spec, ns, 0.0, t_gate, options.n_max);
    PointSpec p;
    p.coupling = spec;
    p.r = 0.0;
    p.trotter_steps = options.trotter_steps;
    p.total_time = t_gate;
    p.noise = ns;
    p.backend = resolve_backend(options.backend, coupling, noise);
    p.n_max = options.n_max;
    p.samples = options.samples;
    p.seed = options.seed;
    p.first_stream = options.first_stream;
    return evaluate_point(p);
  };

  double lo = 0.0;
  double f_lo = 0.0;
  double hi = stochastic ? 0.1 / reference_step(spec, options.trotter_steps) : 0.5 / t_gate;
  TrajectoryStats s_hi = objective(hi);
  for (int k = 0; s_hi.mean_infidelity < target; ++k) {
    if (k == 60) throw Error("calibrate_baseline_noise: no rate reaches the target infidelity (non-bracketing)");
    lo = hi;
    f_lo = s_hi.mean_infidelity;
    hi *= 2.0;
    s_hi = objective(hi);
  }
  double f_hi = s_hi.mean_infidelity;
  if (std::abs(f_hi - target) < tol) return {hi, f_hi, s_hi.stderr_infidelity, tol, evaluations};

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const TrajectoryStats s = objective(mid);
    const double f = s.mean_infidelity;
    if (f < f_lo - 0.5 * tol || f > f_hi + 0.5 * tol) {
      throw Error("calibrate_baseline_noise: infidelity is not monotone in the rate over the bracket");
    }
    if (std::abs(f - target) < tol) return {mid, f, s.stderr_infidelity, tol, evaluations};
    if (f < target) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
      f_hi = f;
    }
  }
  throw Error("calibrate_baseline_noise: bisection did not converge");
}

// --- figures ----------------------------------------------------------------------

namespace {

struct Task {
  PointSpec point;
  bool trotter_limit;
  double sweep_x;
  double series;
};

ResultRecord run_task(const Task& task) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrajectoryStats s =
      task.trotter_limit ? evaluate_trotter_limit(task.point.coupling, task.point.noise, task.point.r,
                                                  task.point.total_time, task.point.n_max)
                         : evaluate_point(task.point);
  return {task.sweep_x, task.series, s.mean_infidelity, s.stderr_infidelity, s.samples, s.leakage_max, seconds_since(t0)};
}

// Deterministic tasks run one per thread; trajectory tasks parallelize inside.
std::vector<ResultRecord> run_tasks(std::vector<Task>& tasks, const ProgressFn& progress) {
  std::vector<ResultRecord> out(tasks.size());
  const bool by_task = std::all_of(tasks.begin(), tasks.end(),
                                   [](const Task& t) { return t.trotter_limit || is_lindblad(t.point.noise); });
  if (!by_task) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      out[i] = run_task(tasks[i]);
      if (progress) progress(out[i]);
    }
    return out;
  }
  std::string failure;
  bool failed = false;
  const long count = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (long i = 0; i < count; ++i) {
    try {
      tasks[i].point.parallel = false;
      out[i] = run_task(tasks[i]);
#pragma omp critical
      if (progress) progress(out[i]);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (!failed) failure = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw Error(failure);
  return out;
}

PointSpec base_point(const ExperimentConfig& cfg) {
  PointSpec p;
  p.coupling = CouplingSpec(cfg.coupling, cfg.strength);
  p.backend = resolve_backend(cfg.backend, cfg.coupling, cfg.noise);
  p.n_max = cfg.noise == NoiseKind::displacement ? cfg.n_max_pure : cfg.n_max_mixed;
  p.samples = cfg.samples;
  p.seed = cfg.seed;
  return p;
}

}  // namespace

RunResult run_fig2(const ExperimentConfig& cfg_in, const ProgressFn& progress) {
  ExperimentConfig cfg = cfg_in;
  if (is_fig2(cfg.figure) || cfg.figure == Figure::custom) {
    if (cfg.sweep != SweepKind::sigma_dt) throw Error("run_fig2: needs a sigma_dt sweep");
  } else {
    throw Error("run_fig2: figure must be fig2a, fig2b or a custom sigma_dt sweep");
  }
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const CouplingSpec coupling(cfg.coupling, cfg.strength);
  const int n = cfg.trotter_steps.front();
  const double dt_ref = reference_step(coupling, n);
  const std::vector<double> grid = sigma_dt_grid(cfg);

  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cfg.lambdas.size(); ++c) {
    const double lambda2 = cfg.lambdas[c];
    for (double x : grid) {
      PointSpec p = base_point(cfg);
      p.r = squeezing_for_amplification(cfg.coupling, lambda2);
      p.trotter_steps = n;
      p.total_time = gate_time(coupling) / lambda2;
      p.noise = make_noise(NoiseKind::displacement, x / dt_ref, cfg.thermal_ratio, cfg.sigma_convention);
      p.first_stream = curve_stream(c);
      tasks.push_back({p, false, x, lambda2});
    }
  }
  RunResult result;
  result.config = cfg;
  result.records = run_tasks(tasks, progress);
  result.wall_seconds = seconds_since(t0);
  return result;
}

RunResult run_fig3(const ExperimentConfig& cfg_in, const ProgressFn& progress) {
  ExperimentConfig cfg = cfg_in;
  if (is_fig2(cfg.figure)) throw Error("run_fig3: figure must be fig3a..fig3d or a custom dB sweep");
  if (cfg.sweep != SweepKind::squeezing_db) throw Error("run_fig3: needs a squeezing_db sweep");
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const CouplingSpec coupling(cfg.coupling, cfg.strength);
  const bool stochastic = cfg.noise == NoiseKind::displacement;
  const std::vector<double> grid = db_grid(cfg);
  RunResult result;

  CalibrationOptions opt;
  opt.strength = cfg.strength;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.n_max = stochastic ? cfg.n_max_pure : cfg.n_max_mixed;
  opt.thermal_ratio = cfg.thermal_ratio;
  opt.sigma_convention = cfg.sigma_convention;
  opt.backend = cfg.backend;

  // Displacement noise depends on N even at r = 0, so each curve gets its own rate.
  std::vector<double> rates(cfg.trotter_steps.size());
  for (std::size_t c = 0; c < cfg.trotter_steps.size(); ++c) {
    if (cfg.noise_rate) {
      rates[c] = *cfg.noise_rate;
      continue;
    }
    if (!stochastic && c > 0) {
      rates[c] = rates[0];
      continue;
    }
    opt.trotter_steps = cfg.trotter_steps[c];
    opt.first_stream = curve_stream(c);
    const CalibrationResult cal = calibrate_baseline_noise(cfg.coupling, cfg.noise, cfg.target_infidelity, opt);
    rates[c] = cal.rate;
    result.calibrations.push_back({stochastic ? cfg.trotter_steps[c] : 0, cal});
  }

  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cfg.trotter_steps.size(); ++c) {
    for (double db : grid) {
      PointSpec p = base_point(cfg);
      p.r = squeezing_from_db(db);
      p.trotter_steps = cfg.trotter_steps[c];
      p.total_time = gate_time(coupling) / amplification_factor(cfg.coupling, p.r, p.r);
      p.noise = make_noise(cfg.noise, rates[c], cfg.thermal_ratio, cfg.sigma_convention);
      p.first_stream = curve_stream(c);
      tasks.push_back({p, false, db, static_cast<double>(cfg.trotter_steps[c])});
    }
  }
  if (!stochastic && cfg.trotter_limit) {
    for (double db : grid) {
      PointSpec p = base_point(cfg);
      p.r = squeezing_from_db(db);
      p.total_time = gate_time(coupling) / amplification_factor(cfg.coupling, p.r, p.r);
      p.noise = make_noise(cfg.noise, rates[0], cfg.thermal_ratio, cfg.sigma_convention);
      tasks.push_back({p, true, db, std::numeric_limits<double>::infinity()});
    }
  }
  result.config = cfg;
  result.records = run_tasks(tasks, progress);
  result.wall_seconds = seconds_since(t0);
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  return cfg.sweep == SweepKind::sigma_dt ? run_fig2(cfg, progress) : run_fig3(cfg, progress);
}

}  // namespace squeezeamp
