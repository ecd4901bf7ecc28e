#include <doctest.h>

#include <cmath>
#include <string>

#include "squeezeamp/experiments.hpp"

using namespace squeezeamp;

namespace {

PointSpec bs_point(double sigma_dt, double r, int samples, Backend backend, int n_max) {
  PointSpec p;
  p.coupling = CouplingSpec::beamsplitter(1.0);
  p.r = r;
  p.trotter_steps = 5;
  p.total_time = gate_time(p.coupling) / amplification_factor(CouplingKind::beamsplitter, r, r);
  const double dt_ref = gate_time(p.coupling) / 10.0;
  p.noise = RandomDisplacements{sigma_dt / dt_ref};
  p.backend = backend;
  p.n_max = n_max;
  p.samples = samples;
  p.seed = 3;
  return p;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("enum names round-trip") {
  for (Figure f : {Figure::fig2a, Figure::fig2b, Figure::fig3a, Figure::fig3b, Figure::fig3c, Figure::fig3d, Figure::custom}) {
    CHECK(parse_figure(to_string(f)) == f);
  }
  for (Backend b : {Backend::fock, Backend::symplectic, Backend::automatic}) CHECK(parse_backend(to_string(b)) == b);
  for (NoiseKind k : {NoiseKind::displacement, NoiseKind::loss, NoiseKind::thermal, NoiseKind::dephasing}) {
    CHECK(parse_noise_kind(to_string(k)) == k);
  }
  CHECK(parse_backend("auto") == Backend::automatic);
  CHECK_THROWS_AS(parse_figure("fig4"), Error);
  CHECK_THROWS_AS(parse_noise_kind("heat"), Error);
}

TEST_CASE("figure defaults") {
  const ExperimentConfig a = default_config(Figure::fig2a);
  CHECK(a.coupling == CouplingKind::beamsplitter);
  CHECK(a.trotter_steps == std::vector<int>{5});
  CHECK(a.samples == 1000);
  CHECK(a.lambdas == std::vector<double>{1, 2, 5, 10, 20});
  CHECK(default_config(Figure::fig2b).coupling == CouplingKind::cross_kerr);
  const ExperimentConfig d = default_config(Figure::fig3d);
  CHECK(d.coupling == CouplingKind::cross_kerr);
  CHECK(d.noise == NoiseKind::loss);
  CHECK(d.sweep == SweepKind::squeezing_db);
  CHECK(d.trotter_steps == std::vector<int>{1, 2, 3, 5, 10});
  CHECK(default_config(Figure::fig3c).noise == NoiseKind::displacement);
}

TEST_CASE("sweep grids") {
  const ExperimentConfig a = default_config(Figure::fig2a);
  const std::vector<double> g = sigma_dt_grid(a);
  REQUIRE(g.size() == 61);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(g[20] == doctest::Approx(1e-2));
  const std::vector<double> db = db_grid(default_config(Figure::fig3a));
  CHECK(db.size() == 17);
  CHECK(db.back() == 16.0);

  ExperimentConfig ci = default_config(Figure::fig2a);
  apply_ci_profile(ci);
  CHECK(ci.ci);
  CHECK(ci.samples == 100);
  CHECK(sigma_dt_grid(ci).size() == 13);
  ExperimentConfig ci3 = default_config(Figure::fig3c);
  apply_ci_profile(ci3);
  CHECK(db_grid(ci3).size() == 9);
  CHECK(ci3.n_max_pure <= 6);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"({
    "figure": "fig3b",
    "noise": {"kind": "loss", "rate": 0.2},
    "sweep": {"db": {"min": 0, "max": 8, "step": 4}, "trotter_steps": [1, 10]},
    "samples": 50, "seed": 9, "backend": "fock",
    "truncation": {"n_max_mixed": 5}, "output": "somewhere"
  })");
  CHECK(c.figure == Figure::fig3b);
  CHECK(c.noise_rate.value() == 0.2);
  CHECK(db_grid(c).size() == 3);
  CHECK(c.trotter_steps == std::vector<int>{1, 10});
  CHECK(c.samples == 50);
  CHECK(c.seed == 9);
  CHECK(c.backend == Backend::fock);
  CHECK(c.n_max_mixed == 5);
  CHECK(c.n_max_pure == 12);
  CHECK(c.output == "somewhere");

  CHECK_THROWS_AS(parse_config(R"({"figure": "fig2a", "sampels": 3})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"figure": "fig2a", "noise": {"sigma": 3}})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"figure": "fig2a", "coupling": {"kind": "ck"}})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"figure": "fig3b", "noise": {"kind": "dephasing"}})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"figure": "fig3a", "samples": 0})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"figure": "fig3b", "backend": "symplectic"})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"figure": "fig3a", "samples": "many"})"), Error);
  CHECK_THROWS_AS(parse_config("{not json"), Error);

  const ExperimentConfig custom = parse_config(R"({
    "figure": "custom", "coupling": {"kind": "ck", "strength": 2.0},
    "noise": {"kind": "dephasing"}, "ci": true
  })");
  CHECK(custom.coupling == CouplingKind::cross_kerr);
  CHECK(custom.strength == 2.0);
  CHECK(custom.noise == NoiseKind::dephasing);
  CHECK(custom.ci);
  CHECK(custom.samples == 100);
}

TEST_CASE("canonical JSON round-trips") {
  ExperimentConfig c = default_config(Figure::fig3d);
  c.noise_rate = 0.125;
  c.seed = 1234567890123ULL;
  c.trotter_steps = {2, 4};
  const std::string text = config_to_json(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.seed == c.seed);
  CHECK(back.noise_rate.value() == 0.125);
}

TEST_CASE("noise construction") {
  CHECK(std::get<RandomDisplacements>(make_noise(NoiseKind::displacement, 0.4)).sigma == 0.4);
  CHECK(std::get<RandomDisplacements>(make_noise(NoiseKind::displacement, 0.4, 0.1, SigmaConvention::per_amplitude)).sigma ==
        doctest::Approx(0.4 / std::sqrt(2.0)));
  const Thermal th = std::get<Thermal>(make_noise(NoiseKind::thermal, 0.5, 0.2));
  CHECK(th.eta_c_a == 0.5);
  CHECK(th.eta_h_b == doctest::Approx(0.1));
  CHECK(std::get<Loss>(make_noise(NoiseKind::loss, 0.3)).eta_b == 0.3);
  CHECK(std::get<Dephasing>(make_noise(NoiseKind::dephasing, 0.3)).gamma_a == 0.3);
  CHECK_THROWS_AS(make_noise(NoiseKind::loss, -1.0), Error);
}

TEST_CASE("backend resolution") {
  CHECK(resolve_backend(Backend::automatic, CouplingKind::beamsplitter, NoiseKind::displacement) == Backend::symplectic);
  CHECK(resolve_backend(Backend::automatic, CouplingKind::cross_kerr, NoiseKind::displacement) == Backend::fock);
  CHECK(resolve_backend(Backend::automatic, CouplingKind::beamsplitter, NoiseKind::loss) == Backend::fock);
  CHECK(resolve_backend(Backend::fock, CouplingKind::beamsplitter, NoiseKind::displacement) == Backend::fock);
  CHECK_THROWS_AS(resolve_backend(Backend::symplectic, CouplingKind::cross_kerr, NoiseKind::displacement), Error);
  CHECK_THROWS_AS(resolve_backend(Backend::symplectic, CouplingKind::beamsplitter, NoiseKind::thermal), Error);
}

TEST_CASE("noiseless unamplified point is the ideal gate") {
  for (CouplingKind kind : {CouplingKind::beamsplitter, CouplingKind::cross_kerr}) {
    for (int n : {1, 5}) {
      PointSpec p;
      p.coupling = CouplingSpec(kind, 1.0);
      p.trotter_steps = n;
      p.total_time = gate_time(p.coupling);
      p.noise = RandomDisplacements{0.0};
      p.n_max = 4;
      p.samples = 50;
      const TrajectoryStats s = evaluate_point(p);
      CHECK(s.mean_infidelity < 1e-9);
      CHECK(s.samples == 1);
    }
  }
}

TEST_CASE("automatic backend matches the Fock backend") {
  for (double x : {0.003, 0.02}) {
    const TrajectoryStats fock = evaluate_point(bs_point(x, 0.5, 20, Backend::fock, 12));
    const TrajectoryStats gauss = evaluate_point(bs_point(x, 0.5, 20, Backend::automatic, 12));
    CHECK(std::abs(fock.mean_infidelity - gauss.mean_infidelity) < 1e-4);
  }
}

TEST_CASE("standard error falls as one over root samples") {
  const TrajectoryStats small = evaluate_point(bs_point(0.05, 0.3, 400, Backend::symplectic, 10));
  const TrajectoryStats large = evaluate_point(bs_point(0.05, 0.3, 1600, Backend::symplectic, 10));
  CHECK(large.stderr_infidelity / small.stderr_infidelity == doctest::Approx(0.5).epsilon(0.25));
  CHECK(large.samples == 1600);
  CHECK(small.mean_infidelity >= 0.0);
  CHECK(small.mean_infidelity <= 1.0);
}

TEST_CASE("Lindblad points are deterministic single runs") {
  PointSpec p;
  p.coupling = CouplingSpec::cross_kerr(1.0);
  p.r = 0.3;
  p.trotter_steps = 2;
  p.total_time = gate_time(p.coupling) / amplification_factor(CouplingKind::cross_kerr, 0.3, 0.3);
  p.noise = Loss{0.05, 0.05};
  p.n_max = 4;
  p.samples = 100;
  const TrajectoryStats s = evaluate_point(p);
  CHECK(s.samples == 1);
  CHECK(s.stderr_infidelity == 0.0);
  CHECK(s.mean_infidelity > 0.0);
  p.backend = Backend::symplectic;
  CHECK_THROWS_AS(evaluate_point(p), Error);
}

TEST_CASE("baseline calibration") {
  CalibrationOptions opt;
  opt.n_max = 3;
  const CalibrationResult zero = calibrate_baseline_noise(CouplingKind::beamsplitter, NoiseKind::loss, 0.0, opt);
  CHECK(zero.rate == 0.0);

  const CalibrationResult loss = calibrate_baseline_noise(CouplingKind::beamsplitter, NoiseKind::loss, 0.5, opt);
  CHECK(loss.tolerance == 0.01);
  CHECK(std::abs(loss.infidelity - 0.5) < 0.01);
  const TrajectoryStats again =
      evaluate_trotter_limit(CouplingSpec::beamsplitter(1.0), make_noise(NoiseKind::loss, loss.rate), 0.0, M_PI / 4, 3);
  CHECK(std::abs(again.mean_infidelity - 0.5) < 0.01);

  CalibrationOptions st;
  st.trotter_steps = 5;
  st.samples = 200;
  st.n_max = 8;
  const CalibrationResult disp = calibrate_baseline_noise(CouplingKind::beamsplitter, NoiseKind::displacement, 0.5, st);
  CHECK(disp.tolerance == 0.02);
  CHECK(std::abs(disp.infidelity - 0.5) < 0.02);
  PointSpec p;
  p.coupling = CouplingSpec::beamsplitter(1.0);
  p.trotter_steps = 5;
  p.total_time = M_PI / 4;
  p.noise = make_noise(NoiseKind::displacement, disp.rate);
  p.backend = Backend::symplectic;
  p.n_max = 8;
  p.samples = 200;
  p.seed = st.seed;
  CHECK(std::abs(evaluate_point(p).mean_infidelity - 0.5) < 0.02);

  CHECK_THROWS_AS(calibrate_baseline_noise(CouplingKind::beamsplitter, NoiseKind::loss, 1.0, opt), Error);
}

TEST_CASE("figure runs are deterministic") {
  ExperimentConfig c = default_config(Figure::fig2a);
  c.lambdas = {1.0, 20.0};
  c.sigma_dt_min = 0.01;
  c.sigma_dt_max = 0.1;
  c.sigma_points_per_decade = 1;
  c.samples = 20;
  c.n_max_pure = 8;
  const RunResult x = run_experiment(c);
  const RunResult y = run_experiment(c);
  REQUIRE(x.records.size() == 4);
  for (std::size_t i = 0; i < x.records.size(); ++i) {
    CHECK(x.records[i].mean_infidelity == y.records[i].mean_infidelity);
    CHECK(x.records[i].stderr_infidelity == y.records[i].stderr_infidelity);
  }
  CHECK(x.records[0].n_or_lambda == 1.0);
  CHECK(x.records[3].n_or_lambda == 20.0);
  CHECK(x.records[1].sweep_x == doctest::Approx(0.1));
  c.seed = 2;
  CHECK(run_experiment(c).records[1].mean_infidelity != x.records[1].mean_infidelity);
  CHECK_THROWS_AS(run_fig3(c), Error);
}

TEST_CASE("Lindblad figure run adds the Trotter limit") {
  ExperimentConfig c = default_config(Figure::fig3b);
  c.trotter_steps = {1, 2};
  c.db_max = 4.0;
  c.db_step = 4.0;
  c.n_max_mixed = 3;
  const RunResult run = run_experiment(c);
  REQUIRE(run.calibrations.size() == 1);
  CHECK(run.calibrations[0].trotter_steps == 0);
  CHECK(run.records.size() == 6);
  int limit = 0;
  for (const ResultRecord& r : run.records) {
    if (std::isinf(r.n_or_lambda)) ++limit;
    if (r.sweep_x == 0.0) CHECK(std::abs(r.mean_infidelity - 0.5) < 0.05);
  }
  CHECK(limit == 2);
}

}  // TEST_SUITE
