// Serial vs OpenMP trajectory averaging on a fig3c-like point (cross-Kerr,
// displacement noise). Thread count follows SQUEEZEAMP_THREADS.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "squeezeamp/kernels.hpp"
#include "squeezeamp/open_systems.hpp"
#include "squeezeamp/protocols.hpp"

using namespace squeezeamp;

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel trajectory averaging"};
  int samples = 200;
  int reps = 3;
  int n_max = 8;
  int trotter = 10;
  double db = 8.0;
  app.add_option("--samples", samples, "Trajectories per run");
  app.add_option("--reps", reps, "Timed repetitions (best is reported)");
  app.add_option("--n-max", n_max, "Fock truncation per mode");
  app.add_option("--trotter", trotter, "Trotter steps N");
  app.add_option("--db", db, "Squeezing in dB");
  CLI11_PARSE(app, argc, argv);

  const CouplingSpec c = CouplingSpec::cross_kerr(1.0);
  const Layout lay = Layout::two_mode(n_max);
  const double r = squeezing_from_db(db);
  const double t = gate_time(c) / amplification_factor(c.kind, r, r);
  const PureSequenceEvolver ev(build_sequence(BangBangProtocol::equal_squeezing(c, r, trotter, t)), lay);
  const QuantumState in = gate_input_state(c.kind, lay);
  const QuantumState target = gate_target_state(c.kind, lay);
  const double sigma = 0.02 / (t / (4.0 * trotter));

  const TrajectoryFn fn = [&](RngStream& rng) {
    std::vector<DisplacementAmplitudes> amps;
    amps.reserve(ev.segment_count());
    for (std::size_t s = 0; s < ev.segment_count(); ++s) amps.push_back(sample_displacements(sigma, rng));
    const QuantumState out = QuantumState::pure(lay, ev.run(in.vector(), amps));
    return TrajectorySample{1.0 - fidelity(target, out), truncation_leakage(out)};
  };

  auto best_of = [&](auto&& run) {
    double best = 1e300;
    TrajectoryStats stats{};
    for (int k = 0; k < reps; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      stats = run();
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return std::make_pair(best, stats);
  };

  const auto [ts, ss] = best_of([&] { return average_trajectories_serial(fn, 1, 0, samples); });
  const auto [tp, sp] = best_of([&] { return average_trajectories(fn, 1, 0, samples); });
  const bool same = std::memcmp(&ss.mean_infidelity, &sp.mean_infidelity, sizeof(double)) == 0 &&
                    std::memcmp(&ss.stderr_infidelity, &sp.stderr_infidelity, sizeof(double)) == 0;

  std::printf("threads=%d samples=%d n_max=%d N=%d dB=%.1f\n", worker_threads(), samples, n_max, trotter, db);
  std::printf("serial   %.3f s  (%.2f ms/trajectory)\n", ts, 1e3 * ts / samples);
  std::printf("parallel %.3f s  (%.2f ms/trajectory)  speedup %.2fx\n", tp, 1e3 * tp / samples, ts / tp);
  std::printf("mean 1-F %.6g, results %s\n", ss.mean_infidelity, same ? "bitwise identical" : "DIFFER");
  return same ? 0 : 1;
}
