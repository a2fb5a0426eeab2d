// Serial vs OpenMP throughput comparison for the three data-parallel kernels:
// SAC batch updates, benchmark episode batches, and k-path planning.
#include <chrono>
#include <iostream>

#include "hylear/parallel.hpp"
#include "hylear/policies.hpp"
#include "hylear/sac.hpp"

using namespace hylear;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<Transition> synthetic_batch(const SacParams& sp, int n, Rng& rng) {
  std::vector<Transition> out;
  for (int i = 0; i < n; ++i) {
    auto o = std::make_shared<Observation>();
    o->hw = sp.obs_cells;
    o->grid.resize(static_cast<size_t>(6) * sp.obs_cells * sp.obs_cells);
    for (auto& g : o->grid) g = static_cast<uint8_t>(rng.uniform_int(256));
    o->scalars = {rng.uniform(), rng.uniform(), 0, 1, 0, 0};
    auto o1 = std::make_shared<Observation>(*o);
    out.push_back(Transition{o, static_cast<SpeedAction>(rng.uniform_int(4)),
                             rng.uniform(-1.0, 1.0), o1, false});
  }
  return out;
}

void bench_sac_update(int threads, int iters) {
  SacParams sp;
  SacState st = make_sac_state(sp, 7);
  Rng rng(11);
  const auto data = synthetic_batch(sp, sp.batch_size, rng);
  std::vector<const Transition*> batch;
  for (const auto& t : data) batch.push_back(&t);

  sac_update(st, batch, sp, threads);  // warm up
  const double t0 = now_ms();
  for (int i = 0; i < iters; ++i) sac_update(st, batch, sp, threads);
  const double dt = (now_ms() - t0) / iters;
  std::cout << "sac_update threads=" << threads << ": " << dt << " ms/step\n";
}

void bench_episodes(int threads, int episodes) {
  Config cfg;
  const auto fams = builtin_toy_families();
  const auto scenarios = generate_scenarios(fams, 3);
  cfg.planner.max_expansions = 2000;

  std::vector<EpisodeTrace> traces(episodes);
  const double t0 = now_ms();
  parallel_for(threads, threads, [&](int64_t slot) {
    PlannerOnlyPolicy policy(cfg);
    for (int e = static_cast<int>(slot); e < episodes; e += threads) {
      EpisodeOptions opts;
      opts.wall_timing = false;
      traces[e] = run_episode(scenarios[e % scenarios.size()], policy, cfg.world, opts);
    }
  });
  const double dt = now_ms() - t0;
  std::cout << "episodes threads=" << threads << ": " << dt / episodes << " ms/episode\n";
}

}  // namespace

int main(int argc, char** argv) {
  int iters = argc > 1 ? std::atoi(argv[1]) : 5;
  std::cout << "hardware threads: " << hardware_threads() << "\n";
  bench_sac_update(1, iters);
  bench_sac_update(hardware_threads(), iters);
  bench_episodes(1, 4);
  bench_episodes(hardware_threads(), 4);
  return 0;
}
