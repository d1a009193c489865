#include <benchmark/benchmark.h>

#include <memory>

#include "qcons/engine.hpp"
#include "qcons/experiment.hpp"
#include "qcons/rng.hpp"

namespace {

using namespace qcons;

struct Instance {
  std::shared_ptr<const Network> network;
  std::vector<Integer> values;
};

Instance make_instance(std::size_t n, double p) {
  const Digraph g = generate_random_strongly_connected(n, p, 17);
  Instance in{std::make_shared<const Network>(
                  Network{g, assign_priorities(g, PriorityStrategy::seeded_shuffle, 18)}),
              {}};
  Rng rng(19);
  in.values = draw_values(n, 0, 20, std::nullopt, rng);
  return in;
}

double density(std::size_t n) { return n <= 20 ? 0.15 : 4.0 / static_cast<double>(n); }

void BM_RunToQuiescence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance in = make_instance(n, density(n));
  RunOptions opts;
  opts.audit = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_until_quiescent(start_run(in.network, in.values), opts));
  }
}
BENCHMARK(BM_RunToQuiescence)->ArgsProduct({{20, 50, 100}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_FirstRounds(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Instance in = make_instance(n, density(n));
  for (auto _ : state) {
    SimState sim = start_run(in.network, in.values);
    for (int k = 0; k < 5; ++k) {
      sim = step(std::move(sim));
    }
    benchmark::DoNotOptimize(sim);
  }
}
BENCHMARK(BM_FirstRounds)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_Batch(benchmark::State& state) {
  ExperimentConfig c;
  c.mode = Mode::batch;
  c.runs = 100;
  c.value_sum = 214;
  c.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(c));
  }
}
BENCHMARK(BM_Batch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
