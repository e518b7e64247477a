#include <benchmark/benchmark.h>

#include "phgame/dynamics.hpp"
#include "phgame/game.hpp"
#include "phgame/scenario.hpp"
#include "phgame/simulate.hpp"

using namespace phgame;

namespace {

struct Fixture {
    Scenario scenario = bundled_scenario("paper_sec5");
    Network net = build_network(scenario);
    NetworkState state = initial_state(scenario, net);
};

const Fixture& nine_agents() {
    static const Fixture f;
    return f;
}

void BM_ClosedLoopRhs(benchmark::State& st) {
    const auto& f = nine_agents();
    for (auto _ : st) {
        benchmark::DoNotOptimize(closed_loop_rhs(f.net, f.state));
    }
}
BENCHMARK(BM_ClosedLoopRhs);

void BM_Hamiltonian(benchmark::State& st) {
    const auto& f = nine_agents();
    for (auto _ : st) {
        benchmark::DoNotOptimize(hamiltonian(f.net, f.state));
    }
}
BENCHMARK(BM_Hamiltonian);

void BM_PseudoGradient(benchmark::State& st) {
    const auto& f = nine_agents();
    const PotentialGame game = build_game(f.scenario, f.net);
    const Vector x = f.state.collective();
    for (auto _ : st) {
        benchmark::DoNotOptimize(pseudo_gradient(game, x));
    }
}
BENCHMARK(BM_PseudoGradient);

void BM_PseudoGradientFactored(benchmark::State& st) {
    const auto& f = nine_agents();
    const Vector x = f.state.collective();
    for (auto _ : st) {
        benchmark::DoNotOptimize(pseudo_gradient_factored(f.net, x));
    }
}
BENCHMARK(BM_PseudoGradientFactored);

void BM_SimulateToEquilibrium(benchmark::State& st) {
    const auto& f = nine_agents();
    for (auto _ : st) {
        benchmark::DoNotOptimize(simulate(f.net, f.state, f.scenario.simulation));
    }
}
BENCHMARK(BM_SimulateToEquilibrium)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
