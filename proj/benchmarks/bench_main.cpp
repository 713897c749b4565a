#include <benchmark/benchmark.h>

#include <cmath>

#include "stirred/coupling.hpp"
#include "stirred/flow_geometry.hpp"
#include "stirred/ips.hpp"
#include "stirred/pde.hpp"
#include "stirred/profile.hpp"

using namespace stirred;

// One event of the exact simulator on a d-dimensional torus.
static void BM_SimulatorStep(benchmark::State& state) {
    ips::IpsParams p;
    p.lambda = 2.0;
    p.rule = ips::BirthRule::G1;
    p.stirring = ips::Stirring::LilyPad;
    p.eps = 0.5;
    p.dim = static_cast<int>(state.range(0));
    p.torus_side = static_cast<int>(state.range(1));
    const ips::Torus torus(p.dim, p.torus_side);
    ips::Simulator sim(p, ips::full_config(torus), 1);
    for (auto _ : state) {
        if (sim.step(1e300) != ips::Simulator::StepResult::Event) {
            state.PauseTiming();
            sim.reset(ips::full_config(torus), 1, state.iterations());
            state.ResumeTiming();
        }
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep)->Args({1, 1024})->Args({2, 64})->Args({2, 256});

static void BM_CoupledRun(benchmark::State& state) {
    ips::IpsParams lo;
    lo.lambda = 1.0;
    lo.rule = ips::BirthRule::G2;
    lo.dim = 1;
    lo.torus_side = 64;
    ips::IpsParams hi = lo;
    hi.rule = ips::BirthRule::G1;
    const auto full = ips::full_config(ips::Torus(1, 64));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ips::run_coupled({full, full, 0.0, ++seed, 0}, lo, hi, 1.0));
}
BENCHMARK(BM_CoupledRun);

// One explicit reaction-diffusion step.
static void BM_StepRd(benchmark::State& state) {
    pde::ReactionSpec spec;
    spec.system = state.range(0) == 0 ? pde::System::Sys11 : pde::System::Sys9;
    spec.lambda = 1.5;
    pde::Grid g;
    g.nx = static_cast<int>(state.range(1));
    g.dx = 0.2;
    auto f = pde::make_field(spec, g);
    for (auto& comp : f.data)
        for (int i = 0; i < g.nx; ++i) comp[i] = 0.2 + 0.05 * std::sin(0.01 * i);
    if (spec.system == pde::System::Sys9)
        for (int i = 0; i < g.nx; ++i) f.data[0][i] = 1.0 - f.data[1][i] - f.data[2][i] - f.data[3][i];
    pde::RdStepper st(spec, g, 0.1 * pde::stability_limit(g.dx, 1));
    for (auto _ : state) st.step(f);
    state.SetItemsProcessed(state.iterations() * g.nx);
}
BENCHMARK(BM_StepRd)->Args({0, 1201})->Args({0, 10001})->Args({1, 1201});

static void BM_HeatStep(benchmark::State& state) {
    const double l = 0.31, dx = l / 500, s = 1e-3;
    std::vector<double> samples;
    for (double x = -2.0; x <= 2.0; x += dx) samples.push_back(cstar::bump_f0(x, 1.0, l));
    for (auto _ : state) benchmark::DoNotOptimize(cstar::heat_step(samples, s, dx));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(samples.size()));
}
BENCHMARK(BM_HeatStep);

static void BM_VerifyDomination(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(cstar::verify_domination(8800.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_VerifyDomination)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_FlowXi(benchmark::State& state) {
    const cstar::FlowGeometry g;
    for (auto _ : state) benchmark::DoNotOptimize(cstar::flow_xi(g.s0(), {0.55, 0.5}, 8800.0, g));
}
BENCHMARK(BM_FlowXi);
BENCHMARK_MAIN();
