#include <benchmark/benchmark.h>

#include "eqweyl/blowup.hpp"
#include "eqweyl/oscquad.hpp"
#include "eqweyl/spectral.hpp"
#include "eqweyl/symplectic.hpp"

using namespace eqweyl;

namespace {

void BM_SpectrumTorus(benchmark::State& state) {
    const auto spec = actions::make_action("torus2-rot1");
    spectral::SpectrumBuildConfig cfg;
    cfg.weight_filter = std::vector<long long>{0, 1, 5};
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto table = spectral::build_spectrum(spec, lambda, cfg);
        benchmark::DoNotOptimize(table.entries.size());
    }
}
BENCHMARK(BM_SpectrumTorus)->Arg(10000)->Arg(100000);

void BM_FresnelQuadrature(benchmark::State& state) {
    oscquad::QuadratureSpec qs;
    qs.dim = 1;
    qs.box = num::Box::cube(1, -0.75, 0.75);
    qs.mu = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto r = oscquad::integrate([](const Vec& x) { return 0.5 * x[0] * x[0]; },
                                    [](const Vec& x) { return num::bump(x[0] / 0.75); }, qs);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_FresnelQuadrature)->Arg(200)->Arg(2000);

void BM_PhaseGradient(benchmark::State& state) {
    const auto spec = actions::make_action("s2-rot");
    const auto x = spec->random_point(1, 7);
    symplectic::CotangentPoint pt;
    pt.chart = spec->chart_for(x);
    pt.x = spec->charts()[pt.chart].to_coords(x);
    pt.xi = Vec(2);
    pt.xi << 0.3, -1.1;
    const auto phi = symplectic::make_phase(spec, pt.chart);
    Vec g(1);
    g << 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(symplectic::phase_gradient(phi, pt, g));
    }
}
BENCHMARK(BM_PhaseGradient);

void BM_ReducedVolumeSample(benchmark::State& state) {
    const auto spec = actions::make_action("s3-hopf");
    symplectic::ReducedVolumeConfig cfg;
    cfg.samples = 1000;
    cfg.orbit_quadrature_points = static_cast<int>(state.range(0));
    cfg.convergence_check = false;
    for (auto _ : state) {
        auto est = symplectic::reduced_volume(spec, cfg);
        benchmark::DoNotOptimize(est.value);
    }
    state.SetItemsProcessed(state.iterations() * cfg.samples);
}
BENCHMARK(BM_ReducedVolumeSample)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WeakPhaseEval(benchmark::State& state) {
    const auto sp = blowup::xy2_singular_problem();
    const auto& tp = sp.charts[0].tp;
    Vec y(2);
    y << 1e-6, 0.7;  // near the divisor: exercises the quotient extension
    for (auto _ : state) {
        benchmark::DoNotOptimize(tp.weak(y));
    }
}
BENCHMARK(BM_WeakPhaseEval);

}  // namespace

BENCHMARK_MAIN();
