// Benchmarks for the hot paths: PAM clustering, surround/panel construction,
// the Lambda-block variance accumulation, and the two outcome models.
#include <benchmark/benchmark.h>

#include <vector>

#include "geocluster/clustering.hpp"
#include "geocluster/design.hpp"
#include "geocluster/estimators.hpp"
#include "geocluster/inference.hpp"
#include "geocluster/simulation.hpp"

using namespace geocluster;

namespace {

// One harness-sized instance (n=1000, k=100), built once and shared.
struct World {
    PointSet ps;
    Clustering c;
    double r_n;
    Surround s;
    DependencyStructure deps;
    AssignmentDraw draw;
    ModelContext co, ma;
    NoiseDraw noise_co, noise_ma;
    std::vector<double> y;
    UnitPanel panel;
    EstimateReport est;
    std::vector<double> z;

    World() : ps(make_points()) {
        c = k_medoids(ps, 100, 7);
        r_n = exclusion_radius(c);
        s = build_surround(ps, c, r_n);
        deps = lambda_sets(s, c.k());
        DesignParams dp{0.7, 0.6, c.k(), 99};
        RngStream ra(99, 0, 0, TAG_ASSIGN);
        draw = draw_assignment(c, dp, ra);
        co = ModelContext::build(ps, Model::CliffOrd);
        ma = ModelContext::build(ps, Model::MovingAverage);
        RngStream rn_co(99, 0, 0, TAG_NOISE);
        noise_co = shared_noise(co, rn_co);
        RngStream rn_ma(99, 0, 1, TAG_NOISE);
        noise_ma = shared_noise(ma, rn_ma);
        y = cliff_ord_outcomes(co, draw.D, noise_co);
        panel = build_panel(EstimandKind::Overall, s, draw, dp.p, dp.q);
        est = hajek(panel, y);
        z = residual_influence(panel, y, est);
    }

    static PointSet make_points() {
        RngStream rloc(99, 0, 0, TAG_LOCATIONS);
        return gen_locations(1000, 1.0, rloc);
    }
};

const World& world() {
    static World w;
    return w;
}

void BM_KMedoids(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    RngStream rloc(99, 0, 0, TAG_LOCATIONS);
    PointSet ps = gen_locations(n, 1.0, rloc);
    int k = plan_k(4.0 * n, n, 2.0, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(k_medoids(ps, k, 7));
}
BENCHMARK(BM_KMedoids)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BuildSurround(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(build_surround(w.ps, w.c, w.r_n));
}
BENCHMARK(BM_BuildSurround)->Unit(benchmark::kMillisecond);

void BM_PanelAndHajek(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state) {
        UnitPanel panel = build_panel(EstimandKind::Overall, w.s, w.draw, 0.7, 0.6);
        benchmark::DoNotOptimize(hajek(panel, w.y));
    }
}
BENCHMARK(BM_PanelAndHajek);

void BM_VarianceLambda(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(variance_from_influence(w.z, w.deps, w.c));
}
BENCHMARK(BM_VarianceLambda);

void BM_CliffOrdSolve(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(cliff_ord_outcomes(w.co, w.draw.D, w.noise_co));
}
BENCHMARK(BM_CliffOrdSolve)->Unit(benchmark::kMillisecond);

void BM_MovingAverageOutcomes(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(moving_average_outcomes(w.ma, w.draw.D, w.noise_ma));
}
BENCHMARK(BM_MovingAverageOutcomes)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
