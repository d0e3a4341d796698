// Microbenchmarks for the hot paths: transition blocks, interior position
// queries (cold and cached), the spectral machinery, inversion, and the
// planner kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "cwplan/constraints.hpp"
#include "cwplan/cw.hpp"
#include "cwplan/planner.hpp"
#include "cwplan/reachability.hpp"
#include "cwplan/spectral.hpp"

using namespace cwplan;

namespace {

const cw::OrbitParams kLeo = cw::OrbitParams::from_altitude(400.0);
const Vec3 kRi(1.0, 0.0, 0.0);
const Vec3 kRj(0.0, 2.0, 0.0);

void BM_StmBlocks(benchmark::State& state) {
    double dt = 600.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cw::stm_blocks(kLeo, dt));
        dt = (dt < 2500.0) ? dt + 1.0 : 600.0;
    }
}
BENCHMARK(BM_StmBlocks);

void BM_Propagate(benchmark::State& state) {
    cw::RelState s;
    s.r = kRi;
    s.v = Vec3(0.0, -0.002, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cw::propagate(kLeo, s, 900.0));
    }
}
BENCHMARK(BM_Propagate);

void BM_TrajectoryPositionCold(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cw::trajectory_position(kLeo, kRi, kRj, 1500.0, 600.0));
    }
}
BENCHMARK(BM_TrajectoryPositionCold);

void BM_LegEvaluatorCached(benchmark::State& state) {
    const cw::LegEvaluator eval(kLeo, kRi, kRj, 1500.0);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval.position(t));
        t = (t < 1499.0) ? t + 1.0 : 0.0;
    }
}
BENCHMARK(BM_LegEvaluatorCached);

void BM_SphereBound(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral::sphere_bound(kLeo, kRi, kRj, 1700.0));
    }
}
BENCHMARK(BM_SphereBound);

void BM_FhatAssembly(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral::fhat(kLeo, 600.0, 1500.0));
    }
}
BENCHMARK(BM_FhatAssembly);

void BM_SymEigensystem6(benchmark::State& state) {
    const auto fh = spectral::fhat(kLeo, 600.0, 1500.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral::sym_eigensystem(fh.m));
    }
}
BENCHMARK(BM_SymEigensystem6);

void BM_InvertReach(benchmark::State& state) {
    const Vec3 target = cw::trajectory_position(kLeo, kRi, kRj, 1500.0, 600.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reach::invert_reach(kLeo, target, kRi, kRj));
    }
}
BENCHMARK(BM_InvertReach);

void BM_CertifyLeg(benchmark::State& state) {
    const auto p = cw::OrbitParams::from_mean_motion(1.1e-3);
    constraints::PathConstraint ball;
    ball.rho_inner = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(planner::certify_leg_always_clear(
            p, Vec3(1, 0, 0), Vec3(0, -1, 0), ball));
    }
}
BENCHMARK(BM_CertifyLeg);

void BM_CfkTwoImpulseMapCoarse(benchmark::State& state) {
    auto sc = planner::CfkScenario::defaults(
        cw::OrbitParams::from_mean_motion(1.1e-3));
    sc.beta_grid_deg.clear();
    for (int b = 0; b <= 360; b += 30) sc.beta_grid_deg.push_back(b);
    sc.time_grid_s.clear();
    for (int t = 200; t <= 2800; t += 200) sc.time_grid_s.push_back(t);
    sc.min_leg_samples = 50;
    for (auto _ : state) {
        benchmark::DoNotOptimize(planner::cfk_two_impulse_map(sc));
    }
}
BENCHMARK(BM_CfkTwoImpulseMapCoarse);

}  // namespace

BENCHMARK_MAIN();
