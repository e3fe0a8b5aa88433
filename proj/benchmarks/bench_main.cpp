#include <benchmark/benchmark.h>

#include "hypent/boundary.hpp"
#include "hypent/convexity.hpp"
#include "hypent/flow.hpp"
#include "hypent/functional.hpp"
#include "hypent/heatkernel.hpp"

using namespace hypent;

namespace {

GeodesicDisk equatorial_disk(double truncation) {
    Mat frame = Mat::Zero(3, 2);
    frame(0, 0) = frame(1, 1) = 1;
    return GeodesicDisk(BallPoint::origin(3), frame, truncation);
}

void BM_KernelOdd(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    double rho = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(kernel(n, 1.0, rho));
        rho = rho < 10 ? rho + 0.37 : 0.1;
    }
}
BENCHMARK(BM_KernelOdd)->Arg(1)->Arg(3)->Arg(5)->Arg(7);

void BM_KernelEven(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    double rho = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(kernel(n, 1.0, rho));
        rho = rho < 10 ? rho + 0.37 : 0.1;
    }
}
BENCHMARK(BM_KernelEven)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_LogKernelEven(benchmark::State& st) {
    double rho = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(log_kernel(2, 1.0, rho));
        rho = rho < 10 ? rho + 0.37 : 0.1;
    }
}
BENCHMARK(BM_LogKernelEven)->Unit(benchmark::kMicrosecond);

void BM_GapScan(benchmark::State& st) {
    ScanGrid g;
    g.t_count = 10;
    g.rho_count = 20;
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(scan(n, g, 1));
}
BENCHMARK(BM_GapScan)->Arg(3)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_FCurve(benchmark::State& st) {
    const FFunctional F(circle_polyline(BallPoint::origin(2), 1.0, static_cast<int>(st.range(0))));
    const BallPoint p0 = exp_origin(Vec::Unit(2, 0), 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(F(p0, 0.2));
}
BENCHMARK(BM_FCurve)->Arg(128)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_FMesh(benchmark::State& st) {
    const FFunctional F(sphere_mesh(BallPoint::origin(3), 0.5, static_cast<int>(st.range(0))));
    const BallPoint p0 = exp_origin(Vec::Unit(3, 2), 0.2);
    for (auto _ : st) benchmark::DoNotOptimize(F(p0, 0.1));
}
BENCHMARK(BM_FMesh)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_FDisk(benchmark::State& st) {
    const FFunctional F(equatorial_disk(6.0));
    const BallPoint p0 = exp_origin(Vec::Unit(3, 2), 0.5);
    for (auto _ : st) benchmark::DoNotOptimize(F(p0, 1.0));
}
BENCHMARK(BM_FDisk)->Unit(benchmark::kMicrosecond);

void BM_CurveStep(benchmark::State& st) {
    const FlowState s{0.0, circle_polyline(BallPoint::origin(2), 1.0, static_cast<int>(st.range(0)))};
    for (auto _ : st) benchmark::DoNotOptimize(step_curve(s, 1e-5));
}
BENCHMARK(BM_CurveStep)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_ConformalVolume(benchmark::State& st) {
    const BoundaryCurve g = latitude_circle(0.8, 128);
    ConformalVolumeConfig cfg;
    cfg.threads = 1;
    for (auto _ : st) benchmark::DoNotOptimize(conformal_volume(g, cfg));
}
BENCHMARK(BM_ConformalVolume)->Unit(benchmark::kMillisecond);

void BM_BoundaryLimitDisk(benchmark::State& st) {
    const GeodesicDisk d = equatorial_disk(std::numeric_limits<double>::infinity());
    const BallPoint p0 = exp_origin(Vec::Unit(3, 2), 0.5);
    for (auto _ : st) benchmark::DoNotOptimize(boundary_limit(d, p0));
}
BENCHMARK(BM_BoundaryLimitDisk)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
