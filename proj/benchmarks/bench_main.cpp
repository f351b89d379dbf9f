#include <benchmark/benchmark.h>

#include "membrane/bessel.hpp"
#include "membrane/boxops.hpp"
#include "membrane/green.hpp"
#include "membrane/pathsum.hpp"
#include "membrane/percolation.hpp"
#include "membrane/rng.hpp"
#include "membrane/sampler.hpp"

using namespace membrane;

static void BesselScaledMiller(benchmark::State& state) {
    const double z = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bessel_i_scaled_orders(z, 8));
}
BENCHMARK(BesselScaledMiller)->Arg(10)->Arg(100)->Arg(1000);

static void GreenBilaplacianOrigin(benchmark::State& state) {
    const int d = int(state.range(0));
    const LatticeVector zero(size_t(d), 0);
    const QuadratureSpec spec = auto_spec_bilaplacian(d, 1e-8);
    for (auto _ : state) benchmark::DoNotOptimize(green_bilaplacian(zero, spec).value);
}
BENCHMARK(GreenBilaplacianOrigin)->Arg(5)->Arg(12)->Arg(50);

static void PathsumOracleOrigin(benchmark::State& state) {
    const int n_max = int(state.range(0));
    const PathsumOracle oracle(5, n_max);
    const LatticeVector zero(5, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle.evaluate(zero, PathWeight::bilaplacian).partial_sum);
}
BENCHMARK(PathsumOracleOrigin)->Arg(1000)->Arg(8000);

static void TorusSample(benchmark::State& state) {
    const TorusSampler ts(5, int(state.range(0)), 1);
    uint64_t stream = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ts.sample(stream++).values[0]);
}
BENCHMARK(TorusSample)->Arg(8)->Arg(12);

static void DirichletSolve(benchmark::State& state) {
    const int N = int(state.range(0));
    const DirichletBilaplacian A(5, N);
    const DstBilaplacianInverse M(A.box());
    std::vector<double> rhs(A.size(), 0.0), x;
    rhs[A.box().index(LatticeVector(5, 0))] = 1.0;
    for (auto _ : state) {
        solve_dirichlet_bilaplacian(A, M, rhs, x, 1e-10, 200);
        benchmark::DoNotOptimize(x[0]);
    }
}
BENCHMARK(DirichletSolve)->Arg(2)->Arg(4);

static void LabelClusters(benchmark::State& state) {
    const TorusSampler ts(5, 8, 3);
    const FieldSample s = ts.sample(0);
    const OccupancyGrid g = threshold(s, 0.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(label_clusters(g, Adjacency::nearest_neighbor).count());
}
BENCHMARK(LabelClusters);

static void GaussianNoise(benchmark::State& state) {
    std::vector<double> buf(2048);
    uint64_t ctr = 0;
    for (auto _ : state) {
        gaussian_pair(1, 2, ctr++, buf[0], buf[1]);
        benchmark::DoNotOptimize(buf[0]);
    }
}
BENCHMARK(GaussianNoise);

BENCHMARK_MAIN();
