#include <benchmark/benchmark.h>

#include "conekrylov/generate.hpp"
#include "conekrylov/krylov.hpp"
#include "conekrylov/rksm.hpp"

using namespace conekrylov;

namespace {

SymmetricMatrix bench_instance(Index n, double density) {
    return gen_random_spd(n, density, 0.01, 2, 1234);
}

void SolveSparse(benchmark::State& state) {
    const Index n = state.range(0);
    SymmetricMatrix m = bench_instance(n, 0.01);
    const Vector q = Vector::Ones(n);
    SolverOptions opts;
    opts.ell0 = 3;
    opts.k0 = 3;
    for (auto _ : state) {
        SolveReport r = solve(m, q, opts);
        benchmark::DoNotOptimize(r.s_star);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(SolveSparse)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void SolveBlockSize(benchmark::State& state) {
    SymmetricMatrix m = bench_instance(1000, 0.01);
    const Vector q = Vector::Ones(1000);
    SolverOptions opts;
    opts.ell0 = 3;
    opts.k0 = 3;
    opts.ell = state.range(0);
    for (auto _ : state) {
        SolveReport r = solve(m, q, opts);
        benchmark::DoNotOptimize(r.final_dim);
    }
}
BENCHMARK(SolveBlockSize)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void Oracle(benchmark::State& state) {
    const Index n = state.range(0);
    SymmetricMatrix m = gen_random_spd(n, 1.0, 0.01, 2, 77);
    const Vector q = Vector::Ones(n);
    for (auto _ : state) {
        SolveReport r = direct_oracle(m, q);
        benchmark::DoNotOptimize(r.s_star);
    }
}
BENCHMARK(Oracle)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void ShiftedFactorizationSparse(benchmark::State& state) {
    const Index n = state.range(0);
    SymmetricMatrix m = bench_instance(n, 0.01);
    const double s = 2.0 * m.one_norm();
    for (auto _ : state) {
        ShiftedFactorization f(m, s);
        benchmark::DoNotOptimize(f.inertia().n_neg);
    }
}
BENCHMARK(ShiftedFactorizationSparse)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

void ExtendedKrylovStart(benchmark::State& state) {
    SymmetricMatrix m = bench_instance(2000, 0.01);
    const Vector q = Vector::Ones(2000);
    CholeskyFactor chol(m);
    for (auto _ : state) {
        OrthoBasis u = extended_krylov(m, q, 10, 10, chol);
        benchmark::DoNotOptimize(u.dim());
    }
}
BENCHMARK(ExtendedKrylovStart)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
