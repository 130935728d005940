// Compares the OpenMP kernels against their serial references on
// production-sized grids. Build with -DDDC_BENCH=ON; requires Google
// Benchmark.

#include <benchmark/benchmark.h>

#include <random>

#include "ddc/kernels.hpp"
#include "ddc/model.hpp"

using namespace ddc;

namespace {

struct Setup {
    Grid grid;
    ScalarField u, v;
    FaceField gv, drift, flux;
    std::vector<double> f_of_u;
    ScalarField out;

    explicit Setup(int n)
        : grid(build_grid(n, n, 1.0, 1.0)),
          u(grid),
          v(grid),
          gv(grid),
          drift(grid),
          flux(grid),
          f_of_u(static_cast<size_t>(grid.ncells())),
          out(grid) {
        std::mt19937_64 rng(1234);
        std::uniform_real_distribution<double> du(0.0, 2.0), dv(0.5, 1.0);
        for (double& x : u.data) x = du(rng);
        for (double& x : v.data) x = dv(rng);
        ModelParams p;
        for (size_t i = 0; i < f_of_u.size(); ++i) f_of_u[i] = f_eval(u.data[i], p);
        ref::face_gradient(v, gv);
        drift = gv;
    }
};

void bm_laplacian_serial(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        ref::laplacian(s.v, s.out);
        benchmark::ClobberMemory();
    }
}

void bm_laplacian_omp(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        kern::laplacian(s.v, s.out);
        benchmark::ClobberMemory();
    }
}

void bm_fluxes_serial(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    TransportCoeffs tc{1.0, 0.0};
    for (auto _ : state) {
        ref::transport_fluxes(s.u, s.v, s.f_of_u, s.drift, tc, s.flux);
        benchmark::ClobberMemory();
    }
}

void bm_fluxes_omp(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    TransportCoeffs tc{1.0, 0.0};
    for (auto _ : state) {
        kern::transport_fluxes(s.u, s.v, s.f_of_u, s.drift, tc, s.flux);
        benchmark::ClobberMemory();
    }
}

void bm_helmholtz_serial(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        ref::helmholtz_apply(s.v, s.u, 1e-4, s.out);
        benchmark::ClobberMemory();
    }
}

void bm_helmholtz_omp(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        kern::helmholtz_apply(s.v, s.u, 1e-4, s.out);
        benchmark::ClobberMemory();
    }
}

void bm_sum_serial(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ref::sum(s.u.data));
}

void bm_sum_omp(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kern::sum(s.u.data));
}

}  // namespace

BENCHMARK(bm_laplacian_serial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(bm_laplacian_omp)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(bm_fluxes_serial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(bm_fluxes_omp)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(bm_helmholtz_serial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(bm_helmholtz_omp)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(bm_sum_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_sum_omp)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
