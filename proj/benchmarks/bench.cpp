// Microbenchmarks for the hot paths: the PDE step, the reservoir update, the
// streaming Gram accumulation and the solves they feed.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "gkesn/esn/reservoir.hpp"
#include "gkesn/esn/training.hpp"
#include "gkesn/gks/domain.hpp"
#include "gkesn/gks/solver.hpp"
#include "gkesn/numerics/circulant.hpp"
#include "gkesn/numerics/fft.hpp"
#include "gkesn/numerics/linalg.hpp"
#include "gkesn/numerics/rng.hpp"

using namespace gkesn;

namespace {

gks::DomainConfig bench_domain() {
    gks::DomainConfig config;
    config.length = 22.0;
    config.nx = 256;
    config.dt = 1e-3;
    config.dt_sample = 0.25;
    return config;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed = 1) {
    numerics::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

void bm_fft_forward_256(benchmark::State& state) {
    numerics::FftPlan plan(256);
    std::vector<std::complex<double>> in(256), out(256);
    const auto u = random_vector(256);
    for (std::size_t j = 0; j < 256; ++j) in[j] = {u[j], 0.0};
    for (auto _ : state) {
        plan.forward(in, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(bm_fft_forward_256);

void bm_real_half_spectrum_256(benchmark::State& state) {
    numerics::RealHalfSpectrumPlan plan(256);
    const auto u = random_vector(256);
    std::vector<std::complex<double>> hat(129);
    for (auto _ : state) {
        plan.forward(u, hat);
        benchmark::DoNotOptimize(hat.data());
    }
}
BENCHMARK(bm_real_half_spectrum_256);

void bm_circulant_solve_256(benchmark::State& state) {
    const numerics::CirculantSolver solver(gks::build_linear_operator(bench_domain()));
    const auto rhs = random_vector(256);
    std::vector<double> out(256);
    for (auto _ : state) {
        solver.solve(rhs, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(bm_circulant_solve_256);

void bm_pde_step_256(benchmark::State& state) {
    gks::GksStepper stepper(bench_domain());
    auto u = random_vector(256);
    for (auto& x : u) x *= 0.1;
    for (auto _ : state) {
        stepper.step_inplace(u);
        benchmark::DoNotOptimize(u.data());
    }
}
BENCHMARK(bm_pde_step_256);

void bm_reservoir_advance_1500(benchmark::State& state) {
    esn::EsnConfig config;
    config.reservoir_size = 1500;
    auto res = esn::build_reservoir(config, 256);
    const auto x = random_vector(256, 7);
    for (auto _ : state) {
        res.advance(x);
        benchmark::DoNotOptimize(res.state().data());
    }
}
BENCHMARK(bm_reservoir_advance_1500);

void bm_gram_accumulate_1500(benchmark::State& state) {
    const std::size_t d = 1500;
    esn::TrainingAccumulator acc(d, 256);
    const auto f = random_vector(d, 9);
    const auto y = random_vector(256, 11);
    for (auto _ : state) {
        acc.add_sample(f, y);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(bm_gram_accumulate_1500);

void bm_ridge_solve_gram_512(benchmark::State& state) {
    const std::size_t d = 512;
    numerics::Rng rng(13);
    numerics::DenseMatrix q(d, d), c(64, d);
    for (auto& v : q.values()) v = rng.uniform(-1.0, 1.0);
    for (auto& v : c.values()) v = rng.uniform(-1.0, 1.0);
    numerics::DenseMatrix g(d, d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) acc += q(k, a) * q(k, b);
            g(a, b) = acc + (a == b ? 1.0 : 0.0);
        }
    }
    for (auto _ : state) {
        auto w = numerics::ridge_solve_gram(g, c, 1e-4);
        benchmark::DoNotOptimize(w.values().data());
    }
}
BENCHMARK(bm_ridge_solve_gram_512);

}  // namespace

BENCHMARK_MAIN();
