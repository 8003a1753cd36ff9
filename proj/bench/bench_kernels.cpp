// Serial reference vs OpenMP kernels on z-grid sized arrays.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vvdiss/kernels.hpp"
#include "vvdiss/multiplier.hpp"

namespace {

using vvd::kernels::cplx;

struct Arrays {
    std::vector<double> w;
    std::vector<cplx> a, b, out;
    explicit Arrays(std::size_t n) : w(n), a(n), b(n), out(n) {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> nd;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = std::abs(nd(rng));
            a[i] = cplx(nd(rng), nd(rng));
            b[i] = cplx(nd(rng), nd(rng));
        }
    }
};

template <bool Parallel>
void BM_multiply(benchmark::State& st) {
    Arrays x(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        if constexpr (Parallel) {
            vvd::kernels::multiply(x.w, x.a, x.out);
        } else {
            vvd::kernels::serial::multiply(x.w, x.a, x.out);
        }
        benchmark::DoNotOptimize(x.out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_axpy(benchmark::State& st) {
    Arrays x(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        if constexpr (Parallel) {
            vvd::kernels::axpy(cplx(1e-3, 0.0), x.a, x.b);
        } else {
            vvd::kernels::serial::axpy(cplx(1e-3, 0.0), x.a, x.b);
        }
        benchmark::DoNotOptimize(x.b.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_weighted_sum_sq(benchmark::State& st) {
    Arrays x(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        double s = Parallel ? vvd::kernels::weighted_sum_sq(x.w, x.a) : vvd::kernels::serial::weighted_sum_sq(x.w, x.a);
        benchmark::DoNotOptimize(s);
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_dot(benchmark::State& st) {
    Arrays x(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        cplx s = Parallel ? vvd::kernels::dot(x.a, x.b) : vvd::kernels::serial::dot(x.a, x.b);
        benchmark::DoNotOptimize(s);
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_m_values(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto tb = vvd::make_multiplier_table(1e-6, 1.0);
    std::vector<double> xi(n), out(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = -2.0 * tb.G + 4.0 * tb.G * static_cast<double>(i) / n;
    for (auto _ : st) {
        if constexpr (Parallel) {
            vvd::m_values(tb, 0.3 * tb.G, 1, xi, out);
        } else {
            vvd::m_values_serial(tb, 0.3 * tb.G, 1, xi, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

#define SIZES RangeMultiplier(8)->Range(1 << 10, 1 << 19)

BENCHMARK(BM_multiply<false>)->SIZES;
BENCHMARK(BM_multiply<true>)->SIZES;
BENCHMARK(BM_axpy<false>)->SIZES;
BENCHMARK(BM_axpy<true>)->SIZES;
BENCHMARK(BM_weighted_sum_sq<false>)->SIZES;
BENCHMARK(BM_weighted_sum_sq<true>)->SIZES;
BENCHMARK(BM_dot<false>)->SIZES;
BENCHMARK(BM_dot<true>)->SIZES;
BENCHMARK(BM_m_values<false>)->SIZES;
BENCHMARK(BM_m_values<true>)->SIZES;

BENCHMARK_MAIN();
