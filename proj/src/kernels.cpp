#include "vvdiss/kernels.hpp"

#include <stdexcept>
#include <vector>

namespace vvd::kernels {

namespace {

// Below this size the OpenMP region costs more than the loop.
constexpr std::ptrdiff_t parallel_min = 8192;

void check_same(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

template <class T, class F>
T blocked_reduce(std::size_t n, F&& partial) {
    const std::size_t nblocks = (n + reduction_block - 1) / reduction_block;
    if (nblocks <= 1) return partial(std::size_t{0}, n);
    std::vector<T> parts(nblocks);
    const auto nb = static_cast<std::ptrdiff_t>(nblocks);
#pragma omp parallel for schedule(static) if (static_cast<std::ptrdiff_t>(n) >= parallel_min)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * reduction_block;
        const std::size_t hi = std::min(n, lo + reduction_block);
        parts[static_cast<std::size_t>(b)] = partial(lo, hi);
    }
    T total{};
    for (const T& p : parts) total += p;
    return total;
}

}  // namespace

void scale(double s, std::span<cplx> x) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= parallel_min)
    for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= s;
}

void multiply(std::span<const double> w, std::span<const cplx> f, std::span<cplx> out) {
    check_same(w.size(), f.size(), "multiply");
    check_same(f.size(), out.size(), "multiply");
    const auto n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static) if (n >= parallel_min)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = w[i] * f[i];
}

void multiply(std::span<const cplx> w, std::span<const cplx> f, std::span<cplx> out) {
    check_same(w.size(), f.size(), "multiply");
    check_same(f.size(), out.size(), "multiply");
    const auto n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static) if (n >= parallel_min)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = w[i] * f[i];
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    check_same(x.size(), y.size(), "axpy");
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= parallel_min)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const cplx> x, cplx beta, std::span<cplx> y) {
    check_same(x.size(), y.size(), "xpby");
    const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= parallel_min)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

double sum_sq(std::span<const cplx> x) {
    return blocked_reduce<double>(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::norm(x[i]);
        return s;
    });
}

double weighted_sum_sq(std::span<const double> w, std::span<const cplx> x) {
    check_same(w.size(), x.size(), "weighted_sum_sq");
    return blocked_reduce<double>(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * std::norm(x[i]);
        return s;
    });
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    check_same(a.size(), b.size(), "dot");
    return blocked_reduce<cplx>(a.size(), [&](std::size_t lo, std::size_t hi) {
        cplx s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::conj(a[i]) * b[i];
        return s;
    });
}

namespace serial {

void scale(double s, std::span<cplx> x) {
    for (auto& v : x) v *= s;
}

void multiply(std::span<const double> w, std::span<const cplx> f, std::span<cplx> out) {
    check_same(w.size(), f.size(), "multiply");
    check_same(f.size(), out.size(), "multiply");
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = w[i] * f[i];
}

void multiply(std::span<const cplx> w, std::span<const cplx> f, std::span<cplx> out) {
    check_same(w.size(), f.size(), "multiply");
    check_same(f.size(), out.size(), "multiply");
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = w[i] * f[i];
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    check_same(x.size(), y.size(), "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const cplx> x, cplx beta, std::span<cplx> y) {
    check_same(x.size(), y.size(), "xpby");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

double sum_sq(std::span<const cplx> x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return s;
}

double weighted_sum_sq(std::span<const double> w, std::span<const cplx> x) {
    check_same(w.size(), x.size(), "weighted_sum_sq");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::norm(x[i]);
    return s;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    check_same(a.size(), b.size(), "dot");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace serial

}  // namespace vvd::kernels
