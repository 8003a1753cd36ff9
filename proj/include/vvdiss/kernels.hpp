#pragma once

/**
 * @file kernels.hpp
 * @brief Pointwise and reduction kernels on complex grid arrays.
 *
 * The functions in vvd::kernels run OpenMP loops. Reductions sum fixed
 * blocks of reduction_block entries and then combine the block partials in
 * order, so the result does not depend on the thread count.
 * vvd::kernels::serial holds plain loops used as the reference in tests
 * and benchmarks.
 */

#include <complex>
#include <cstddef>
#include <span>

namespace vvd::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t reduction_block = 2048;

void scale(double s, std::span<cplx> x);
// out_i = w_i * f_i
void multiply(std::span<const double> w, std::span<const cplx> f, std::span<cplx> out);
// out_i = w_i * f_i for complex w
void multiply(std::span<const cplx> w, std::span<const cplx> f, std::span<cplx> out);
// y += alpha * x
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
// y = x + beta * y
void xpby(std::span<const cplx> x, cplx beta, std::span<cplx> y);

double sum_sq(std::span<const cplx> x);
double weighted_sum_sq(std::span<const double> w, std::span<const cplx> x);
// sum conj(a_i) b_i
cplx dot(std::span<const cplx> a, std::span<const cplx> b);

namespace serial {
void scale(double s, std::span<cplx> x);
void multiply(std::span<const double> w, std::span<const cplx> f, std::span<cplx> out);
void multiply(std::span<const cplx> w, std::span<const cplx> f, std::span<cplx> out);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void xpby(std::span<const cplx> x, cplx beta, std::span<cplx> y);
double sum_sq(std::span<const cplx> x);
double weighted_sum_sq(std::span<const double> w, std::span<const cplx> x);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
}  // namespace serial

}  // namespace vvd::kernels
