#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "vvdiss/banded.hpp"

using cplx = std::complex<double>;

namespace {

// Dense Gaussian elimination with partial pivoting, reference only.
template <class T>
std::vector<T> dense_solve(std::vector<std::vector<T>> A, std::vector<T> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        }
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const T f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<T> x(n);
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    return x;
}

template <class T>
void check_against_dense(std::size_t n, unsigned seed, T (*draw)(std::mt19937_64&)) {
    std::mt19937_64 rng(seed);
    std::vector<T> sub(n), diag(n), sup(n), rhs(n);
    std::vector<std::vector<T>> A(n, std::vector<T>(n, T(0)));
    for (std::size_t i = 0; i < n; ++i) {
        sub[i] = draw(rng);
        sup[i] = draw(rng);
        diag[i] = T(4.0) + draw(rng);
        rhs[i] = draw(rng);
        A[i][i] = diag[i];
        A[i][(i + n - 1) % n] += sub[i];
        A[i][(i + 1) % n] += sup[i];
    }
    vvd::CyclicTridiagonal<T> solver(sub, diag, sup);
    const auto x = solver.solve(std::span<const T>(rhs));
    const auto ref = dense_solve(A, rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref[i]) < 1e-12);
}

double draw_real(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(-1, 1)(rng); }
cplx draw_cplx(std::mt19937_64& rng) { return {draw_real(rng), draw_real(rng)}; }

}  // namespace

TEST_CASE("cyclic solve matches dense elimination") {
    for (std::size_t n : {3u, 4u, 17u, 64u}) {
        CAPTURE(n);
        check_against_dense<double>(n, 11 + static_cast<unsigned>(n), draw_real);
        check_against_dense<cplx>(n, 23 + static_cast<unsigned>(n), draw_cplx);
    }
}

TEST_CASE("periodic second difference plus identity") {
    // (I - r * periodic Laplacian) x = b with a known solution
    const std::size_t n = 200;
    const double r = 3.0;
    std::vector<double> sub(n, -r), diag(n, 1 + 2 * r), sup(n, -r), x(n), b(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2 * M_PI * 3.0 * i / n) + 0.5;
    for (std::size_t i = 0; i < n; ++i) b[i] = (1 + 2 * r) * x[i] - r * x[(i + n - 1) % n] - r * x[(i + 1) % n];
    vvd::CyclicTridiagonal<double> s(sub, diag, sup);
    s.solve(std::span<double>(b));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(b[i] - x[i]) < 1e-12);
}

TEST_CASE("bad input throws") {
    using S = vvd::CyclicTridiagonal<double>;
    CHECK_THROWS_AS(S({1, 1}, {1, 1}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(S({1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}), std::invalid_argument);
    S s({0, 0, 0}, {1, 2, 3}, {0, 0, 0});
    std::vector<double> v(4);
    CHECK_THROWS_AS(s.solve(std::span<double>(v)), std::invalid_argument);
}
