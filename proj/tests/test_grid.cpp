#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "vvdiss/grid.hpp"

using namespace vvd;

namespace {

std::vector<cplx> random_field(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    return v;
}

double sum_sq(const std::vector<cplx>& v) {
    double s = 0;
    for (auto x : v) s += std::norm(x);
    return s;
}

}  // namespace

TEST_CASE("grid nodes and frequencies") {
    ZGrid g(std::numbers::pi, 8, 1.0);
    CHECK(g.spacing() == doctest::Approx(std::numbers::pi / 4));
    CHECK(g.node(0) == doctest::Approx(1.0 - std::numbers::pi));
    CHECK(g.frequency(0) == 0.0);
    CHECK(g.frequency(1) == doctest::Approx(1.0));
    CHECK(g.frequency(3) == doctest::Approx(3.0));
    CHECK(g.frequency(4) == doctest::Approx(-4.0));
    CHECK(g.frequency(7) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(ZGrid(1.0, 12), std::invalid_argument);
    CHECK_THROWS_AS(ZGrid(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(ZGrid(-1.0, 16), std::invalid_argument);
}

TEST_CASE("unitary transform: round trip and Parseval") {
    for (std::size_t n : {16u, 256u, 4096u}) {
        const auto f = random_field(n, 7 + static_cast<unsigned>(n));
        const auto F = dft(f);
        CHECK(sum_sq(F) == doctest::Approx(sum_sq(f)).epsilon(1e-13));
        const auto back = idft(F);
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(back[i] - f[i]));
        CHECK(err < 1e-13);
    }
}

TEST_CASE("spectral derivative is exact on trigonometric data") {
    ZGrid g(10.0, 64, 2.0);
    const double w = 3 * std::numbers::pi / 10.0;
    std::vector<cplx> f(64), df(64), d2f(64);
    for (std::size_t i = 0; i < 64; ++i) {
        const double z = g.node(i);
        f[i] = std::sin(w * z) + cplx(0, 1) * std::cos(2 * w * z);
        df[i] = w * std::cos(w * z) - cplx(0, 2 * w) * std::sin(2 * w * z);
        d2f[i] = -w * w * std::sin(w * z) - cplx(0, 4 * w * w) * std::cos(2 * w * z);
    }
    const auto d1 = d_dz(g, f, 1);
    const auto d2 = d_dz(g, f, 2);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(std::abs(d1[i] - df[i]) < 1e-12);
        CHECK(std::abs(d2[i] - d2f[i]) < 1e-11);
    }
}

TEST_CASE("norms and inner products") {
    ZGrid g(1.0, 32);
    std::vector<cplx> f(32, cplx(1.0, 1.0));
    CHECK(weighted_norm(g, f) == doctest::Approx(std::sqrt(2.0 * 2.0)));
    std::vector<double> w(32, 4.0);
    CHECK(weighted_norm(g, f, w) == doctest::Approx(std::sqrt(4.0 * 2.0 * 2.0)));
    w[3] = -1.0;
    CHECK_THROWS_AS(weighted_norm(g, f, w), std::invalid_argument);
    CHECK(std::abs(inner(g, f, f) - cplx(4.0, 0.0)) < 1e-14);
}

TEST_CASE("fourier coefficients are normalized by n") {
    const std::size_t n = 32;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 3.0 + std::cos(2 * std::numbers::pi * 2.0 * i / n);
    const auto c = fourier_coefficients(v);
    CHECK(std::abs(c[0] - 3.0) < 1e-14);
    CHECK(std::abs(c[2] - 0.5) < 1e-14);
    CHECK(std::abs(c[n - 2] - 0.5) < 1e-14);
    CHECK(std::abs(c[1]) < 1e-14);
}
