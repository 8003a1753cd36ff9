#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/numeric/odeint.hpp>

#include <cmath>

#include "vvdiss/oracle.hpp"

using namespace vvd;

TEST_CASE("closed-form Couette factor, hand value") {
    // mu = 1e-2, k = 1, xi = 0, t = 10: exponent -mu (t + t^3/3)
    const double f = couette_factor(CouetteParams{1e-2, 1, 0.0}, 10.0);
    CHECK(f == doctest::Approx(std::exp(-0.1 - 10.0 / 3.0)).epsilon(1e-14));
    CHECK(f == doctest::Approx(std::exp(-3.4333333333333333)).epsilon(1e-14));
    CHECK(couette_factor(CouetteParams{1e-2, 1, 0.0}, 0.0) == 1.0);
}

TEST_CASE("Couette factor solves its ODE") {
    // d/dt log f = -mu (k^2 + s^2 (xi - k t)^2), integrated numerically
    namespace odeint = boost::numeric::odeint;
    for (const auto& p : {CouetteParams{1e-3, 1, 0.7}, CouetteParams{1e-4, 2, -3.0, 2.5},
                          CouetteParams{5e-2, 3, 10.0, 0.5}}) {
        double logf = 0.0;
        auto rhs = [&](const double&, double& d, double t) {
            const double s = p.xi - p.k * t;
            d = -p.mu * (p.k * p.k + p.shear * p.shear * s * s);
        };
        odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<double>>(1e-14, 1e-14), rhs,
                                   logf, 0.0, 7.5, 1e-3);
        CHECK(couette_factor(p, 7.5) == doctest::Approx(std::exp(logf)).epsilon(1e-11));
    }
}

TEST_CASE("couette_evolve applies the factor per frequency") {
    ZGrid g(5.0, 64);
    std::vector<cplx> W0(64, 0.0);
    W0[3] = 1.0;
    const auto W = couette_evolve(g, 1e-2, 1, 2.0, W0);
    const auto F0 = dft(W0), F = dft(W);
    for (std::size_t j = 0; j < 64; ++j) {
        const auto e = couette_exact(CouetteParams{1e-2, 1, g.frequency(j)}, 2.0, F0[j]);
        CHECK(std::abs(F[j] - e) < 1e-14);
    }
}
