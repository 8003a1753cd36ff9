#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "vvdiss/profiles.hpp"

using namespace vvd;

namespace {

void check_fd_derivatives(const ViscosityProfile& p) {
    const double h = p.spacing();
    for (std::size_t i = 1; i + 1 < p.n_points; ++i) {
        const double d1 = (p.mu[i + 1] - p.mu[i - 1]) / (2 * h);
        const double d2 = (p.mu[i + 1] - 2 * p.mu[i] + p.mu[i - 1]) / (h * h);
        const double scale = p.mu[i];
        CHECK(std::abs(d1 - p.dmu[i]) <= 10 * h * h * scale);
        CHECK(std::abs(d2 - p.d2mu[i]) <= 10 * h * h * scale);
    }
}

}  // namespace

TEST_CASE("constant profile and Couette equilibrium") {
    auto p = build_profile(ProfileKind::constant, {{"mu0", 1e-3}}, 10.0, 256);
    for (std::size_t i = 0; i < p.n_points; ++i) {
        CHECK(p.mu[i] == 1e-3);
        CHECK(p.dmu[i] == 0.0);
    }
    const auto eq = build_equilibrium(p, 1e-3);
    for (std::size_t i = 0; i < p.n_points; ++i) {
        CHECK(eq.U[i] == doctest::Approx(p.y[i]).epsilon(1e-12));
        CHECK(eq.dU[i] == doctest::Approx(1.0));
        CHECK(eq.ddU[i] == 0.0);
    }
    CHECK(eq.nu == doctest::Approx(1e-3));
    CHECK(eq.u == doctest::Approx(1.0));
    const auto rates = local_rates(eq);
    for (double r : rates.rate) CHECK(r == doctest::Approx(std::cbrt(1e-3)).epsilon(1e-12));
}

TEST_CASE("non-positive viscosity is rejected") {
    CHECK_THROWS_AS(build_profile(ProfileKind::constant, {{"mu0", -1.0}}, 10.0, 256), std::invalid_argument);
    CHECK_THROWS_AS(build_profile(ProfileKind::constant, {{"mu0", 1.0}}, 10.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(build_profile(ProfileKind::exponential, {{"mu0", 1.0}}, 10.0, 64), std::invalid_argument);
    std::vector<double> table(64, 1.0);
    table[10] = 0.0;
    CHECK_THROWS_AS(build_profile(ProfileKind::tabulated, {}, 10.0, 64, table), std::invalid_argument);
    CHECK_THROWS_AS(parse_profile_kind("parabolic"), std::invalid_argument);
}

TEST_CASE("exponential profile and its equilibrium") {
    const double mu0 = 1e-4, eps = 5e-4, L = 693.0;
    auto p = build_profile(ProfileKind::exponential, {{"mu0", mu0}, {"eps", eps}}, L, 2049);
    for (std::size_t i = 0; i < p.n_points; ++i) {
        CHECK(p.mu[i] == doctest::Approx(mu0 * std::exp(eps * p.y[i])).epsilon(1e-14));
        CHECK(p.dmu[i] / p.mu[i] == doctest::Approx(eps).epsilon(1e-13));
    }
    check_fd_derivatives(p);

    const double sigma = mu0 * std::exp(eps * L);
    const auto eq = build_equilibrium(p, sigma);
    for (std::size_t i = 0; i < p.n_points; ++i) {
        const double y = p.y[i];
        CHECK(eq.dU[i] == doctest::Approx(std::exp(eps * (L - y))).epsilon(1e-12));
        CHECK(eq.ddU[i] == doctest::Approx(-eps * eq.dU[i]).epsilon(1e-12));
        CHECK(p.mu[i] * eq.dU[i] == doctest::Approx(sigma).epsilon(1e-12));
        // U(y) = e^(eps L) (1 - e^(-eps y)) / eps
        const double exact = std::exp(eps * L) * (1.0 - std::exp(-eps * y)) / eps;
        CHECK(std::abs(eq.U[i] - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
    CHECK(eq.U_at(0.0) == doctest::Approx(0.0));
    for (double y : {-500.3, -1.7, 0.0, 12.25, 690.0}) {
        const double exact = std::exp(eps * L) * (1.0 - std::exp(-eps * y)) / eps;
        CHECK(eq.U_at(y) == doctest::Approx(exact).epsilon(1e-10));
        CHECK(eq.y_of_z(eq.U_at(y)) == doctest::Approx(y).epsilon(1e-10));
    }
    const auto rates = local_rates(eq);
    for (std::size_t i = 0; i < p.n_points; ++i) {
        CHECK(rates.rate[i] * std::cbrt(p.mu[i]) == doctest::Approx(std::cbrt(sigma * sigma)).epsilon(1e-10));
    }
}

TEST_CASE("normalization U' >= 1 is enforced") {
    auto p = build_profile(ProfileKind::exponential, {{"mu0", 1e-4}, {"eps", 5e-4}}, 100.0, 257);
    CHECK_THROWS_AS(build_equilibrium(p, 1e-4), std::invalid_argument);
}

TEST_CASE("tanh-blend derivatives match finite differences") {
    auto p = build_profile(ProfileKind::tanh_blend,
                           {{"mu_outer", 1e-6}, {"mu_inner", 1e-4}, {"half_span", 5.0}, {"width", 2.0}}, 30.0, 4001);
    check_fd_derivatives(p);
    CHECK(p.at(0.0).mu == doctest::Approx(1e-4).epsilon(1e-3));
    CHECK(p.at(30.0).mu == doctest::Approx(1e-6).epsilon(1e-6));
    const auto eq = build_equilibrium(p, p.max_mu());
    for (std::size_t i = 1; i < p.n_points; ++i) CHECK(eq.U[i] > eq.U[i - 1]);
}

TEST_CASE("tabulated profile interpolates its table") {
    const std::size_t n = 401;
    const double L = 20.0;
    std::vector<double> table(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = -L + 2 * L * i / (n - 1);
        table[i] = 1e-3 * (1.5 + 0.5 * std::cos(M_PI * y / L));
    }
    auto p = build_profile(ProfileKind::tabulated, {}, L, n, table);
    for (std::size_t i = 0; i < n; ++i) CHECK(p.mu[i] == doctest::Approx(table[i]).epsilon(1e-12));
    const double y = 3.3;
    CHECK(p.at(y).dmu == doctest::Approx(-1e-3 * 0.5 * M_PI / L * std::sin(M_PI * y / L)).epsilon(1e-4));
}

TEST_CASE("z coefficients satisfy a * mu = sigma") {
    auto p = std::make_shared<const ViscosityProfile>(build_profile(
        ProfileKind::tanh_blend, {{"mu_outer", 1e-6}, {"mu_inner", 1e-5}, {"half_span", 5.0}, {"width", 3.0}}, 40.0,
        2001));
    const auto eq = build_equilibrium(p, p->max_mu());
    const auto zc = sample_on_z(eq, 512);
    CHECK_FALSE(zc.uniform);
    for (std::size_t i = 0; i < 512; ++i) {
        CHECK(zc.a[i] * zc.mu[i] == doctest::Approx(eq.sigma).epsilon(1e-10));
        CHECK(zc.a[i] >= 1.0 - 1e-12);
    }
    const auto flat = sample_on_z(build_equilibrium(build_profile(ProfileKind::constant, {{"mu0", 1e-3}}, 10.0, 64), 1e-3), 64);
    CHECK(flat.uniform);
}

TEST_CASE("admissibility: Couette passes") {
    for (double mu : {1e-2, 1e-3, 0.0999}) {
        auto p = build_profile(ProfileKind::constant, {{"mu0", mu}}, 10.0, 256);
        const auto rep = validate_profile(build_equilibrium(p, mu));
        CHECK(rep.pass());
        CHECK(rep.find("gradual_variation").value == 0.0);
        CHECK(rep.find("aspect").value == doctest::Approx(mu));
    }
    // the aspect bound is strict, so mu = 0.1 sits on the boundary and fails
    auto p = build_profile(ProfileKind::constant, {{"mu0", 0.1}}, 10.0, 256);
    const auto rep = validate_profile(build_equilibrium(p, 0.1));
    CHECK_FALSE(rep.find("aspect").pass);
}

TEST_CASE("admissibility: steep exponential fails the gradual-variation bound") {
    const double eps = 0.01, L = 30.0;
    auto p = build_profile(ProfileKind::exponential, {{"mu0", 1e-4}, {"eps", eps}}, L, 1025);
    const auto rep = validate_profile(build_equilibrium(p, p.max_mu()));
    CHECK_FALSE(rep.pass());
    CHECK(rep.find("gradual_variation").value == doctest::Approx(eps).epsilon(1e-10));
    CHECK_FALSE(rep.find("gradual_variation").pass);
    CHECK(rep.binding_gradual == "gradual_variation");
}

TEST_CASE("admissibility: gentle exponential fails only Cond.1") {
    // mu in [1e-4, 2e-4]; Cond.1 is 100/G * eps / inf U' with
    // G = 0.1 nu^(-1/3), nu = sup mu, inf U' = 1
    const double eps = 5e-4, L = std::log(2.0) / (2 * eps), mu0 = 1e-4 * std::sqrt(2.0);
    auto p = build_profile(ProfileKind::exponential, {{"mu0", mu0}, {"eps", eps}}, L, 2049);
    const auto eq = build_equilibrium(p, p.max_mu());
    const auto rep = validate_profile(eq);
    const double expected = 1000.0 * eps * std::cbrt(p.max_mu());
    CHECK(rep.find("cond1").value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(rep.find("cond1").value == doctest::Approx(0.029243).epsilon(1e-4));
    CHECK_FALSE(rep.find("cond1").pass);
    CHECK(rep.find("gradual_variation").pass);
    CHECK(rep.find("aspect").pass);
    CHECK(rep.find("u_prime_ge_1").pass);
    CHECK_FALSE(rep.pass());
}

TEST_CASE("admissibility: contrast-1000 blend passes") {
    auto p = build_profile(ProfileKind::tanh_blend,
                           {{"mu_outer", 1e-12}, {"mu_inner", 1e-9}, {"half_span", 20000.0}, {"width", 4000.0}},
                           52000.0, 20001);
    const auto rep = validate_profile(build_equilibrium(p, p.max_mu()));
    CHECK(rep.pass());
    CHECK(p.max_mu() / p.min_mu() == doctest::Approx(1000.0).epsilon(1e-3));
    CHECK(p.seam_mismatch() <= 1e-6);
}
