#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vvdiss/profiles.hpp"

namespace vvd {

namespace {

Condition make(const std::string& name, double value, double threshold, const std::string& rel,
               bool counted = true) {
    bool pass = false;
    if (rel == "<") pass = value < threshold;
    if (rel == "<=") pass = value <= threshold;
    if (rel == ">=") pass = value >= threshold;
    return Condition{name, value, threshold, rel, pass, counted};
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 4;
    while (p < n) p <<= 1;
    return p;
}

// Periodic Fourier coefficients of samples on a period of length `period`
// (last closed-grid point dropped by the caller), returned with their
// angular frequencies.
struct Spectrum {
    std::vector<cplx> coef;
    std::vector<double> freq;
};

Spectrum periodic_spectrum(std::span<const double> values, double period) {
    Spectrum s;
    s.coef = fourier_coefficients(values);
    const std::size_t n = values.size();
    s.freq.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double m = (j <= n / 2) ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
        s.freq[j] = 2.0 * std::numbers::pi * m / period;
    }
    return s;
}

}  // namespace

bool AdmissibilityReport::pass() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const Condition& c) { return !c.counted || c.pass; });
}

const Condition& AdmissibilityReport::find(const std::string& name) const {
    for (const auto& c : conditions) {
        if (c.name == name) return c;
    }
    throw std::invalid_argument("no admissibility record named " + name);
}

AdmissibilityReport validate_profile(const ShearEquilibrium& eq) {
    const auto& p = *eq.profile;
    const std::size_t n = p.n_points;
    AdmissibilityReport rep;

    std::vector<double> l1(n), l2(n), dU_l2(n);
    for (std::size_t i = 0; i < n; ++i) {
        l1[i] = p.dmu[i] / p.mu[i];
        l2[i] = p.d2mu[i] / p.mu[i] - l1[i] * l1[i];
        dU_l2[i] = eq.dU[i] * l2[i];
    }
    const double mu_sup = p.max_mu();
    const double mu_inf = p.min_mu();

    const double gradual = max_abs(l1) + max_abs(dU_l2);
    const double w1inf = max_abs(l1) + max_abs(l2);
    rep.conditions.push_back(make("gradual_variation", gradual, 1e-3, "<"));
    rep.conditions.push_back(make("gradual_variation_w1inf", w1inf, 0.1, "<", false));
    const bool strict_ok = gradual < 1e-3;
    const bool loose_ok = w1inf < 0.1;
    if (strict_ok == loose_ok) {
        rep.binding_gradual = "none";
    } else {
        rep.binding_gradual = strict_ok ? "gradual_variation_w1inf" : "gradual_variation";
    }

    // Tail of mu' above sup(mu)^(-1/3) on the periodized y-interval.
    {
        std::span<const double> vals(p.dmu.data(), n - 1);
        const auto spec = periodic_spectrum(vals, 2.0 * p.half_length);
        const double cut = std::pow(mu_sup, -1.0 / 3.0);
        double tail = 0.0;
        for (std::size_t j = 0; j < spec.coef.size(); ++j) {
            if (std::abs(spec.freq[j]) >= cut) tail += std::abs(spec.coef[j]);
        }
        rep.conditions.push_back(make("fourier_tail", tail / mu_sup, 1e-3, "<"));
    }

    rep.conditions.push_back(make("aspect", mu_sup * mu_sup / mu_inf, 0.1, "<"));

    const double G = 0.1 * std::pow(eq.nu, -1.0 / 3.0);
    {
        // |d_z U' / U'| = |mu'/mu| / U'
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(l1[i]) / eq.dU[i]);
        rep.conditions.push_back(make("cond1", 100.0 / G * m, 1e-3, "<="));
    }

    const auto zc = sample_on_z(eq, next_pow2(n));
    const double period_z = 2.0 * zc.grid.half_length();
    {
        const auto spec = periodic_spectrum(zc.dmu_dz, period_z);
        double tail = 0.0;
        for (std::size_t j = 0; j < spec.coef.size(); ++j) {
            if (std::abs(spec.freq[j]) >= G) tail += std::abs(spec.coef[j]);
        }
        rep.conditions.push_back(make("cond2", tail / G / mu_inf, 0.1, "<="));
    }
    {
        const auto spec = periodic_spectrum(zc.a, period_z);
        double sup = 0.0;
        for (std::size_t j = 0; j < spec.coef.size(); ++j) {
            if (std::abs(spec.freq[j]) >= 2.0 * G) sup = std::max(sup, std::abs(spec.coef[j]));
        }
        rep.conditions.push_back(make("u_prime_tail", sup / eq.u, 0.5, "<="));
    }

    const double min_dU = *std::min_element(eq.dU.begin(), eq.dU.end());
    rep.conditions.push_back(make("u_prime_ge_1", min_dU, 1.0 - 1e-12, ">="));

    rep.conditions.push_back(make("periodic_seam", p.seam_mismatch(), 1e-6, "<=", false));
    return rep;
}

}  // namespace vvd
