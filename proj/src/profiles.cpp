#include "vvdiss/profiles.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vvd {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("profile parameter missing: " + key);
    return it->second;
}

double param_or(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

ProfileKind parse_profile_kind(const std::string& name) {
    if (name == "constant") return ProfileKind::constant;
    if (name == "exponential") return ProfileKind::exponential;
    if (name == "tanh-blend") return ProfileKind::tanh_blend;
    if (name == "tabulated") return ProfileKind::tabulated;
    throw std::invalid_argument("unknown profile kind: " + name);
}

std::string to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::constant: return "constant";
        case ProfileKind::exponential: return "exponential";
        case ProfileKind::tanh_blend: return "tanh-blend";
        case ProfileKind::tabulated: return "tabulated";
    }
    return "unknown";
}

double ViscosityProfile::max_mu() const { return *std::max_element(mu.begin(), mu.end()); }
double ViscosityProfile::min_mu() const { return *std::min_element(mu.begin(), mu.end()); }

double ViscosityProfile::seam_mismatch() const {
    const auto lo = at(-half_length);
    const auto hi = at(half_length);
    const double scale = std::max(std::abs(lo.mu), std::abs(hi.mu));
    double m = std::abs(hi.mu - lo.mu) / scale;
    m = std::max(m, std::abs(hi.dmu - lo.dmu) / scale);
    m = std::max(m, std::abs(hi.d2mu - lo.d2mu) / scale);
    return m;
}

ViscosityProfile build_profile(ProfileKind kind, const std::map<std::string, double>& params,
                               double half_length, std::size_t n_points, std::span<const double> table) {
    if (n_points < 16) throw std::invalid_argument("build_profile: n_points must be >= 16");
    if (!(half_length > 0.0)) throw std::invalid_argument("build_profile: L_y must be positive");

    ViscosityProfile p;
    p.kind = kind;
    p.params = params;
    p.half_length = half_length;
    p.n_points = n_points;

    switch (kind) {
        case ProfileKind::constant: {
            const double mu0 = param(params, "mu0");
            p.eval_ = [mu0](double) { return ViscositySample{mu0, 0.0, 0.0}; };
            break;
        }
        case ProfileKind::exponential: {
            const double mu0 = param(params, "mu0");
            const double eps = param(params, "eps");
            p.eval_ = [mu0, eps](double y) {
                const double m = mu0 * std::exp(eps * y);
                return ViscositySample{m, eps * m, eps * eps * m};
            };
            break;
        }
        case ProfileKind::tanh_blend: {
            const double mo = param(params, "mu_outer");
            const double mi = param(params, "mu_inner");
            const double c = param_or(params, "center", 0.0);
            const double s = param(params, "half_span");
            const double w = param(params, "width");
            if (!(mo > 0.0) || !(mi > 0.0)) {
                throw std::invalid_argument("tanh-blend: plateau viscosities must be positive");
            }
            if (!(w > 0.0) || s < 0.0) throw std::invalid_argument("tanh-blend: need width > 0, half_span >= 0");
            const double lmo = std::log(mo);
            const double dl = std::log(mi / mo);
            p.eval_ = [=](double y) {
                const double t1 = std::tanh((y - c + s) / w);
                const double t2 = std::tanh((y - c - s) / w);
                const double sech1 = 1.0 - t1 * t1;
                const double sech2 = 1.0 - t2 * t2;
                const double B = 0.5 * (t1 - t2);
                const double dB = 0.5 * (sech1 - sech2) / w;
                const double d2B = (-sech1 * t1 + sech2 * t2) / (w * w);
                const double m = std::exp(lmo + dl * B);
                const double l1 = dl * dB;
                const double l2 = dl * d2B;
                return ViscositySample{m, m * l1, m * (l2 + l1 * l1)};
            };
            break;
        }
        case ProfileKind::tabulated: {
            if (table.size() != n_points) {
                throw std::invalid_argument("tabulated profile: expected " + std::to_string(n_points) + " values");
            }
            const double h = 2.0 * half_length / static_cast<double>(n_points - 1);
            for (std::size_t i = 0; i < n_points; ++i) {
                if (!(table[i] > 0.0)) {
                    std::ostringstream msg;
                    msg << "non-positive viscosity " << table[i] << " at y = " << -half_length + h * i;
                    throw std::invalid_argument(msg.str());
                }
            }
            auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
                table.begin(), table.end(), -half_length, h);
            p.eval_ = [spline](double y) {
                return ViscositySample{(*spline)(y), spline->prime(y), spline->double_prime(y)};
            };
            break;
        }
    }

    const double h = p.spacing();
    p.y.resize(n_points);
    p.mu.resize(n_points);
    p.dmu.resize(n_points);
    p.d2mu.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double yy = (i + 1 == n_points) ? half_length : -half_length + static_cast<double>(i) * h;
        const auto smp = p.at(yy);
        if (!(smp.mu > 0.0) || !std::isfinite(smp.mu)) {
            std::ostringstream msg;
            msg << "non-positive viscosity " << smp.mu << " at y = " << yy;
            throw std::invalid_argument(msg.str());
        }
        p.y[i] = yy;
        p.mu[i] = smp.mu;
        p.dmu[i] = smp.dmu;
        p.d2mu[i] = smp.d2mu;
    }
    return p;
}

}  // namespace vvd
