#include "vvdiss/profiles.hpp"

#include <cmath>
using std::isnan;  // boost 1.74 pchip calls it unqualified
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vvd {

namespace {

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> F(n, 0.0);
    for (std::size_t i = 2; i < n; i += 2) F[i] = F[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    for (std::size_t i = 1; i < n; i += 2) {
        if (i + 1 < n) {
            F[i] = F[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        } else {
            F[i] = F[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
        }
    }
    return F;
}

}  // namespace

ShearEquilibrium build_equilibrium(const ViscosityProfile& profile, double sigma) {
    return build_equilibrium(std::make_shared<const ViscosityProfile>(profile), sigma);
}

ShearEquilibrium build_equilibrium(std::shared_ptr<const ViscosityProfile> profile, double sigma) {
    if (!profile) throw std::invalid_argument("build_equilibrium: null profile");
    if (!(sigma > 0.0)) throw std::invalid_argument("build_equilibrium: sigma must be positive");
    const double mu_max = profile->max_mu();
    if (sigma / mu_max < 1.0 - 1e-12) {
        std::ostringstream msg;
        msg << "build_equilibrium: min U' = " << sigma / mu_max << " < 1; use sigma >= " << mu_max;
        throw std::invalid_argument(msg.str());
    }

    ShearEquilibrium eq;
    eq.profile = profile;
    eq.sigma = sigma;
    const std::size_t n = profile->n_points;
    eq.dU.resize(n);
    eq.ddU.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        eq.dU[i] = sigma / profile->mu[i];
        eq.ddU[i] = -sigma * profile->dmu[i] / (profile->mu[i] * profile->mu[i]);
    }
    eq.U = cumulative_simpson(eq.dU, profile->spacing());
    eq.nu = sigma * sigma / mu_max;
    eq.u = sigma / mu_max;

    const double shift = eq.U_at(0.0);
    for (auto& v : eq.U) v -= shift;

    auto interp = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
        std::vector<double>(eq.U), std::vector<double>(profile->y));
    eq.y_guess = std::make_shared<const std::function<double(double)>>(
        [interp](double z) { return (*interp)(z); });
    return eq;
}

double ShearEquilibrium::U_at(double yy) const {
    const auto& p = *profile;
    const double h = p.spacing();
    auto i = static_cast<std::ptrdiff_t>(std::llround((yy + p.half_length) / h));
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(p.n_points) - 1);
    const double y0 = p.y[static_cast<std::size_t>(i)];
    const double s = sigma;
    const double integral = boost::math::quadrature::gauss<double, 15>::integrate(
        [&p, s](double x) { return s / p.at(x).mu; }, y0, yy);
    return U[static_cast<std::size_t>(i)] + integral;
}

double ShearEquilibrium::y_of_z(double z) const {
    const double L = profile->half_length;
    if (z <= z_min()) return -L;
    if (z >= z_max()) return L;
    double yy = std::clamp((*y_guess)(z), -L, L);
    for (int it = 0; it < 4; ++it) {
        const double step = (U_at(yy) - z) * profile->at(yy).mu / sigma;
        yy = std::clamp(yy - step, -L, L);
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(yy))) break;
    }
    return yy;
}

ZCoefficients sample_on_z(const ShearEquilibrium& eq, std::size_t n) {
    const double Lz = 0.5 * (eq.z_max() - eq.z_min());
    const double zc = 0.5 * (eq.z_max() + eq.z_min());
    ZCoefficients c{ZGrid(Lz, n, zc), eq.sigma, eq.nu, eq.u, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, true};
    c.y.resize(n);
    c.a.resize(n);
    c.mu.resize(n);
    c.dmu.resize(n);
    c.d2mu.resize(n);
    c.dlogmu.resize(n);
    c.ddU.resize(n);
    c.da.resize(n);
    c.d2a.resize(n);
    c.dmu_dz.resize(n);
    c.d2mu_dz.resize(n);
    bool uniform = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double yy = (i == 0) ? -eq.profile->half_length : eq.y_of_z(c.grid.node(i));
        const auto s = eq.profile->at(yy);
        const double a = eq.sigma / s.mu;
        const double l1 = s.dmu / s.mu;
        const double l2 = s.d2mu / s.mu - l1 * l1;
        c.y[i] = yy;
        c.a[i] = a;
        c.mu[i] = s.mu;
        c.dmu[i] = s.dmu;
        c.d2mu[i] = s.d2mu;
        c.dlogmu[i] = l1;
        c.ddU[i] = -a * l1;
        c.da[i] = -l1;
        c.d2a[i] = -l2 / a;
        c.dmu_dz[i] = s.dmu / a;
        c.d2mu_dz[i] = (s.d2mu + s.dmu * l1) / (a * a);
        if (s.dmu != 0.0 || s.d2mu != 0.0) uniform = false;
    }
    c.uniform = uniform;
    return c;
}

LocalRates local_rates(const ShearEquilibrium& eq) {
    LocalRates r;
    const auto& mu = eq.profile->mu;
    r.nu_local.resize(mu.size());
    r.rate.resize(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        r.nu_local[i] = mu[i] * eq.dU[i] * eq.dU[i];
        r.rate[i] = std::cbrt(r.nu_local[i]);
    }
    return r;
}

}  // namespace vvd
