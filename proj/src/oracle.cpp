#include "vvdiss/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace vvd {

double couette_factor(const CouetteParams& p, double t) {
    if (p.k == 0) throw std::invalid_argument("couette: k = 0 excluded");
    if (!(p.mu > 0.0)) throw std::invalid_argument("couette: mu must be positive");
    if (t < 0.0) throw std::invalid_argument("couette: t must be >= 0");
    const double k = p.k;
    const double s = p.xi - k * t;
    // xi^3 - s^3 = (xi - s)(xi^2 + xi s + s^2) = k t (xi^2 + xi s + s^2)
    const double cubic = t * (p.xi * p.xi + p.xi * s + s * s) / 3.0;
    return std::exp(-p.mu * (k * k * t + p.shear * p.shear * cubic));
}

cplx couette_exact(const CouetteParams& p, double t, cplx W0_hat) { return W0_hat * couette_factor(p, t); }

std::vector<cplx> couette_evolve(const ZGrid& grid, double mu, int k, double t, std::span<const cplx> W0,
                                 double shear) {
    auto hat = dft(W0);
    for (std::size_t j = 0; j < hat.size(); ++j) {
        hat[j] *= couette_factor(CouetteParams{mu, k, grid.frequency(j), shear}, t);
    }
    return idft(hat);
}

}  // namespace vvd
