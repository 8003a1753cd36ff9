#pragma once

/**
 * @file oracle.hpp
 * @brief Closed-form moving-frame solution for constant viscosity with
 * linear shear U(y) = shear * y. Independent of the time stepper.
 */

#include <span>
#include <vector>

#include "vvdiss/grid.hpp"

namespace vvd {

struct CouetteParams {
    double mu;
    int k;
    double xi;
    double shear = 1.0;
};

/// exp(-mu [k^2 t + shear^2 (xi^3 - (xi - k t)^3) / (3k)])
double couette_factor(const CouetteParams& p, double t);
cplx couette_exact(const CouetteParams& p, double t, cplx W0_hat);

/// Applies the factor to every DFT coefficient of W0 on the grid.
std::vector<cplx> couette_evolve(const ZGrid& grid, double mu, int k, double t, std::span<const cplx> W0,
                                 double shear = 1.0);

}  // namespace vvd
