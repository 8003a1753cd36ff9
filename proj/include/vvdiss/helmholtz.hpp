#pragma once

/**
 * @file helmholtz.hpp
 * @brief Hermitian positive definite systems  p f - D(q D f) = r  on the
 * periodic z-grid, with D = d/dz - i kappa applied spectrally.
 *
 * Solved by preconditioned conjugate gradients. The preconditioner is the
 * exact inverse of the mean-coefficient operator when p and q vary little,
 * otherwise a second-order finite-difference version of the operator
 * factored as a cyclic tridiagonal matrix.
 */

#include <memory>
#include <span>
#include <vector>

#include "vvdiss/banded.hpp"
#include "vvdiss/grid.hpp"

namespace vvd {

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

class HelmholtzSolver {
public:
    // q may hold a single value for a constant coefficient.
    HelmholtzSolver(const ZGrid& grid, std::vector<double> p, std::vector<double> q, double kappa);

    void apply(std::span<const cplx> f, std::span<cplx> out) const;
    void precondition(std::span<const cplx> r, std::span<cplx> out) const;

    // x holds the initial guess on entry.
    SolveStats solve(std::span<const cplx> rhs, std::span<cplx> x, double rtol = 1e-12, int max_iter = 2000) const;

    bool banded_preconditioner() const { return banded_ != nullptr; }

    /// The finite-difference matrix used by the banded preconditioner.
    static CyclicTridiagonal<cplx> assemble_fd(const ZGrid& grid, std::span<const double> p,
                                                std::span<const double> q, double kappa);

private:
    const ZGrid& grid_;
    std::vector<double> p_, q_;
    double kappa_;
    std::vector<double> shift_;  // xi_j - kappa
    std::vector<double> mean_symbol_;
    std::unique_ptr<CyclicTridiagonal<cplx>> banded_;
};

/// Applies D = d/dz - i kappa spectrally.
void apply_D(const ZGrid& grid, double kappa, std::span<const cplx> f, std::span<cplx> out);

}  // namespace vvd
