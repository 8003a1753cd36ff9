#include <stdexcept>

#include "vvdiss/banded.hpp"
#include "vvdiss/dynamics.hpp"

namespace vvd {

MeanModeSolver::MeanModeSolver(std::vector<double> mu, double h) : mu_(std::move(mu)), h_(h) {
    if (mu_.size() < 3) throw std::invalid_argument("MeanModeSolver: need at least 3 points");
    if (!(h > 0.0)) throw std::invalid_argument("MeanModeSolver: spacing must be positive");
}

MeanModeSolver::MeanModeSolver(const ViscosityProfile& profile)
    : MeanModeSolver(std::vector<double>(profile.mu.begin(), profile.mu.end() - 1), profile.spacing()) {}

std::vector<double> MeanModeSolver::step(std::span<const double> omega, double dt) const {
    const std::size_t n = mu_.size();
    if (omega.size() != n) throw std::invalid_argument("MeanModeSolver::step: length mismatch");
    const double r = 0.5 * dt / (h_ * h_);
    std::vector<double> rhs(n), sub(n), diag(n), sup(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jm = (j + n - 1) % n;
        const std::size_t jp = (j + 1) % n;
        rhs[j] = omega[j] + r * (mu_[jm] * omega[jm] - 2.0 * mu_[j] * omega[j] + mu_[jp] * omega[jp]);
        sub[j] = -r * mu_[jm];
        diag[j] = 1.0 + 2.0 * r * mu_[j];
        sup[j] = -r * mu_[jp];
    }
    CyclicTridiagonal<double> m(std::move(sub), std::move(diag), std::move(sup));
    m.solve(std::span<double>(rhs));
    return rhs;
}

std::vector<double> step_mean(const ViscosityProfile& profile, std::span<const double> omega, double dt) {
    return MeanModeSolver(profile).step(omega, dt);
}

}  // namespace vvd
