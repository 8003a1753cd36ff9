#pragma once

/**
 * @file dynamics.hpp
 * @brief Per-mode evolution of the moving-frame vorticity W_k(t, z).
 *
 *   dW/dt = L W + N W
 *   L f  = -k^2 mu f + a D(mu a D f)          (= -k^2 mu f + sigma a D^2 f)
 *   N f  = U'' V2 + k^2 mu' V1 - a D(mu' a D V1) - i k mu'' V2
 *
 * with D = d/dz - i k t, a = U' and the stream function phi solving
 * (-k^2 + a D(a D)) phi = W, V1 = -a D phi, V2 = i k phi. The primes on mu
 * are y-derivatives evaluated at y(z).
 */

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vvdiss/helmholtz.hpp"
#include "vvdiss/profiles.hpp"

namespace vvd {

struct ModeState {
    int k = 1;
    double t = 0.0;
    std::vector<cplx> W;
    std::uint64_t provenance = 0;
};

struct StreamPair {
    std::vector<cplx> phi;  // variable-coefficient stream function
    std::vector<cplx> psi;  // constant-coefficient comparison, u = inf U'
    std::vector<cplx> V1, V2;
    SolveStats stats;
};

/// Running record of every stream solve made by a ModeDynamics.
struct StreamMonitor {
    long solves = 0;
    int max_iterations = 0;
    // max over solves of (|grad_t phi| - |(k, u D) psi|) / |(k, u D) psi|
    double worst_comparison = -1.0;
    double worst_comparison_t = 0.0;
};

struct StepperOptions {
    double rtol = 1e-12;
    int max_iter = 2000;
    bool monitor_comparison = true;
};

class ModeDynamics {
public:
    ModeDynamics(std::shared_ptr<const ZCoefficients> coeffs, int k, StepperOptions opts = {});

    const ZCoefficients& coefficients() const { return *c_; }
    const ZGrid& grid() const { return c_->grid; }
    int k() const { return k_; }

    StreamPair solve_stream(double t, std::span<const cplx> W) const;
    /// (-k^2 + a D(a D)) phi, used to check stream solves.
    std::vector<cplx> stream_operator(double t, std::span<const cplx> phi) const;

    std::vector<cplx> apply_L(double t, std::span<const cplx> W) const;
    std::vector<cplx> lower_order(double t, std::span<const cplx> W) const;
    std::vector<cplx> rhs(double t, std::span<const cplx> W) const;

    /// Crank-Nicolson on L at the half step, Heun on N.
    void step(ModeState& s, double dt) const;

    /// True when nu k^2 >= 0.001 nu^(1/3), outside the range the estimates cover.
    bool k_flagged() const;

    const StreamMonitor& monitor() const { return monitor_; }

    /// |grad_t phi|^2 and |(k, u D) psi|^2 for a stream pair.
    std::pair<double, double> comparison_norms(double t, const StreamPair& sp) const;

private:
    std::shared_ptr<const ZCoefficients> c_;
    int k_;
    StepperOptions opts_;
    std::vector<double> inv_a_;
    mutable StreamMonitor monitor_;
};

StreamPair solve_stream(std::shared_ptr<const ZCoefficients> coeffs, int k, double t, std::span<const cplx> W);
std::vector<cplx> rhs(std::shared_ptr<const ZCoefficients> coeffs, int k, double t, std::span<const cplx> W);
void step_imex(std::shared_ptr<const ZCoefficients> coeffs, ModeState& state, double dt);

/**
 * @brief Crank-Nicolson for the x-averaged vorticity, d_t w = d_yy(mu w),
 * on a periodic y-grid (conservative second-order differences).
 */
class MeanModeSolver {
public:
    MeanModeSolver(std::vector<double> mu, double h);
    /// Uses the profile's closed grid without its duplicated end point.
    explicit MeanModeSolver(const ViscosityProfile& profile);

    std::vector<double> step(std::span<const double> omega, double dt) const;
    std::size_t size() const { return mu_.size(); }

private:
    std::vector<double> mu_;
    double h_;
};

std::vector<double> step_mean(const ViscosityProfile& profile, std::span<const double> omega, double dt);

}  // namespace vvd
