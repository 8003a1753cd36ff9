#include "vvdiss/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "vvdiss/kernels.hpp"

namespace vvd {

namespace {

// out = D^2 f spectrally
void apply_D2(const ZGrid& grid, double kappa, std::span<const cplx> f, std::span<cplx> out) {
    const Dft& F = dft_of_size(grid.size());
    std::vector<cplx> hat(grid.size());
    F.forward(f, hat);
    for (std::size_t j = 0; j < hat.size(); ++j) {
        const double s = grid.frequency(j) - kappa;
        hat[j] *= -s * s;
    }
    F.inverse(hat, out);
}

}  // namespace

ModeDynamics::ModeDynamics(std::shared_ptr<const ZCoefficients> coeffs, int k, StepperOptions opts)
    : c_(std::move(coeffs)), k_(k), opts_(opts) {
    if (!c_) throw std::invalid_argument("ModeDynamics: null coefficients");
    if (k == 0) throw std::invalid_argument("ModeDynamics: k = 0 has no stream function; use MeanModeSolver");
    inv_a_.resize(c_->a.size());
    for (std::size_t i = 0; i < inv_a_.size(); ++i) inv_a_[i] = 1.0 / c_->a[i];
}

bool ModeDynamics::k_flagged() const {
    const double kk = static_cast<double>(k_) * k_;
    return c_->nu * kk >= 1e-3 * std::cbrt(c_->nu);
}

StreamPair ModeDynamics::solve_stream(double t, std::span<const cplx> W) const {
    const auto& g = c_->grid;
    const std::size_t n = g.size();
    if (W.size() != n) throw std::invalid_argument("solve_stream: length mismatch");
    const double kappa = k_ * t;
    const double kk = static_cast<double>(k_) * k_;

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = kk * inv_a_[i];
    HelmholtzSolver solver(g, std::move(p), c_->a, kappa);

    StreamPair sp;
    std::vector<cplx> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = -W[i] * inv_a_[i];
    sp.phi.assign(n, cplx(0.0));
    sp.stats = solver.solve(b, sp.phi, opts_.rtol, opts_.max_iter);

    sp.V1.resize(n);
    apply_D(g, kappa, sp.phi, sp.V1);
    for (std::size_t i = 0; i < n; ++i) sp.V1[i] *= -c_->a[i];
    sp.V2.resize(n);
    const cplx ik(0.0, static_cast<double>(k_));
    for (std::size_t i = 0; i < n; ++i) sp.V2[i] = ik * sp.phi[i];

    auto hat = dft(W);
    const double u2 = c_->u * c_->u;
    for (std::size_t j = 0; j < n; ++j) {
        const double s = g.frequency(j) - kappa;
        hat[j] /= -(kk + u2 * s * s);
    }
    sp.psi = idft(hat);

    ++monitor_.solves;
    monitor_.max_iterations = std::max(monitor_.max_iterations, sp.stats.iterations);
    if (opts_.monitor_comparison) {
        const auto [lhs, rhs2] = comparison_norms(t, sp);
        const double excess = (std::sqrt(lhs) - std::sqrt(rhs2)) / std::sqrt(rhs2);
        if (rhs2 > 0.0 && excess > monitor_.worst_comparison) {
            monitor_.worst_comparison = excess;
            monitor_.worst_comparison_t = t;
        }
    }
    return sp;
}

std::pair<double, double> ModeDynamics::comparison_norms(double t, const StreamPair& sp) const {
    const auto& g = c_->grid;
    const std::size_t n = g.size();
    const double kappa = k_ * t;
    const double kk = static_cast<double>(k_) * k_;
    std::vector<cplx> Dphi(n), Dpsi(n);
    apply_D(g, kappa, sp.phi, Dphi);
    apply_D(g, kappa, sp.psi, Dpsi);
    std::vector<double> a2(n);
    for (std::size_t i = 0; i < n; ++i) a2[i] = c_->a[i] * c_->a[i];
    const double h = g.spacing();
    const double lhs = h * (kk * kernels::sum_sq(sp.phi) + kernels::weighted_sum_sq(a2, Dphi));
    const double rhs2 = h * (kk * kernels::sum_sq(sp.psi) + c_->u * c_->u * kernels::sum_sq(Dpsi));
    return {lhs, rhs2};
}

std::vector<cplx> ModeDynamics::stream_operator(double t, std::span<const cplx> phi) const {
    const auto& g = c_->grid;
    const std::size_t n = g.size();
    const double kappa = k_ * t;
    std::vector<cplx> tmp(n), out(n);
    apply_D(g, kappa, phi, tmp);
    kernels::multiply(c_->a, tmp, tmp);
    apply_D(g, kappa, tmp, out);
    const double kk = static_cast<double>(k_) * k_;
    for (std::size_t i = 0; i < n; ++i) out[i] = c_->a[i] * out[i] - kk * phi[i];
    return out;
}

std::vector<cplx> ModeDynamics::apply_L(double t, std::span<const cplx> W) const {
    const auto& g = c_->grid;
    const std::size_t n = g.size();
    std::vector<cplx> out(n);
    apply_D2(g, k_ * t, W, out);
    const double kk = static_cast<double>(k_) * k_;
    for (std::size_t i = 0; i < n; ++i) out[i] = c_->sigma * c_->a[i] * out[i] - kk * c_->mu[i] * W[i];
    return out;
}

std::vector<cplx> ModeDynamics::lower_order(double t, std::span<const cplx> W) const {
    const auto& g = c_->grid;
    const std::size_t n = g.size();
    std::vector<cplx> out(n, cplx(0.0));
    if (c_->uniform) return out;
    const double kappa = k_ * t;
    const double kk = static_cast<double>(k_) * k_;
    const cplx ik(0.0, static_cast<double>(k_));

    const auto sp = solve_stream(t, W);
    std::vector<cplx> tmp(n), dd(n);
    apply_D(g, kappa, sp.V1, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] *= c_->sigma * c_->dlogmu[i];
    apply_D(g, kappa, tmp, dd);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = c_->ddU[i] * sp.V2[i] + kk * c_->dmu[i] * sp.V1[i] - c_->a[i] * dd[i] -
                 ik * c_->d2mu[i] * sp.V2[i];
    }
    return out;
}

std::vector<cplx> ModeDynamics::rhs(double t, std::span<const cplx> W) const {
    auto out = apply_L(t, W);
    if (!c_->uniform) {
        const auto nl = lower_order(t, W);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += nl[i];
    }
    return out;
}

void ModeDynamics::step(ModeState& s, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const auto& g = c_->grid;
    const std::size_t n = g.size();
    if (s.W.size() != n) throw std::invalid_argument("step: state length mismatch");
    if (s.k != k_) throw std::invalid_argument("step: state k does not match the operator");

    const double th = s.t + 0.5 * dt;
    const double kk = static_cast<double>(k_) * k_;

    auto explicit_part = apply_L(th, s.W);
    for (std::size_t i = 0; i < n; ++i) explicit_part[i] = s.W[i] + 0.5 * dt * explicit_part[i];

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (1.0 + 0.5 * dt * kk * c_->mu[i]) * inv_a_[i];
    HelmholtzSolver cn(g, std::move(p), std::vector<double>{0.5 * dt * c_->sigma}, k_ * th);

    std::vector<cplx> b(n);
    std::vector<cplx> next(s.W);
    if (c_->uniform) {
        for (std::size_t i = 0; i < n; ++i) b[i] = explicit_part[i] * inv_a_[i];
        cn.solve(b, next, opts_.rtol, opts_.max_iter);
    } else {
        const auto n0 = lower_order(s.t, s.W);
        for (std::size_t i = 0; i < n; ++i) b[i] = (explicit_part[i] + dt * n0[i]) * inv_a_[i];
        cn.solve(b, next, opts_.rtol, opts_.max_iter);
        const auto n1 = lower_order(s.t + dt, next);
        for (std::size_t i = 0; i < n; ++i) b[i] = (explicit_part[i] + 0.5 * dt * (n0[i] + n1[i])) * inv_a_[i];
        cn.solve(b, next, opts_.rtol, opts_.max_iter);
    }
    for (const auto& v : next) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::runtime_error("step: non-finite state at t = " + std::to_string(s.t + dt));
        }
    }
    s.W = std::move(next);
    s.t += dt;
}

StreamPair solve_stream(std::shared_ptr<const ZCoefficients> coeffs, int k, double t, std::span<const cplx> W) {
    return ModeDynamics(std::move(coeffs), k).solve_stream(t, W);
}

std::vector<cplx> rhs(std::shared_ptr<const ZCoefficients> coeffs, int k, double t, std::span<const cplx> W) {
    return ModeDynamics(std::move(coeffs), k).rhs(t, W);
}

void step_imex(std::shared_ptr<const ZCoefficients> coeffs, ModeState& state, double dt) {
    ModeDynamics(std::move(coeffs), state.k).step(state, dt);
}

}  // namespace vvd
