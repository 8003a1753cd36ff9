#include "vvdiss/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vvdiss/kernels.hpp"

namespace vvd {

namespace {

constexpr double spectral_spread_limit = 4.0;

double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void apply_D(const ZGrid& grid, double kappa, std::span<const cplx> f, std::span<cplx> out) {
    const Dft& F = dft_of_size(grid.size());
    std::vector<cplx> hat(grid.size());
    F.forward(f, hat);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= cplx(0.0, grid.frequency(j) - kappa);
    F.inverse(hat, out);
}

HelmholtzSolver::HelmholtzSolver(const ZGrid& grid, std::vector<double> p, std::vector<double> q, double kappa)
    : grid_(grid), p_(std::move(p)), q_(std::move(q)), kappa_(kappa) {
    const std::size_t n = grid.size();
    if (p_.size() != n) throw std::invalid_argument("HelmholtzSolver: p length mismatch");
    if (q_.size() != n && q_.size() != 1) throw std::invalid_argument("HelmholtzSolver: q length mismatch");
    for (double v : p_) {
        if (!(v > 0.0)) throw std::invalid_argument("HelmholtzSolver: p must be positive");
    }
    for (double v : q_) {
        if (!(v > 0.0)) throw std::invalid_argument("HelmholtzSolver: q must be positive");
    }
    shift_.resize(n);
    for (std::size_t j = 0; j < n; ++j) shift_[j] = grid.frequency(j) - kappa;

    if (spread(p_) <= spectral_spread_limit && spread(q_) <= spectral_spread_limit) {
        const double pm = mean(p_);
        const double qm = mean(q_);
        mean_symbol_.resize(n);
        for (std::size_t j = 0; j < n; ++j) mean_symbol_[j] = pm + qm * shift_[j] * shift_[j];
    } else {
        std::vector<double> qfull = q_.size() == 1 ? std::vector<double>(n, q_[0]) : q_;
        banded_ = std::make_unique<CyclicTridiagonal<cplx>>(assemble_fd(grid, p_, qfull, kappa));
    }
}

CyclicTridiagonal<cplx> HelmholtzSolver::assemble_fd(const ZGrid& grid, std::span<const double> p,
                                                     std::span<const double> q, double kappa) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    std::vector<cplx> sub(n), diag(n), sup(n);
    // qe[j] lives on the edge (j, j+1).
    std::vector<double> qe(n);
    for (std::size_t j = 0; j < n; ++j) qe[j] = 0.5 * (q[j] + q[(j + 1) % n]);
    const double edge_diag = 1.0 / (h * h) + 0.5 * kappa * kappa;
    const cplx edge_off(-1.0 / (h * h), kappa / h);
    for (std::size_t j = 0; j < n; ++j) {
        const double qm = qe[(j + n - 1) % n];
        const double qp = qe[j];
        diag[j] = p[j] + (qm + qp) * edge_diag;
        sup[j] = qp * edge_off;
        sub[j] = qm * std::conj(edge_off);
    }
    return CyclicTridiagonal<cplx>(std::move(sub), std::move(diag), std::move(sup));
}

void HelmholtzSolver::apply(std::span<const cplx> f, std::span<cplx> out) const {
    const std::size_t n = grid_.size();
    const Dft& F = dft_of_size(n);
    std::vector<cplx> hat(n), tmp(n);
    F.forward(f, hat);
    if (q_.size() == 1) {
        for (std::size_t j = 0; j < n; ++j) hat[j] *= q_[0] * shift_[j] * shift_[j];
        F.inverse(hat, out);
    } else {
        for (std::size_t j = 0; j < n; ++j) hat[j] *= cplx(0.0, shift_[j]);
        F.inverse(hat, tmp);
        kernels::multiply(q_, tmp, tmp);
        F.forward(tmp, hat);
        for (std::size_t j = 0; j < n; ++j) hat[j] *= cplx(0.0, -shift_[j]);
        F.inverse(hat, out);
    }
    for (std::size_t i = 0; i < n; ++i) out[i] += p_[i] * f[i];
}

void HelmholtzSolver::precondition(std::span<const cplx> r, std::span<cplx> out) const {
    if (banded_) {
        std::copy(r.begin(), r.end(), out.begin());
        banded_->solve(out);
        return;
    }
    const Dft& F = dft_of_size(grid_.size());
    std::vector<cplx> hat(grid_.size());
    F.forward(r, hat);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] /= mean_symbol_[j];
    F.inverse(hat, out);
}

SolveStats HelmholtzSolver::solve(std::span<const cplx> rhs, std::span<cplx> x, double rtol, int max_iter) const {
    const std::size_t n = grid_.size();
    if (rhs.size() != n || x.size() != n) throw std::invalid_argument("HelmholtzSolver::solve: length mismatch");
    SolveStats st;
    double scale = 0.0;
    for (const auto& v : rhs) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
        std::fill(x.begin(), x.end(), cplx(0.0));
        return st;
    }
    // Work on rhs / scale so that strongly decayed states do not underflow in the inner products.
    const double inv = 1.0 / scale;
    std::vector<cplx> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = rhs[i] * inv;
        x[i] *= inv;
    }
    struct Rescale {
        std::span<cplx> x;
        double scale;
        ~Rescale() {
            for (auto& v : x) v *= scale;
        }
    } rescale{x, scale};

    const double bnorm = std::sqrt(kernels::sum_sq(b));
    std::vector<cplx> r(n), z(n), dir(n), Ad(n);
    apply(x, Ad);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ad[i];
    double rnorm = std::sqrt(kernels::sum_sq(r));
    if (rnorm <= rtol * bnorm) {
        st.relative_residual = rnorm / bnorm;
        return st;
    }
    precondition(r, z);
    dir = z;
    double rz = kernels::dot(r, z).real();
    for (int it = 1; it <= max_iter; ++it) {
        apply(dir, Ad);
        const double dAd = kernels::dot(dir, Ad).real();
        const double alpha = rz / dAd;
        kernels::axpy(alpha, dir, x);
        kernels::axpy(-alpha, Ad, r);
        rnorm = std::sqrt(kernels::sum_sq(r));
        st.iterations = it;
        st.relative_residual = rnorm / bnorm;
        if (rnorm <= rtol * bnorm) return st;
        precondition(r, z);
        const double rz_new = kernels::dot(r, z).real();
        kernels::xpby(z, rz_new / rz, dir);
        rz = rz_new;
    }
    std::ostringstream msg;
    msg << "HelmholtzSolver: no convergence after " << max_iter << " iterations (kappa = " << kappa_
        << ", relative residual " << st.relative_residual << ")";
    throw std::runtime_error(msg.str());
}

}  // namespace vvd
