#pragma once

/**
 * @file banded.hpp
 * @brief Cyclic tridiagonal solver: Thomas factorization plus a
 * Sherman-Morrison correction for the two corner entries.
 *
 * Row i reads  sub[i]*x[i-1] + diag[i]*x[i] + sup[i]*x[i+1] = r[i]
 * with indices taken mod n, so sub[0] is the (0, n-1) corner and
 * sup[n-1] the (n-1, 0) corner.
 */

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace vvd {

template <class T>
class CyclicTridiagonal {
public:
    CyclicTridiagonal(std::vector<T> sub, std::vector<T> diag, std::vector<T> sup)
        : n_(diag.size()), sub_(std::move(sub)), sup_(std::move(sup)) {
        if (n_ < 3) throw std::invalid_argument("CyclicTridiagonal: need n >= 3");
        if (sub_.size() != n_ || sup_.size() != n_) {
            throw std::invalid_argument("CyclicTridiagonal: band length mismatch");
        }
        beta_ = sub_[0];        // A(0, n-1)
        alpha_ = sup_[n_ - 1];  // A(n-1, 0)
        gamma_ = -diag[0];
        if (std::abs(gamma_) == 0.0) gamma_ = T(1);
        diag[0] -= gamma_;
        diag[n_ - 1] -= alpha_ * beta_ / gamma_;

        // Thomas elimination of the reduced tridiagonal part.
        inv_piv_.resize(n_);
        cprime_.resize(n_);
        T piv = diag[0];
        for (std::size_t i = 0; i < n_; ++i) {
            if (i > 0) piv = diag[i] - sub_[i] * cprime_[i - 1];
            if (std::abs(piv) == 0.0) throw std::runtime_error("CyclicTridiagonal: zero pivot");
            inv_piv_[i] = T(1) / piv;
            cprime_[i] = (i + 1 < n_) ? sup_[i] * inv_piv_[i] : T(0);
        }

        corr_.assign(n_, T(0));
        corr_[0] = gamma_;
        corr_[n_ - 1] = alpha_;
        tridiag_solve(corr_);
        denom_ = T(1) + corr_[0] + beta_ * corr_[n_ - 1] / gamma_;
        if (std::abs(denom_) == 0.0) throw std::runtime_error("CyclicTridiagonal: singular matrix");
    }

    std::size_t size() const { return n_; }

    // Solves in place.
    void solve(std::span<T> x) const {
        if (x.size() != n_) throw std::invalid_argument("CyclicTridiagonal: rhs length mismatch");
        tridiag_solve(x);
        const T fact = (x[0] + beta_ * x[n_ - 1] / gamma_) / denom_;
        for (std::size_t i = 0; i < n_; ++i) x[i] -= fact * corr_[i];
    }

    std::vector<T> solve(std::span<const T> rhs) const {
        std::vector<T> x(rhs.begin(), rhs.end());
        solve(std::span<T>(x));
        return x;
    }

private:
    template <class V>
    void tridiag_solve(V& x) const {
        x[0] *= inv_piv_[0];
        for (std::size_t i = 1; i < n_; ++i) x[i] = (x[i] - sub_[i] * x[i - 1]) * inv_piv_[i];
        for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= cprime_[i] * x[i + 1];
    }

    std::size_t n_;
    std::vector<T> sub_, sup_;
    std::vector<T> inv_piv_, cprime_, corr_;
    T alpha_{}, beta_{}, gamma_{}, denom_{};
};

}  // namespace vvd
