#include "vvdiss/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "vvdiss/kernels.hpp"

namespace vvd {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

}  // namespace

ZGrid::ZGrid(double half_length, std::size_t n, double center)
    : half_length_(half_length), n_(n), center_(center) {
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw std::invalid_argument("ZGrid: half length must be positive");
    }
    if (n < 4 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("ZGrid: n must be a power of two >= 4");
    }
    z_.resize(n);
    xi_.resize(n);
    const double dk = std::numbers::pi / half_length;
    for (std::size_t i = 0; i < n; ++i) {
        z_[i] = node(i);
        const auto j = static_cast<double>(i);
        xi_[i] = (i < n / 2) ? j * dk : (j - static_cast<double>(n)) * dk;
    }
}

double ZGrid::node(std::size_t i) const {
    return center_ - half_length_ + static_cast<double>(i) * spacing();
}

Dft::Dft(std::size_t n) : n_(n), scale_(1.0 / std::sqrt(static_cast<double>(n))) {
    if (n == 0) throw std::invalid_argument("Dft: zero length");
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD, flags);
    inv_ = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
    if (!fwd_ || !inv_) throw std::runtime_error("Dft: FFTW plan creation failed");
}

Dft::~Dft() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void Dft::forward(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("Dft: length mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), as_fftw(in.data()), as_fftw(out.data()));
    kernels::scale(scale_, out);
}

void Dft::inverse(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("Dft: length mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(inv_), as_fftw(in.data()), as_fftw(out.data()));
    kernels::scale(scale_, out);
}

const Dft& dft_of_size(std::size_t n) {
    static std::mutex cache_mutex;
    static std::map<std::size_t, std::unique_ptr<Dft>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Dft>(n);
    return *slot;
}

std::vector<cplx> dft(std::span<const cplx> values) {
    std::vector<cplx> out(values.size());
    dft_of_size(values.size()).forward(values, out);
    return out;
}

std::vector<cplx> idft(std::span<const cplx> values) {
    std::vector<cplx> out(values.size());
    dft_of_size(values.size()).inverse(values, out);
    return out;
}

std::vector<cplx> d_dz(const ZGrid& grid, std::span<const cplx> values, int order) {
    if (values.size() != grid.size()) throw std::invalid_argument("d_dz: length mismatch");
    if (order < 0) throw std::invalid_argument("d_dz: negative order");
    auto hat = dft(values);
    const std::size_t n = grid.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (order % 2 == 1 && j == n / 2) {
            hat[j] = 0.0;
            continue;
        }
        hat[j] *= std::pow(cplx(0.0, grid.frequency(j)), order);
    }
    return idft(hat);
}

double weighted_norm(const ZGrid& grid, std::span<const cplx> values, std::span<const double> weight) {
    if (values.size() != grid.size()) throw std::invalid_argument("weighted_norm: length mismatch");
    if (weight.empty()) return std::sqrt(grid.spacing() * kernels::sum_sq(values));
    if (weight.size() != values.size()) throw std::invalid_argument("weighted_norm: weight length mismatch");
    for (double w : weight) {
        if (w < 0.0) throw std::invalid_argument("weighted_norm: negative weight");
    }
    return std::sqrt(grid.spacing() * kernels::weighted_sum_sq(weight, values));
}

cplx inner(const ZGrid& grid, std::span<const cplx> f, std::span<const cplx> g) {
    return grid.spacing() * kernels::dot(f, g);
}

std::vector<cplx> fourier_coefficients(std::span<const double> values) {
    std::vector<cplx> in(values.begin(), values.end());
    auto out = dft(in);
    const double s = 1.0 / std::sqrt(static_cast<double>(values.size()));
    for (auto& c : out) c *= s;
    return out;
}

}  // namespace vvd
