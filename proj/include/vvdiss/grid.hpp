#pragma once

/**
 * @file grid.hpp
 * @brief Uniform periodic z-grid, unitary DFT and spectral operators.
 */

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vvd {

using cplx = std::complex<double>;

/**
 * @brief Periodic grid on [center - L, center + L) with n nodes.
 *
 * Frequencies follow the FFT ordering: index j < n/2 maps to j*pi/L,
 * the rest to (j - n)*pi/L. The Nyquist index n/2 carries -n/2*pi/L.
 */
class ZGrid {
public:
    ZGrid(double half_length, std::size_t n, double center = 0.0);

    double half_length() const { return half_length_; }
    double center() const { return center_; }
    std::size_t size() const { return n_; }
    double spacing() const { return 2.0 * half_length_ / static_cast<double>(n_); }
    double node(std::size_t i) const;
    double frequency(std::size_t j) const { return xi_[j]; }

    const std::vector<double>& nodes() const { return z_; }
    const std::vector<double>& frequencies() const { return xi_; }

private:
    double half_length_;
    std::size_t n_;
    double center_;
    std::vector<double> z_;
    std::vector<double> xi_;
};

/**
 * @brief Unitary forward/inverse DFT of fixed length, backed by FFTW.
 *
 * Plans are created once and executed through the new-array interface,
 * so one instance can be shared between threads.
 */
class Dft {
public:
    explicit Dft(std::size_t n);
    ~Dft();
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

    std::size_t size() const { return n_; }

    // in and out must not alias.
    void forward(std::span<const cplx> in, std::span<cplx> out) const;
    void inverse(std::span<const cplx> in, std::span<cplx> out) const;

private:
    std::size_t n_;
    double scale_;
    void* fwd_;
    void* inv_;
};

/// Shared transform for length n (cached for the process lifetime).
const Dft& dft_of_size(std::size_t n);

std::vector<cplx> dft(std::span<const cplx> values);
std::vector<cplx> idft(std::span<const cplx> values);

/// Spectral derivative; the Nyquist coefficient is dropped.
std::vector<cplx> d_dz(const ZGrid& grid, std::span<const cplx> values, int order = 1);

/// sqrt(h * sum w_i |f_i|^2). An empty weight means w = 1.
double weighted_norm(const ZGrid& grid, std::span<const cplx> values,
                     std::span<const double> weight = {});

/// h * sum conj(f_i) g_i
cplx inner(const ZGrid& grid, std::span<const cplx> f, std::span<const cplx> g);

/// Non-unitary Fourier coefficients (1/n) sum f_i exp(-i xi_j (z_i - z_0)).
std::vector<cplx> fourier_coefficients(std::span<const double> values);

}  // namespace vvd
