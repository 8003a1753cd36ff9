#include "vvdiss/multiplier.hpp"

#include <cmath>
#include <stdexcept>

namespace vvd {

namespace {

void require_k(int k) {
    if (k == 0) throw std::invalid_argument("multiplier: k = 0 is excluded");
}

}  // namespace

MultiplierTable make_multiplier_table(double nu, double u) {
    if (!(nu > 0.0) || !(u > 0.0)) throw std::invalid_argument("multiplier table: nu and u must be positive");
    const double G = 0.1 * std::pow(nu, -1.0 / 3.0);
    const double c = std::exp(-0.2 - 2.0 * std::atan(u * G));
    return MultiplierTable{nu, u, G, c};
}

double m_value(const MultiplierTable& tb, double t, int k, double xi) {
    require_k(k);
    const double s = xi / static_cast<double>(k);
    if (t <= s - tb.G) return 1.0;
    if (t >= s + tb.G) return tb.c;
    const double expo = std::cbrt(tb.nu) * (t - s + tb.G) + std::atan(tb.u * (t - s)) + std::atan(tb.u * tb.G);
    return std::exp(-expo);
}

void m_values(const MultiplierTable& tb, double t, int k, std::span<const double> xi, std::span<double> out) {
    require_k(k);
    if (xi.size() != out.size()) throw std::invalid_argument("m_values: length mismatch");
    const auto n = static_cast<std::ptrdiff_t>(xi.size());
#pragma omp parallel for schedule(static) if (n >= 8192)
    for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = m_value(tb, t, k, xi[j]);
}

void m_values_serial(const MultiplierTable& tb, double t, int k, std::span<const double> xi,
                     std::span<double> out) {
    require_k(k);
    if (xi.size() != out.size()) throw std::invalid_argument("m_values: length mismatch");
    for (std::size_t j = 0; j < xi.size(); ++j) out[j] = m_value(tb, t, k, xi[j]);
}

std::vector<cplx> apply_A(const MultiplierTable& tb, const ZGrid& grid, int k, double t,
                          std::span<const cplx> W) {
    auto hat = dft(W);
    std::vector<double> m(grid.size());
    m_values(tb, t, k, grid.frequencies(), m);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= m[j];
    return idft(hat);
}

std::vector<cplx> apply_A_inverse(const MultiplierTable& tb, const ZGrid& grid, int k, double t,
                                  std::span<const cplx> W) {
    auto hat = dft(W);
    std::vector<double> m(grid.size());
    m_values(tb, t, k, grid.frequencies(), m);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] /= m[j];
    return idft(hat);
}

std::vector<bool> bad_set_indicator(const MultiplierTable& tb, double t, int k, std::span<const double> xi) {
    require_k(k);
    std::vector<bool> bad(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) bad[j] = std::abs(xi[j] / k - t) < tb.G;
    return bad;
}

WeightVariant parse_weight_variant(const std::string& name) {
    if (name == "A") return WeightVariant::A;
    if (name == "B") return WeightVariant::B;
    throw std::invalid_argument("unknown weight variant: " + name);
}

std::string to_string(WeightVariant v) { return v == WeightVariant::A ? "A" : "B"; }

double weight_value(const MultiplierTable& tb, WeightVariant v, double t, int k, double xi) {
    require_k(k);
    const double shifted = xi - k * t;
    const double base = std::cbrt(tb.nu) + tb.nu * shifted * shifted;
    if (v == WeightVariant::A) return base + 1.0 / (1.0 + tb.u * tb.u * shifted * shifted);
    const double s = xi / k - t;
    return base + tb.u / (1.0 + tb.u * tb.u * s * s);
}

std::vector<cplx> apply_weight(const MultiplierTable& tb, const ZGrid& grid, int k, double t,
                               std::span<const cplx> W, WeightVariant v) {
    auto hat = dft(W);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= weight_value(tb, v, t, k, grid.frequency(j));
    return idft(hat);
}

}  // namespace vvd
