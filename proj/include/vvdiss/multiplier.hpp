#pragma once

/**
 * @file multiplier.hpp
 * @brief Time-dependent Fourier multiplier m(t, k, xi) and the diagonal
 * operator A it defines on one x-mode.
 *
 * m decays only while the frequency sits in the resonant window
 * |xi/k - t| < G, at rate nu^(1/3) + u / (1 + u^2 (xi/k - t)^2), starting
 * from m = 1 in the far past.
 */

#include <span>
#include <string>
#include <vector>

#include "vvdiss/grid.hpp"

namespace vvd {

struct MultiplierTable {
    double nu;  // inf mu U'^2
    double u;   // inf U'
    double G;   // 0.1 nu^(-1/3)
    double c;   // value after leaving the window
};

MultiplierTable make_multiplier_table(double nu, double u);

double m_value(const MultiplierTable& table, double t, int k, double xi);

/// m at every grid frequency (OpenMP loop).
void m_values(const MultiplierTable& table, double t, int k, std::span<const double> xi, std::span<double> out);
/// Serial reference of m_values.
void m_values_serial(const MultiplierTable& table, double t, int k, std::span<const double> xi,
                     std::span<double> out);

std::vector<cplx> apply_A(const MultiplierTable& table, const ZGrid& grid, int k, double t,
                          std::span<const cplx> W);
/// Multiplies by 1/m; undoes apply_A.
std::vector<cplx> apply_A_inverse(const MultiplierTable& table, const ZGrid& grid, int k, double t,
                                  std::span<const cplx> W);

std::vector<bool> bad_set_indicator(const MultiplierTable& table, double t, int k, std::span<const double> xi);

enum class WeightVariant { A, B };

WeightVariant parse_weight_variant(const std::string& name);
std::string to_string(WeightVariant v);

/// Variant A: nu^(1/3) + nu (xi-kt)^2 + 1/(1 + u^2 (xi-kt)^2)
/// Variant B: nu^(1/3) + nu (xi-kt)^2 + u/(1 + u^2 (xi/k-t)^2)
double weight_value(const MultiplierTable& table, WeightVariant v, double t, int k, double xi);

std::vector<cplx> apply_weight(const MultiplierTable& table, const ZGrid& grid, int k, double t,
                               std::span<const cplx> W, WeightVariant v);

}  // namespace vvd
