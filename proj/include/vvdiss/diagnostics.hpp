#pragma once

/**
 * @file diagnostics.hpp
 * @brief Energies, dissipation functionals and the checks run on traces.
 */

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vvdiss/dynamics.hpp"
#include "vvdiss/multiplier.hpp"
#include "vvdiss/partition.hpp"

namespace vvd {

/// h * sum |W|^2
double energy_L2(const ZGrid& grid, std::span<const cplx> W);
/// |A W|^2
double energy_EA(const MultiplierTable& table, const ZGrid& grid, int k, double t, std::span<const cplx> W);

/// Multiplier tables and cutoffs on the z-grid for the localized energy.
struct LocalizedTables {
    std::vector<MultiplierTable> tables;
    std::vector<std::vector<double>> chi;  // chi_j(y(z_i))
};

LocalizedTables make_localized_tables(const ShearEquilibrium& eq, const Partition& part,
                                      const ZCoefficients& coeffs);

/// sum_j |A_j chi_j W|^2
double energy_EA(const LocalizedTables& loc, const ZGrid& grid, int k, double t, std::span<const cplx> W);

/// |chi_j W|^2 for every j.
std::vector<double> localized_energies(const LocalizedTables& loc, const ZGrid& grid, std::span<const cplx> W);

struct DissipationParts {
    double d1 = 0.0;  // |(mu U'^2)^(1/6) W|^2
    double d2 = 0.0;  // |sqrt(mu) U' D W|^2
    double d3 = 0.0;  // |sqrt(U') v|^2, v = (V1, V2)
    double thm() const { return d1 + d3; }
    double full() const { return d1 + d2 + d3; }
};

DissipationParts dissipation_phys(const ModeDynamics& dyn, double t, std::span<const cplx> W);
DissipationParts dissipation_phys(const ModeDynamics& dyn, double t, std::span<const cplx> W,
                                  const StreamPair& sp);

/// <A W, w A W> with the frequency weight of the given variant.
double dissipation_freq(const MultiplierTable& table, const ZGrid& grid, int k, double t,
                        std::span<const cplx> W, WeightVariant v);

/// |A d_z^l W|^2 for l = 0..N.
std::vector<double> hn_terms(const MultiplierTable& table, const ZGrid& grid, int k, double t,
                             std::span<const cplx> W, int N);

/// sum_l c_l terms_l
double energy_HN(std::span<const double> terms, std::span<const double> c);

/// c_l = rho^l
std::vector<double> ladder_coefficients(double rho, int N);

struct LadderResult {
    bool found = false;
    double rho = 0.0;
    std::vector<double> c;
    // For the last rho tried when none works: sample index and the term
    // whose increase is largest there.
    std::size_t violating_sample = 0;
    int violating_term = -1;
    double worst_increase = 0.0;
};

/**
 * @brief Largest rho in {1, 0.1, ..., 1e-6} for which sum rho^l T_l is
 * nonincreasing along a calibration run, up to slack * E_N(0).
 * terms[s][l] holds |A d_z^l W|^2 at sample s.
 */
LadderResult find_coefficients(const std::vector<std::vector<double>>& terms, int N, double slack = 1e-8);

struct MonotoneReport {
    std::size_t violations = 0;
    double worst_increase = 0.0;  // largest value[i+1] - value[i]
    std::size_t worst_index = 0;
    bool pass = true;
};

MonotoneReport check_nonincreasing(std::span<const double> values, double slack);

struct LyapunovReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_excess = -std::numeric_limits<double>::infinity();  // max of dE/dt + rate*D - slack
    double worst_t = 0.0;
    bool pass = true;
};

/**
 * @brief Centered-difference check of dE/dt <= -rate * D + slack at every
 * interior sample.
 */
LyapunovReport check_lyapunov(std::span<const double> t, std::span<const double> E, std::span<const double> D,
                              double rate, double slack);

struct RateFit {
    double rate = 0.0;  // minus the slope of log E
    double r2 = 1.0;
    double t0 = 0.0, t1 = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log E over samples with t0 <= t <= t1.
RateFit fit_rate(std::span<const double> t, std::span<const double> E, double t0, double t1);

/// Window between the first times E drops below E(0) e^(-lo) and E(0) e^(-hi).
std::pair<double, double> window_by_levels(std::span<const double> t, std::span<const double> E, double lo,
                                           double hi);

struct DecayWindow {
    std::size_t first = 0, last = 0;
    double t0 = 0.0, t1 = 0.0;
    double worst_ratio = 0.0;  // max of E(t) / bound(t); pass iff <= 1
    bool pass = true;
};

struct LocalizedDecayReport {
    double theta = 0.0;
    double min_rate = 0.0;  // min over M of (mu U'^2)^(1/3)
    std::vector<DecayWindow> windows;
    bool pass = true;
};

/**
 * @brief On every maximal run of samples where E_M >= theta E, checks
 * E(t) <= exp(-0.001 theta min_rate (t - t1)) E(t1), t1 the run start.
 */
LocalizedDecayReport check_localized_decay(std::span<const double> t, std::span<const double> E,
                                           std::span<const double> E_M, double theta, double min_rate);

/// h * sum over nodes with y(z_i) in any [lo, hi] of |W|^2.
double region_energy(const ZCoefficients& coeffs, const std::vector<std::pair<double, double>>& region,
                     std::span<const cplx> W);

/// min over the region of (mu U'^2)^(1/3), from the profile grid.
double region_min_rate(const ShearEquilibrium& eq, const std::vector<std::pair<double, double>>& region);

}  // namespace vvd
