#pragma once

/**
 * @file partition.hpp
 * @brief Greedy interval partition of [-L_y, L_y] on which mu is comparable
 * to a constant, a smooth partition of unity chi_j^2 subordinate to it, and
 * per-interval frozen profiles mu_j.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "vvdiss/profiles.hpp"

namespace vvd {

struct Interval {
    std::size_t ilo, ihi;  // closed-grid indices of the end points
    double lo, hi;
    double ratio3;  // sup/inf of mu over the tripled interval (clipped to the domain)

    double length() const { return hi - lo; }
};

struct PartitionOptions {
    double ratio_limit = 50.0;
    double max_length = 1000.0;
    double min_length = 1.0;
};

class Partition {
public:
    std::vector<Interval> intervals;
    // Transition half-width at boundary b (b = 0..J); zero at the domain edges.
    std::vector<double> halfwidth;
    double domain_lo = 0.0, domain_hi = 0.0;

    std::size_t size() const { return intervals.size(); }
    double bump(std::size_t j, double y) const;
    double chi(std::size_t j, double y) const;
    /// Closed support of chi_j.
    std::pair<double, double> support(std::size_t j) const;
    /// Tripled interval clipped to the domain.
    std::pair<double, double> tripled(std::size_t j) const;
};

/// Smooth step: 0 for x <= 0, 1 for x >= 1, S(x) + S(1-x) = 1.
double smooth_step(double x);

/// sup/inf of mu over grid indices [lo, hi].
double window_ratio(std::span<const double> mu, std::size_t lo, std::size_t hi);

/**
 * @brief Largest end index i2 reachable from i1 in direction dir (+1/-1)
 * with the tripled-window ratio bound and the length cap. Returns i1 if
 * not even one step is admissible.
 */
std::size_t greedy_endpoint(std::span<const double> mu, double h, std::size_t i1, int dir,
                            const PartitionOptions& opts = {});

Partition build_partition(const ShearEquilibrium& eq, const PartitionOptions& opts = {});

struct CutoffSet {
    std::vector<std::vector<double>> chi;  // chi[j][i] at the sample points
    std::vector<double> c0, c1, c2;        // sup |chi_j|, |chi_j'|, |chi_j''|
};

CutoffSet build_cutoffs(const Partition& part, std::span<const double> y);

struct Extension {
    std::vector<double> mu;  // mu_j on the profile grid
    std::vector<double> dU;  // sigma / mu_j
    double sigma;
    double nu;  // inf mu_j (U_j')^2
    double u;   // inf U_j'
    double ratio;
};

Extension extend_profile(const ShearEquilibrium& eq, const Partition& part, std::size_t j);

}  // namespace vvd
