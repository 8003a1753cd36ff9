#include "vvdiss/partition.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vvd {

namespace {

// Sparse tables for O(1) range min/max.
class RangeMinMax {
public:
    explicit RangeMinMax(std::span<const double> v) {
        const std::size_t n = v.size();
        lg_.assign(n + 1, 0);
        for (std::size_t i = 2; i <= n; ++i) lg_[i] = lg_[i / 2] + 1;
        const std::size_t levels = lg_[n] + 1;
        mn_.assign(levels, std::vector<double>(v.begin(), v.end()));
        mx_ = mn_;
        for (std::size_t l = 1; l < levels; ++l) {
            const std::size_t w = std::size_t{1} << l;
            for (std::size_t i = 0; i + w <= n; ++i) {
                mn_[l][i] = std::min(mn_[l - 1][i], mn_[l - 1][i + w / 2]);
                mx_[l][i] = std::max(mx_[l - 1][i], mx_[l - 1][i + w / 2]);
            }
        }
    }
    double ratio(std::size_t lo, std::size_t hi) const {
        const std::size_t l = lg_[hi - lo + 1];
        const std::size_t j = hi + 1 - (std::size_t{1} << l);
        return std::max(mx_[l][lo], mx_[l][j]) / std::min(mn_[l][lo], mn_[l][j]);
    }

private:
    std::vector<std::size_t> lg_;
    std::vector<std::vector<double>> mn_, mx_;
};

// Tripled window of [min(a,b), max(a,b)] in index space, clipped.
std::pair<std::size_t, std::size_t> tripled_indices(std::size_t a, std::size_t b, std::size_t n) {
    const auto lo = static_cast<std::ptrdiff_t>(std::min(a, b));
    const auto hi = static_cast<std::ptrdiff_t>(std::max(a, b));
    const std::ptrdiff_t len = hi - lo;
    const std::ptrdiff_t tlo = std::max<std::ptrdiff_t>(0, lo - len);
    const std::ptrdiff_t thi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1, hi + len);
    return {static_cast<std::size_t>(tlo), static_cast<std::size_t>(thi)};
}

std::size_t greedy_with(const RangeMinMax& rmq, std::size_t n, double h, std::size_t i1, int dir,
                        const PartitionOptions& opts) {
    const auto max_steps = static_cast<std::size_t>(std::floor(opts.max_length / h + 1e-9));
    std::size_t room = dir > 0 ? n - 1 - i1 : i1;
    room = std::min(room, max_steps);
    auto ok = [&](std::size_t steps) {
        const std::size_t i2 = dir > 0 ? i1 + steps : i1 - steps;
        const auto [a, b] = tripled_indices(i1, i2, n);
        return rmq.ratio(a, b) <= opts.ratio_limit;
    };
    if (room == 0 || !ok(1)) return i1;
    std::size_t good = 1, bad = room + 1;
    if (ok(room)) good = room;
    while (bad - good > 1 && good != room) {
        const std::size_t mid = good + (bad - good) / 2;
        if (ok(mid)) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    return dir > 0 ? i1 + good : i1 - good;
}

Interval make_interval(const RangeMinMax& rmq, const ViscosityProfile& p, std::size_t a, std::size_t b) {
    const auto [ta, tb] = tripled_indices(a, b, p.n_points);
    return Interval{a, b, p.y[a], p.y[b], rmq.ratio(ta, tb)};
}

}  // namespace

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double f0 = std::exp(-1.0 / x);
    const double f1 = std::exp(-1.0 / (1.0 - x));
    return f0 / (f0 + f1);
}

double window_ratio(std::span<const double> mu, std::size_t lo, std::size_t hi) {
    const auto [mn, mx] = std::minmax_element(mu.begin() + static_cast<std::ptrdiff_t>(lo),
                                              mu.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    return *mx / *mn;
}

std::size_t greedy_endpoint(std::span<const double> mu, double h, std::size_t i1, int dir,
                            const PartitionOptions& opts) {
    RangeMinMax rmq(mu);
    return greedy_with(rmq, mu.size(), h, i1, dir, opts);
}

Partition build_partition(const ShearEquilibrium& eq, const PartitionOptions& opts) {
    const auto& p = *eq.profile;
    const std::size_t n = p.n_points;
    const double h = p.spacing();
    RangeMinMax rmq(p.mu);
    const auto origin = static_cast<std::size_t>(std::llround(p.half_length / h));

    auto sweep = [&](int dir) {
        std::vector<std::size_t> ends{origin};
        std::size_t cur = origin;
        const std::size_t stop = dir > 0 ? n - 1 : 0;
        while (cur != stop) {
            const std::size_t next = greedy_with(rmq, n, h, cur, dir, opts);
            if (next == cur) {
                std::ostringstream msg;
                msg << "build_partition: no admissible interval starts at y = " << p.y[cur]
                    << " (ratio bound " << opts.ratio_limit << " fails within one grid cell)";
                throw std::invalid_argument(msg.str());
            }
            ends.push_back(next);
            cur = next;
        }
        // A short remainder at the domain edge joins its neighbour.
        if (ends.size() >= 3) {
            const std::size_t last = ends.back();
            const std::size_t prev = ends[ends.size() - 2];
            const double len = std::abs(p.y[last] - p.y[prev]);
            if (len < opts.min_length) {
                const std::size_t before = ends[ends.size() - 3];
                const auto [ta, tb] = tripled_indices(before, last, n);
                if (rmq.ratio(ta, tb) <= opts.ratio_limit) {
                    ends.erase(ends.end() - 2);
                }
            }
        }
        return ends;
    };

    const auto right = sweep(+1);
    const auto left = sweep(-1);
    std::vector<std::size_t> bounds(left.rbegin(), left.rend());
    bounds.insert(bounds.end(), right.begin() + 1, right.end());
    if (bounds.size() < 2) {
        bounds = {0, n - 1};
    }

    // Join the two intervals meeting at the origin when the union still qualifies.
    if (bounds.size() >= 3) {
        const auto it = std::find(bounds.begin(), bounds.end(), origin);
        if (it != bounds.begin() && it + 1 != bounds.end()) {
            const std::size_t a = *(it - 1);
            const std::size_t b = *(it + 1);
            const auto [ta, tb] = tripled_indices(a, b, n);
            if (p.y[b] - p.y[a] <= opts.max_length + 1e-9 * h && rmq.ratio(ta, tb) <= opts.ratio_limit) {
                bounds.erase(it);
            }
        }
    }

    Partition part;
    part.domain_lo = p.y.front();
    part.domain_hi = p.y.back();
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
        part.intervals.push_back(make_interval(rmq, p, bounds[b], bounds[b + 1]));
    }
    for (const auto& iv : part.intervals) {
        if (iv.length() < opts.min_length) {
            std::ostringstream msg;
            msg << "build_partition: interval [" << iv.lo << ", " << iv.hi << "] shorter than "
                << opts.min_length << "; the profile varies too fast for the ratio bound";
            throw std::invalid_argument(msg.str());
        }
    }
    const std::size_t J = part.intervals.size();
    part.halfwidth.assign(J + 1, 0.0);
    for (std::size_t b = 1; b < J; ++b) {
        part.halfwidth[b] = 0.25 * std::min(part.intervals[b - 1].length(), part.intervals[b].length());
    }
    return part;
}

double Partition::bump(std::size_t j, double y) const {
    const auto& iv = intervals.at(j);
    double v = 1.0;
    if (j > 0) {
        const double d = halfwidth[j];
        v *= smooth_step((y - (iv.lo - d)) / (2.0 * d));
    }
    if (j + 1 < intervals.size()) {
        const double d = halfwidth[j + 1];
        v *= 1.0 - smooth_step((y - (iv.hi - d)) / (2.0 * d));
    }
    return v;
}

double Partition::chi(std::size_t j, double y) const {
    const double bj = bump(j, y);
    if (bj == 0.0) return 0.0;
    double s = 0.0;
    // Only neighbours can overlap.
    const std::size_t lo = j == 0 ? 0 : j - 1;
    const std::size_t hi = std::min(intervals.size() - 1, j + 1);
    for (std::size_t l = lo; l <= hi; ++l) {
        const double b = bump(l, y);
        s += b * b;
    }
    return bj / std::sqrt(s);
}

std::pair<double, double> Partition::support(std::size_t j) const {
    const auto& iv = intervals.at(j);
    return {iv.lo - halfwidth[j], iv.hi + halfwidth[j + 1]};
}

std::pair<double, double> Partition::tripled(std::size_t j) const {
    const auto& iv = intervals.at(j);
    return {std::max(domain_lo, iv.lo - iv.length()), std::min(domain_hi, iv.hi + iv.length())};
}

CutoffSet build_cutoffs(const Partition& part, std::span<const double> y) {
    const std::size_t J = part.size();
    CutoffSet cs;
    cs.chi.assign(J, std::vector<double>(y.size(), 0.0));
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t i = 0; i < y.size(); ++i) cs.chi[j][i] = part.chi(j, y[i]);
    }
    // Derivative bounds from a dense sampling of each support.
    cs.c0.assign(J, 0.0);
    cs.c1.assign(J, 0.0);
    cs.c2.assign(J, 0.0);
    constexpr int samples = 20000;
    for (std::size_t j = 0; j < J; ++j) {
        const auto [a, b] = part.support(j);
        const double dy = (b - a) / samples;
        double prev2 = part.chi(j, a - dy), prev1 = part.chi(j, a);
        cs.c0[j] = std::max(prev2, prev1);
        for (int s = 1; s <= samples + 1; ++s) {
            const double cur = part.chi(j, a + s * dy);
            cs.c0[j] = std::max(cs.c0[j], cur);
            cs.c1[j] = std::max(cs.c1[j], std::abs(cur - prev2) / (2.0 * dy));
            cs.c2[j] = std::max(cs.c2[j], std::abs(cur - 2.0 * prev1 + prev2) / (dy * dy));
            prev2 = prev1;
            prev1 = cur;
        }
    }
    return cs;
}

namespace {

// Integral of 1 - S over [0, x], saturating at 1/2 for x >= 1.
double clamp_profile(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 0.5;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [](double t) { return 1.0 - smooth_step(t); }, 0.0, x, 5, 1e-14);
}

}  // namespace

Extension extend_profile(const ShearEquilibrium& eq, const Partition& part, std::size_t j) {
    if (j >= part.size()) throw std::invalid_argument("extend_profile: interval index out of range");
    const auto& p = *eq.profile;
    const auto [sa, sb] = part.support(j);
    const auto& iv = part.intervals[j];
    const double ta = iv.lo - iv.length();
    const double tb = iv.hi + iv.length();
    const double ra = sa - ta;
    const double rb = tb - sb;

    // Smooth clamp: identity on supp chi_j, constant outside the tripled interval.
    auto psi = [&](double y) {
        if (y > sb) return sb + rb * clamp_profile((y - sb) / rb);
        if (y < sa) return sa - ra * clamp_profile((sa - y) / ra);
        return y;
    };

    Extension ext;
    ext.sigma = eq.sigma;
    ext.mu.resize(p.n_points);
    ext.dU.resize(p.n_points);
    for (std::size_t i = 0; i < p.n_points; ++i) {
        const double yy = p.y[i];
        const double py = psi(yy);
        ext.mu[i] = (py == yy) ? p.mu[i] : p.at(py).mu;
        ext.dU[i] = ext.sigma / ext.mu[i];
    }
    const auto [mn, mx] = std::minmax_element(ext.mu.begin(), ext.mu.end());
    ext.ratio = *mx / *mn;
    ext.nu = ext.sigma * ext.sigma / *mx;
    ext.u = ext.sigma / *mx;
    if (ext.ratio > 100.0) {
        std::ostringstream msg;
        msg << "extend_profile: extension " << j << " has max/min ratio " << ext.ratio << " > 100";
        throw std::runtime_error(msg.str());
    }
    return ext;
}

}  // namespace vvd
