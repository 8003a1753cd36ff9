#include "vvdiss/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvdiss/kernels.hpp"

namespace vvd {

double energy_L2(const ZGrid& grid, std::span<const cplx> W) {
    return grid.spacing() * kernels::sum_sq(W);
}

namespace {

double ea_from_hat(const MultiplierTable& table, const ZGrid& grid, int k, double t, std::span<const cplx> hat) {
    std::vector<double> m(grid.size());
    m_values(table, t, k, grid.frequencies(), m);
    for (auto& v : m) v *= v;
    return grid.spacing() * kernels::weighted_sum_sq(m, hat);
}

}  // namespace

double energy_EA(const MultiplierTable& table, const ZGrid& grid, int k, double t, std::span<const cplx> W) {
    const auto hat = dft(W);
    return ea_from_hat(table, grid, k, t, hat);
}

LocalizedTables make_localized_tables(const ShearEquilibrium& eq, const Partition& part,
                                      const ZCoefficients& coeffs) {
    LocalizedTables loc;
    const auto cut = build_cutoffs(part, coeffs.y);
    loc.chi = cut.chi;
    for (std::size_t j = 0; j < part.size(); ++j) {
        const auto ext = extend_profile(eq, part, j);
        loc.tables.push_back(make_multiplier_table(ext.nu, ext.u));
    }
    return loc;
}

double energy_EA(const LocalizedTables& loc, const ZGrid& grid, int k, double t, std::span<const cplx> W) {
    double total = 0.0;
    std::vector<cplx> piece(W.size()), hat(W.size());
    const Dft& F = dft_of_size(grid.size());
    for (std::size_t j = 0; j < loc.tables.size(); ++j) {
        kernels::multiply(loc.chi[j], W, piece);
        F.forward(piece, hat);
        total += ea_from_hat(loc.tables[j], grid, k, t, hat);
    }
    return total;
}

std::vector<double> localized_energies(const LocalizedTables& loc, const ZGrid& grid, std::span<const cplx> W) {
    std::vector<double> out(loc.chi.size());
    for (std::size_t j = 0; j < loc.chi.size(); ++j) {
        std::vector<double> w2(loc.chi[j].size());
        for (std::size_t i = 0; i < w2.size(); ++i) w2[i] = loc.chi[j][i] * loc.chi[j][i];
        out[j] = grid.spacing() * kernels::weighted_sum_sq(w2, W);
    }
    return out;
}

DissipationParts dissipation_phys(const ModeDynamics& dyn, double t, std::span<const cplx> W) {
    const auto sp = dyn.solve_stream(t, W);
    return dissipation_phys(dyn, t, W, sp);
}

DissipationParts dissipation_phys(const ModeDynamics& dyn, double t, std::span<const cplx> W,
                                  const StreamPair& sp) {
    const auto& c = dyn.coefficients();
    const auto& g = c.grid;
    const std::size_t n = g.size();
    const double h = g.spacing();
    std::vector<double> w1(n), w2(n);
    for (std::size_t i = 0; i < n; ++i) {
        w1[i] = std::cbrt(c.sigma * c.a[i]);
        w2[i] = c.sigma * c.a[i];
    }
    std::vector<cplx> DW(n);
    apply_D(g, dyn.k() * t, W, DW);
    DissipationParts d;
    d.d1 = h * kernels::weighted_sum_sq(w1, W);
    d.d2 = h * kernels::weighted_sum_sq(w2, DW);
    d.d3 = h * (kernels::weighted_sum_sq(c.a, sp.V1) + kernels::weighted_sum_sq(c.a, sp.V2));
    return d;
}

double dissipation_freq(const MultiplierTable& table, const ZGrid& grid, int k, double t,
                        std::span<const cplx> W, WeightVariant v) {
    const auto hat = dft(W);
    std::vector<double> w(grid.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double m = m_value(table, t, k, grid.frequency(j));
        w[j] = weight_value(table, v, t, k, grid.frequency(j)) * m * m;
    }
    return grid.spacing() * kernels::weighted_sum_sq(w, hat);
}

std::vector<double> hn_terms(const MultiplierTable& table, const ZGrid& grid, int k, double t,
                             std::span<const cplx> W, int N) {
    if (N < 0) throw std::invalid_argument("hn_terms: N must be >= 0");
    const auto hat = dft(W);
    const std::size_t n = grid.size();
    std::vector<double> m2(n);
    m_values(table, t, k, grid.frequencies(), m2);
    for (auto& v : m2) v *= v;
    std::vector<double> out(static_cast<std::size_t>(N) + 1);
    std::vector<double> w(n);
    for (int l = 0; l <= N; ++l) {
        for (std::size_t j = 0; j < n; ++j) {
            const double xi = (l % 2 == 1 && j == n / 2) ? 0.0 : grid.frequency(j);
            w[j] = m2[j] * std::pow(xi, 2 * l);
        }
        out[static_cast<std::size_t>(l)] = grid.spacing() * kernels::weighted_sum_sq(w, hat);
    }
    return out;
}

double energy_HN(std::span<const double> terms, std::span<const double> c) {
    if (terms.size() != c.size()) throw std::invalid_argument("energy_HN: length mismatch");
    double s = 0.0;
    for (std::size_t l = 0; l < c.size(); ++l) s += c[l] * terms[l];
    return s;
}

std::vector<double> ladder_coefficients(double rho, int N) {
    std::vector<double> c(static_cast<std::size_t>(N) + 1);
    for (int l = 0; l <= N; ++l) c[static_cast<std::size_t>(l)] = std::pow(rho, l);
    return c;
}

LadderResult find_coefficients(const std::vector<std::vector<double>>& terms, int N, double slack) {
    LadderResult res;
    for (int e = 0; e <= 6; ++e) {
        const double rho = std::pow(10.0, -e);
        const auto c = ladder_coefficients(rho, N);
        std::vector<double> E(terms.size());
        for (std::size_t s = 0; s < terms.size(); ++s) E[s] = energy_HN(terms[s], c);
        const double tol = E.empty() ? 0.0 : slack * E.front();
        const auto mono = check_nonincreasing(E, tol);
        if (mono.pass) {
            res.found = true;
            res.rho = rho;
            res.c = c;
            return res;
        }
        res.violating_sample = mono.worst_index;
        res.worst_increase = mono.worst_increase;
        res.violating_term = -1;
        double worst = -std::numeric_limits<double>::infinity();
        const std::size_t i = mono.worst_index;
        for (int l = 0; l <= N; ++l) {
            const auto ul = static_cast<std::size_t>(l);
            const double inc = c[ul] * (terms[i + 1][ul] - terms[i][ul]);
            if (inc > worst) {
                worst = inc;
                res.violating_term = l;
            }
        }
    }
    return res;
}

MonotoneReport check_nonincreasing(std::span<const double> values, double slack) {
    MonotoneReport r;
    r.worst_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double inc = values[i + 1] - values[i];
        if (inc > r.worst_increase) {
            r.worst_increase = inc;
            r.worst_index = i;
        }
        if (inc > slack) ++r.violations;
    }
    if (values.size() < 2) r.worst_increase = 0.0;
    r.pass = r.violations == 0;
    return r;
}

LyapunovReport check_lyapunov(std::span<const double> t, std::span<const double> E, std::span<const double> D,
                              double rate, double slack) {
    if (t.size() != E.size() || t.size() != D.size()) throw std::invalid_argument("check_lyapunov: length mismatch");
    LyapunovReport r;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double dEdt = (E[i + 1] - E[i - 1]) / (t[i + 1] - t[i - 1]);
        const double excess = dEdt + rate * D[i] - slack;
        ++r.checked;
        if (excess > r.worst_excess) {
            r.worst_excess = excess;
            r.worst_t = t[i];
        }
        if (excess > 0.0) ++r.violations;
    }
    r.pass = r.violations == 0;
    return r;
}

RateFit fit_rate(std::span<const double> t, std::span<const double> E, double t0, double t1) {
    if (t.size() != E.size()) throw std::invalid_argument("fit_rate: length mismatch");
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || t[i] > t1) continue;
        if (!(E[i] > 0.0)) throw std::invalid_argument("fit_rate: nonpositive energy at t = " + std::to_string(t[i]));
        ts.push_back(t[i]);
        ys.push_back(std::log(E[i]));
    }
    const std::size_t n = ts.size();
    if (n < 2) throw std::invalid_argument("fit_rate: fewer than two samples in window");
    const double dn = static_cast<double>(n);
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tm += ts[i] / dn;
        ym += ys[i] / dn;
    }
    double vt = 0.0, cty = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = ts[i] - tm;
        const double dy = ys[i] - ym;
        vt += dt * dt;
        cty += dt * dy;
        vy += dy * dy;
    }
    RateFit f;
    f.rate = -(cty / vt);
    f.r2 = vy > 0.0 ? (cty * cty) / (vt * vy) : 1.0;
    f.t0 = t0;
    f.t1 = t1;
    f.samples = n;
    return f;
}

std::pair<double, double> window_by_levels(std::span<const double> t, std::span<const double> E, double lo,
                                           double hi) {
    if (t.empty() || t.size() != E.size()) throw std::invalid_argument("window_by_levels: bad trace");
    const double e_lo = E.front() * std::exp(-lo);
    const double e_hi = E.front() * std::exp(-hi);
    double t0 = -1.0, t1 = -1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t0 < 0.0 && E[i] <= e_lo) t0 = t[i];
        if (t1 < 0.0 && E[i] <= e_hi) {
            t1 = t[i];
            break;
        }
    }
    if (t0 < 0.0 || t1 < 0.0) throw std::invalid_argument("window_by_levels: trace does not decay far enough");
    return {t0, t1};
}

LocalizedDecayReport check_localized_decay(std::span<const double> t, std::span<const double> E,
                                           std::span<const double> E_M, double theta, double min_rate) {
    if (t.size() != E.size() || t.size() != E_M.size()) {
        throw std::invalid_argument("check_localized_decay: length mismatch");
    }
    LocalizedDecayReport rep;
    rep.theta = theta;
    rep.min_rate = min_rate;
    std::size_t i = 0;
    const std::size_t n = t.size();
    while (i < n) {
        if (!(E_M[i] >= theta * E[i])) {
            ++i;
            continue;
        }
        DecayWindow w;
        w.first = i;
        while (i + 1 < n && E_M[i + 1] >= theta * E[i + 1]) ++i;
        w.last = i;
        w.t0 = t[w.first];
        w.t1 = t[w.last];
        for (std::size_t s = w.first; s <= w.last; ++s) {
            const double bound = std::exp(-1e-3 * theta * min_rate * (t[s] - w.t0)) * E[w.first];
            const double ratio = bound > 0.0 ? E[s] / bound : (E[s] > 0.0 ? INFINITY : 0.0);
            w.worst_ratio = std::max(w.worst_ratio, ratio);
        }
        w.pass = w.worst_ratio <= 1.0;
        if (!w.pass) rep.pass = false;
        rep.windows.push_back(w);
        ++i;
    }
    return rep;
}

double region_energy(const ZCoefficients& coeffs, const std::vector<std::pair<double, double>>& region,
                     std::span<const cplx> W) {
    double s = 0.0;
    for (std::size_t i = 0; i < W.size(); ++i) {
        const double yy = coeffs.y[i];
        for (const auto& [lo, hi] : region) {
            if (yy >= lo && yy <= hi) {
                s += std::norm(W[i]);
                break;
            }
        }
    }
    return coeffs.grid.spacing() * s;
}

double region_min_rate(const ShearEquilibrium& eq, const std::vector<std::pair<double, double>>& region) {
    const auto rates = local_rates(eq);
    double m = std::numeric_limits<double>::infinity();
    const auto& y = eq.profile->y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (const auto& [lo, hi] : region) {
            if (y[i] >= lo && y[i] <= hi) {
                m = std::min(m, rates.rate[i]);
                break;
            }
        }
    }
    if (!std::isfinite(m)) throw std::invalid_argument("region_min_rate: region contains no grid points");
    return m;
}

}  // namespace vvd
