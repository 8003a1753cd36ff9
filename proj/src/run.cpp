#include "vvdiss/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "vvdiss/kernels.hpp"
#include "vvdiss/oracle.hpp"

namespace vvd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    if (!out) throw ConfigError("write failed: " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory " + dir + ": " + ec.message());
}

std::vector<cplx> gaussian(const ZGrid& g, double zc, double w, double freq, cplx amp) {
    std::vector<cplx> W(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = g.node(i) - zc;
        W[i] = amp * std::exp(-d * d / (2.0 * w * w)) * std::polar(1.0, freq * d);
    }
    return W;
}

std::vector<cplx> read_checkpoint_mode(const std::string& path, int k, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("checkpoint " + path + ": " + e.what());
    }
    for (const auto& m : j.at("modes")) {
        if (m.at("k").get<int>() != k) continue;
        const auto re = m.at("re").get<std::vector<double>>();
        const auto im = m.at("im").get<std::vector<double>>();
        if (re.size() != n || im.size() != n) throw ConfigError("checkpoint grid size does not match n_z");
        std::vector<cplx> W(n);
        for (std::size_t i = 0; i < n; ++i) W[i] = cplx(re[i], im[i]);
        return W;
    }
    throw ConfigError("checkpoint has no mode k = " + std::to_string(k));
}

double max_interval_mu(const ShearEquilibrium& eq, const Interval& iv) {
    const auto& mu = eq.profile->mu;
    return *std::max_element(mu.begin() + static_cast<std::ptrdiff_t>(iv.ilo),
                             mu.begin() + static_cast<std::ptrdiff_t>(iv.ihi) + 1);
}

json lyapunov_json(const LyapunovReport& r) {
    return json{{"checked", r.checked},
                {"violations", r.violations},
                {"worst_excess", r.checked ? r.worst_excess : 0.0},
                {"worst_t", r.worst_t},
                {"pass", r.pass}};
}

json monotone_json(const MonotoneReport& r) {
    return json{{"violations", r.violations}, {"worst_increase", r.worst_increase}, {"pass", r.pass}};
}

json fit_json(const RateFit& f) {
    return json{{"rate", f.rate}, {"r2", f.r2}, {"t0", f.t0}, {"t1", f.t1}, {"samples", f.samples}};
}

}  // namespace

bool Setup::runnable() const { return adm.pass() && seam <= 1e-6; }

Setup prepare(const RunConfig& cfg) {
    Setup s;
    s.cfg = cfg;
    s.hash = config_hash(cfg.source);
    try {
        s.profile = std::make_shared<const ViscosityProfile>(build_profile(cfg.profile));
        const double sigma = cfg.sigma.value_or(s.profile->max_mu());
        s.eq = build_equilibrium(s.profile, sigma);
        s.coeffs = std::make_shared<const ZCoefficients>(sample_on_z(s.eq, cfg.n_z));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    s.adm = validate_profile(s.eq);
    s.seam = s.profile->seam_mismatch();
    s.part = build_partition(s.eq);
    s.loc = make_localized_tables(s.eq, s.part, *s.coeffs);
    s.table = make_multiplier_table(s.eq.nu, s.eq.u);
    return s;
}

double inner_half_fraction(const ZGrid& grid, std::span<const cplx> W) {
    double inner = 0.0, total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double m = std::norm(W[i]);
        total += m;
        if (std::abs(grid.node(i) - grid.center()) <= 0.5 * grid.half_length()) inner += m;
    }
    return total > 0.0 ? inner / total : 1.0;
}

std::vector<cplx> initial_data(const Setup& s, int k) {
    const auto& g = s.coeffs->grid;
    const auto& in = s.cfg.initial;
    std::vector<cplx> W;
    if (in.kind == "gaussian") {
        W = gaussian(g, s.eq.U_at(in.center_y), in.width, in.frequency, 1.0);
    } else if (in.kind == "bumps") {
        W.assign(g.size(), cplx(0.0));
        for (const auto& b : in.bumps) {
            const auto piece = gaussian(g, s.eq.U_at(b.center), b.width, b.frequency, cplx(b.re, b.im));
            for (std::size_t i = 0; i < W.size(); ++i) W[i] += piece[i];
        }
    } else if (in.kind == "random") {
        std::mt19937_64 rng(s.cfg.seed + 1000003ull * static_cast<std::uint64_t>(k + 1000));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        W.assign(g.size(), cplx(0.0));
        for (int b = 0; b < in.count; ++b) {
            const double zc = g.center() + (2.0 * unit(rng) - 1.0) * in.spread * g.half_length();
            const double w = in.width_min + (in.width_max - in.width_min) * unit(rng);
            const double f = (2.0 * unit(rng) - 1.0) * in.freq_max;
            const cplx amp(normal(rng), normal(rng));
            const auto piece = gaussian(g, zc, w, f, amp);
            for (std::size_t i = 0; i < W.size(); ++i) W[i] += piece[i];
        }
    } else {
        W = read_checkpoint_mode(in.file, k, g.size());
    }
    const double frac = inner_half_fraction(g, W);
    if (frac < 0.9999) {
        throw ConfigError("initial data: only " + fmt17(frac) + " of the L2 mass lies in the inner half of the domain");
    }
    return W;
}

ModeTrace run_mode(const Setup& s, int k, std::vector<cplx> W0) {
    const auto& cfg = s.cfg;
    const ZCoefficients& c = *s.coeffs;
    const ZGrid& g = c.grid;
    ModeDynamics dyn(s.coeffs, k);
    ModeTrace tr;
    tr.k = k;
    tr.k_flagged = dyn.k_flagged();
    const bool oracle = c.uniform;
    const double shear = c.a.front();
    const double mu0 = c.mu.front();
    const std::vector<cplx> W_init = W0;

    auto sample = [&](const ModeState& st) {
        const double t = st.t;
        const auto& W = st.W;
        tr.t.push_back(t);
        tr.L2.push_back(energy_L2(g, W));
        const double ea_single = energy_EA(s.table, g, k, t, W);
        tr.EA_single.push_back(ea_single);
        tr.EA.push_back(cfg.partitioned ? energy_EA(s.loc, g, k, t, W) : ea_single);
        tr.hn.push_back(hn_terms(s.table, g, k, t, W, cfg.hn_order));
        const auto d = dissipation_phys(dyn, t, W);
        tr.d1.push_back(d.d1);
        tr.d2.push_back(d.d2);
        tr.d3.push_back(d.d3);
        const auto AW = apply_A(s.table, g, k, t, W);
        const auto da = dissipation_phys(dyn, t, AW);
        tr.d1_aw.push_back(da.d1);
        tr.d2_aw.push_back(da.d2);
        tr.d3_aw.push_back(da.d3);
        tr.dfreq_a.push_back(dissipation_freq(s.table, g, k, t, W, WeightVariant::A));
        tr.dfreq_b.push_back(dissipation_freq(s.table, g, k, t, W, WeightVariant::B));
        if (cfg.corollary_region) tr.e_corollary.push_back(region_energy(c, *cfg.corollary_region, W));
        for (const auto& [name, reg] : cfg.regions) tr.e_regions[name].push_back(region_energy(c, reg, W));
        tr.eloc.push_back(localized_energies(s.loc, g, W));
        if (oracle) {
            const auto exact = couette_evolve(g, mu0, k, t, W_init, shear);
            std::vector<cplx> diff(W.size());
            for (std::size_t i = 0; i < W.size(); ++i) diff[i] = W[i] - exact[i];
            const double denom = std::sqrt(kernels::sum_sq(exact));
            const double err = denom > 0.0 ? std::sqrt(kernels::sum_sq(diff)) / denom : 0.0;
            tr.oracle_error = std::max(tr.oracle_error, err);
        }
    };

    ModeState st{k, 0.0, std::move(W0), s.hash};
    const auto nsteps = static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9));
    if (tr.oracle_error < 0.0 && oracle) tr.oracle_error = 0.0;
    sample(st);
    for (long n = 1; n <= nsteps; ++n) {
        dyn.step(st, cfg.dt);
        st.t = static_cast<double>(n) * cfg.dt;
        if (n % cfg.stride == 0 || n == nsteps) sample(st);
    }
    tr.monitor = dyn.monitor();
    tr.final_state = std::move(st);
    return tr;
}

ModeReport analyze(const Setup& s, const ModeTrace& tr) {
    ModeReport r;
    const std::size_t ns = tr.t.size();
    const double slack = 1e-8 * tr.EA.front();
    std::vector<double> dfull(ns), dthm(ns), daw(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        dfull[i] = tr.d1[i] + tr.d2[i] + tr.d3[i];
        dthm[i] = tr.d1[i] + tr.d3[i];
        daw[i] = tr.d1_aw[i] + tr.d2_aw[i] + tr.d3_aw[i];
    }
    const auto& dfreq = s.cfg.variant == WeightVariant::A ? tr.dfreq_a : tr.dfreq_b;
    r.lyapunov = check_lyapunov(tr.t, tr.EA, dfull, 1e-3, slack);
    r.lyapunov_thm = check_lyapunov(tr.t, tr.EA, dthm, 1e-3, slack);
    r.lyapunov_aw = check_lyapunov(tr.t, tr.EA, daw, 1e-3, slack);
    r.lyapunov_freq = check_lyapunov(tr.t, tr.EA, dfreq, 1e-3, slack);
    r.l2_monotone = check_nonincreasing(tr.L2, 1e-8 * tr.L2.front());
    r.ea_monotone = check_nonincreasing(tr.EA, slack);

    double cmin = s.table.c;
    if (s.cfg.partitioned) {
        for (const auto& tb : s.loc.tables) cmin = std::min(cmin, tb.c);
    }
    r.c2 = cmin * cmin;
    for (std::size_t i = 0; i < ns; ++i) {
        if (tr.L2[i] <= 0.0) continue;
        const double q = tr.EA[i] / tr.L2[i];
        r.ea_ratio_min = std::min(r.ea_ratio_min, q);
        r.ea_ratio_max = std::max(r.ea_ratio_max, q);
    }

    r.ladder = find_coefficients(tr.hn, s.cfg.hn_order, 1e-8);
    if (r.ladder.found) {
        for (const auto& terms : tr.hn) r.EN.push_back(energy_HN(terms, r.ladder.c));
    }

    if (s.cfg.corollary_region) {
        const double rate = region_min_rate(s.eq, *s.cfg.corollary_region);
        r.corollary = check_localized_decay(tr.t, tr.L2, tr.e_corollary, s.cfg.corollary_theta, rate);
    }

    if (s.cfg.fit_levels) {
        const auto [lo, hi] = *s.cfg.fit_levels;
        try {
            const auto [t0, t1] = window_by_levels(tr.t, tr.L2, lo, hi);
            r.fit_l2 = fit_rate(tr.t, tr.L2, t0, t1);
            for (const auto& [name, series] : tr.e_regions) {
                const auto [a, b] = window_by_levels(tr.t, series, lo, hi);
                r.fit_regions[name] = fit_rate(tr.t, series, a, b);
            }
        } catch (const std::invalid_argument& e) {
            r.fit_error = e.what();
        }
    }
    return r;
}

json to_json(const AdmissibilityReport& rep) {
    json conds = json::array();
    for (const auto& c : rep.conditions) {
        conds.push_back(json{{"name", c.name},
                             {"value", c.value},
                             {"threshold", c.threshold},
                             {"relation", c.relation},
                             {"pass", c.pass},
                             {"counted", c.counted}});
    }
    return json{{"schema_version", 1},
                {"pass", rep.pass()},
                {"binding_gradual", rep.binding_gradual},
                {"conditions", conds}};
}

json partition_json(const Setup& s) {
    json ivs = json::array();
    const auto cut = build_cutoffs(s.part, std::span<const double>{});
    for (std::size_t j = 0; j < s.part.size(); ++j) {
        const auto& iv = s.part.intervals[j];
        const auto ext = extend_profile(s.eq, s.part, j);
        const auto [sa, sb] = s.part.support(j);
        const double edge_dist = std::min(iv.lo - s.part.domain_lo, s.part.domain_hi - iv.hi);
        ivs.push_back(json{{"index", j},
                           {"lo", iv.lo},
                           {"hi", iv.hi},
                           {"ratio_tripled", iv.ratio3},
                           {"support", {sa, sb}},
                           {"chi_c0", cut.c0[j]},
                           {"chi_c1", cut.c1[j]},
                           {"chi_c2", cut.c2[j]},
                           {"extension_ratio", ext.ratio},
                           {"nu", ext.nu},
                           {"u", ext.u},
                           {"max_mu", max_interval_mu(s.eq, iv)},
                           {"touches_edge", edge_dist <= 0.0}});
    }
    return json{{"schema_version", 1}, {"config_hash", hex64(s.hash)}, {"intervals", ivs}};
}

json mode_json(const Setup& s, const ModeTrace& tr, const ModeReport& rep) {
    json j{{"k", tr.k},
           {"k_flagged", tr.k_flagged},
           {"samples", tr.t.size()},
           {"t_final", tr.t.back()},
           {"lyapunov", lyapunov_json(rep.lyapunov)},
           {"lyapunov_thm", lyapunov_json(rep.lyapunov_thm)},
           {"lyapunov_aw", lyapunov_json(rep.lyapunov_aw)},
           {"lyapunov_freq", lyapunov_json(rep.lyapunov_freq)},
           {"l2_monotone", monotone_json(rep.l2_monotone)},
           {"ea_monotone", monotone_json(rep.ea_monotone)},
           {"ea_ratio", {{"min", rep.ea_ratio_min}, {"max", rep.ea_ratio_max}, {"c2", rep.c2}}},
           {"stream",
            {{"solves", tr.monitor.solves},
             {"max_iterations", tr.monitor.max_iterations},
             {"worst_comparison_excess", tr.monitor.worst_comparison},
             {"worst_comparison_t", tr.monitor.worst_comparison_t}}}};
    j["hn"] = json{{"order", s.cfg.hn_order},
                   {"found", rep.ladder.found},
                   {"rho", rep.ladder.rho},
                   {"c", rep.ladder.c},
                   {"violating_term", rep.ladder.violating_term}};
    if (tr.oracle_error >= 0.0) j["oracle_error"] = tr.oracle_error;
    if (rep.corollary) {
        json w = json::array();
        for (const auto& win : rep.corollary->windows) {
            w.push_back(json{{"t0", win.t0}, {"t1", win.t1}, {"worst_ratio", win.worst_ratio}, {"pass", win.pass}});
        }
        j["corollary"] = json{{"theta", rep.corollary->theta},
                              {"min_rate", rep.corollary->min_rate},
                              {"windows", w},
                              {"pass", rep.corollary->pass}};
    }
    json fits = json::object();
    if (rep.fit_l2) fits["L2"] = fit_json(*rep.fit_l2);
    for (const auto& [name, f] : rep.fit_regions) fits["region_" + name] = fit_json(f);
    if (!rep.fit_error.empty()) fits["error"] = rep.fit_error;
    j["fits"] = fits;
    return j;
}

void write_trace_csv(const std::string& path, const Setup& s, const std::vector<ModeTrace>& traces,
                     const std::vector<ModeReport>& reports) {
    std::ostringstream out;
    out << "k,t,L2,EA,EA_single,E_N";
    for (int l = 0; l <= s.cfg.hn_order; ++l) out << ",hn_" << l;
    out << ",D1,D2,D3,D1_AW,D2_AW,D3_AW,Dfreq_A,Dfreq_B";
    if (s.cfg.corollary_region) out << ",E_M";
    for (const auto& [name, reg] : s.cfg.regions) out << ",region_" << name;
    for (std::size_t j = 0; j < s.part.size(); ++j) out << ",Eloc_" << j;
    out << "\n";
    for (std::size_t m = 0; m < traces.size(); ++m) {
        const auto& tr = traces[m];
        const auto& rep = reports[m];
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            out << tr.k << ',' << fmt17(tr.t[i]) << ',' << fmt17(tr.L2[i]) << ',' << fmt17(tr.EA[i]) << ','
                << fmt17(tr.EA_single[i]) << ',' << (rep.EN.empty() ? std::string("nan") : fmt17(rep.EN[i]));
            for (double v : tr.hn[i]) out << ',' << fmt17(v);
            out << ',' << fmt17(tr.d1[i]) << ',' << fmt17(tr.d2[i]) << ',' << fmt17(tr.d3[i]) << ','
                << fmt17(tr.d1_aw[i]) << ',' << fmt17(tr.d2_aw[i]) << ',' << fmt17(tr.d3_aw[i]) << ','
                << fmt17(tr.dfreq_a[i]) << ',' << fmt17(tr.dfreq_b[i]);
            if (s.cfg.corollary_region) out << ',' << fmt17(tr.e_corollary[i]);
            for (const auto& [name, series] : tr.e_regions) out << ',' << fmt17(series[i]);
            for (double v : tr.eloc[i]) out << ',' << fmt17(v);
            out << "\n";
        }
    }
    write_text(path, out.str());
}

void write_checkpoint(const std::string& path, const Setup& s, const std::vector<ModeTrace>& traces) {
    json modes = json::array();
    for (const auto& tr : traces) {
        std::vector<double> re, im;
        for (const auto& v : tr.final_state.W) {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        modes.push_back(json{{"k", tr.k}, {"t", tr.final_state.t}, {"re", re}, {"im", im}});
    }
    write_json(path, json{{"schema_version", 1}, {"config_hash", hex64(s.hash)}, {"modes", modes}});
}

void write_svg(const std::string& path, const std::vector<ModeTrace>& traces) {
    const double W = 720, H = 420, pad = 50;
    double tmax = 0, lmin = 1e300, lmax = -1e300;
    for (const auto& tr : traces) {
        tmax = std::max(tmax, tr.t.back());
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            for (double v : {tr.L2[i], tr.EA[i]}) {
                if (v > 0.0) {
                    lmin = std::min(lmin, std::log10(v));
                    lmax = std::max(lmax, std::log10(v));
                }
            }
        }
    }
    if (!(lmax > lmin)) lmax = lmin + 1.0;
    if (!(tmax > 0.0)) tmax = 1.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    svg << "<rect x=\"" << pad << "\" y=\"" << pad / 2 << "\" width=\"" << W - 1.5 * pad << "\" height=\""
        << H - 1.5 * pad << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << pad << "\" y=\"" << H - 8 << "\" font-size=\"12\">t in [0, " << tmax
        << "], log10 energy in [" << lmin << ", " << lmax << "]</text>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int ci = 0;
    for (const auto& tr : traces) {
        for (int which = 0; which < 2; ++which) {
            const auto& series = which == 0 ? tr.L2 : tr.EA;
            svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 6] << "\""
                << (which == 1 ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
            for (std::size_t i = 0; i < tr.t.size(); ++i) {
                if (!(series[i] > 0.0)) continue;
                const double x = pad + (W - 1.5 * pad) * tr.t[i] / tmax;
                const double y = pad / 2 + (H - 1.5 * pad) * (lmax - std::log10(series[i])) / (lmax - lmin);
                svg << x << ',' << y << ' ';
            }
            svg << "\"/>\n";
        }
        ++ci;
    }
    svg << "</svg>\n";
    write_text(path, svg.str());
}

int cmd_validate(const RunConfig& cfg, const std::string& out_dir) {
    const Setup s = prepare(cfg);
    ensure_dir(out_dir);
    auto adm = to_json(s.adm);
    adm["config_hash"] = hex64(s.hash);
    adm["periodic_seam_ok"] = s.seam <= 1e-6;
    write_json(out_dir + "/admissibility.json", adm);
    write_json(out_dir + "/partition.json", partition_json(s));
    std::cout << "admissibility: " << (s.adm.pass() ? "pass" : "fail") << "\n";
    for (const auto& c : s.adm.conditions) {
        std::cout << "  " << c.name << " = " << fmt17(c.value) << " " << c.relation << " " << c.threshold
                  << (c.counted ? "" : " (informational)") << (c.pass ? "  ok" : "  FAIL") << "\n";
    }
    return s.adm.pass() ? exit_ok : exit_admissibility;
}

int cmd_run(const RunConfig& cfg, const std::string& out_dir, bool override_admissibility) {
    const bool override_set = override_admissibility || cfg.override_admissibility;
    const Setup s = prepare(cfg);
    ensure_dir(out_dir);
    auto adm = to_json(s.adm);
    adm["config_hash"] = hex64(s.hash);
    adm["periodic_seam_ok"] = s.seam <= 1e-6;
    write_json(out_dir + "/admissibility.json", adm);
    write_json(out_dir + "/partition.json", partition_json(s));
    if (!s.runnable() && !override_set) {
        std::cerr << "profile fails admissibility" << (s.seam > 1e-6 ? " (not periodic at the seam)" : "")
                  << "; rerun with --override-admissibility to simulate anyway\n";
        return exit_admissibility;
    }

    std::vector<std::vector<cplx>> init;
    for (int k : cfg.k) init.push_back(initial_data(s, k));

    std::vector<ModeTrace> traces;
    std::vector<ModeReport> reports;
    bool lyapunov_ok = true;
    for (std::size_t m = 0; m < cfg.k.size(); ++m) {
        traces.push_back(run_mode(s, cfg.k[m], init[m]));
        reports.push_back(analyze(s, traces.back()));
        lyapunov_ok = lyapunov_ok && reports.back().lyapunov.pass;
    }

    write_trace_csv(out_dir + "/trace.csv", s, traces, reports);
    write_checkpoint(out_dir + "/checkpoint.json", s, traces);
    if (cfg.svg) write_svg(out_dir + "/energy.svg", traces);

    const int code = (lyapunov_ok || override_set) ? exit_ok : exit_numerical;
    json modes = json::array();
    for (std::size_t m = 0; m < traces.size(); ++m) modes.push_back(mode_json(s, traces[m], reports[m]));
    json manifest{{"schema_version", 1},
                  {"config_hash", hex64(s.hash)},
                  {"config", cfg.source},
                  {"profile", {{"kind", to_string(s.profile->kind)}, {"params", s.profile->params}}},
                  {"equilibrium",
                   {{"sigma", s.eq.sigma}, {"nu", s.eq.nu}, {"u", s.eq.u}, {"G", s.table.G}, {"c", s.table.c}}},
                  {"grid",
                   {{"n_z", s.coeffs->grid.size()},
                    {"L_z", s.coeffs->grid.half_length()},
                    {"center", s.coeffs->grid.center()},
                    {"h", s.coeffs->grid.spacing()}}},
                  {"admissible", s.adm.pass()},
                  {"override", override_set},
                  {"modes", modes},
                  {"exit_code", code}};
    write_json(out_dir + "/manifest.json", manifest);
    return code;
}

namespace {

struct SweepAxis {
    std::string pointer;
    std::vector<json> values;
};

}  // namespace

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, int workers, bool override_admissibility) {
    const json& src = cfg.source;
    if (!src.contains("sweep") || !src.at("sweep").is_object()) throw ConfigError("sweep: config needs a 'sweep' object");
    std::vector<SweepAxis> axes;
    for (const auto& [ptr, vals] : src.at("sweep").items()) {
        if (!vals.is_array() || vals.empty()) throw ConfigError("sweep." + ptr + ": expected a nonempty list");
        axes.push_back(SweepAxis{ptr, std::vector<json>(vals.begin(), vals.end())});
    }
    std::size_t ncases = 1;
    for (const auto& ax : axes) ncases *= ax.values.size();

    std::vector<json> cases(ncases);
    for (std::size_t c = 0; c < ncases; ++c) {
        json j = src;
        j.erase("sweep");
        std::size_t rem = c;
        for (auto ax = axes.rbegin(); ax != axes.rend(); ++ax) {
            const std::size_t idx = rem % ax->values.size();
            rem /= ax->values.size();
            try {
                j[json::json_pointer(ax->pointer)] = ax->values[idx];
            } catch (const json::exception& e) {
                throw ConfigError("sweep pointer " + ax->pointer + ": " + e.what());
            }
        }
        cases[c] = j;
    }
    ensure_dir(out_dir);

    std::vector<int> codes(ncases, exit_ok);
    std::vector<std::string> errors(ncases);
    std::vector<json> summaries(ncases);
    const auto n = static_cast<std::ptrdiff_t>(ncases);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
    for (std::ptrdiff_t c = 0; c < n; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        char name[32];
        std::snprintf(name, sizeof name, "case_%04zu", uc);
        const std::string dir = out_dir + "/" + name;
        try {
            codes[uc] = cmd_run(parse_config(cases[uc]), dir, override_admissibility);
            std::ifstream in(dir + "/manifest.json");
            if (in) summaries[uc] = json::parse(in);
        } catch (const std::exception& e) {
            codes[uc] = dynamic_cast<const ConfigError*>(&e) ? exit_io : exit_numerical;
            errors[uc] = e.what();
        }
    }

    std::ostringstream csv;
    csv << "case";
    for (const auto& ax : axes) csv << ',' << ax.pointer;
    csv << ",k,exit_code,rate_L2,r2_L2,lyapunov_pass,worst_excess\n";
    int worst = exit_ok;
    for (std::size_t c = 0; c < ncases; ++c) {
        worst = std::max(worst, codes[c]);
        std::string prefix = std::to_string(c);
        for (const auto& ax : axes) prefix += "," + cases[c][json::json_pointer(ax.pointer)].dump();
        const auto& sm = summaries[c];
        if (!sm.is_object() || !sm.contains("modes")) {
            csv << prefix << ",," << codes[c] << ",,,,\n";
            continue;
        }
        for (const auto& m : sm.at("modes")) {
            csv << prefix << ',' << m.at("k").get<int>() << ',' << codes[c] << ',';
            if (m.at("fits").contains("L2")) {
                csv << fmt17(m["fits"]["L2"]["rate"].get<double>()) << ','
                    << fmt17(m["fits"]["L2"]["r2"].get<double>());
            } else {
                csv << ',';
            }
            csv << ',' << (m["lyapunov"]["pass"].get<bool>() ? 1 : 0) << ','
                << fmt17(m["lyapunov"]["worst_excess"].get<double>()) << "\n";
        }
    }
    write_text(out_dir + "/rates.csv", csv.str());
    for (std::size_t c = 0; c < ncases; ++c) {
        if (!errors[c].empty()) std::cerr << "case " << c << ": " << errors[c] << "\n";
    }
    return worst;
}

int cmd_multiplier_table(const RunConfig& cfg, const std::string& out_dir) {
    const Setup s = prepare(cfg);
    const json& src = cfg.source;
    json mt = src.contains("multiplier_table") ? src.at("multiplier_table") : json::object();
    const int k = mt.value("k", 1);
    const auto tr = mt.value("t", std::vector<double>{0.0, 4.0 * s.table.G, 201.0});
    const auto xr = mt.value("xi", std::vector<double>{-2.0 * s.table.G, 6.0 * s.table.G, 201.0});
    if (tr.size() != 3 || xr.size() != 3 || tr[2] < 1 || xr[2] < 1) {
        throw ConfigError("multiplier_table: t and xi must be [start, stop, count]");
    }
    if (k == 0) throw ConfigError("multiplier_table: k = 0 excluded");
    ensure_dir(out_dir);
    std::ostringstream csv;
    csv << "# config_hash " << hex64(s.hash) << " nu " << fmt17(s.table.nu) << " u " << fmt17(s.table.u) << " G "
        << fmt17(s.table.G) << " c " << fmt17(s.table.c) << "\n";
    csv << "t,xi,m,bad\n";
    const auto nt = static_cast<int>(tr[2]);
    const auto nx = static_cast<int>(xr[2]);
    for (int a = 0; a < nt; ++a) {
        const double t = nt == 1 ? tr[0] : tr[0] + (tr[1] - tr[0]) * a / (nt - 1);
        for (int b = 0; b < nx; ++b) {
            const double xi = nx == 1 ? xr[0] : xr[0] + (xr[1] - xr[0]) * b / (nx - 1);
            const bool bad = std::abs(xi / k - t) < s.table.G;
            csv << fmt17(t) << ',' << fmt17(xi) << ',' << fmt17(m_value(s.table, t, k, xi)) << ',' << (bad ? 1 : 0)
                << "\n";
        }
    }
    write_text(out_dir + "/multiplier_table.csv", csv.str());
    return exit_ok;
}

int cmd_fit(const FitRequest& req, const std::string& out_path) {
    std::ifstream in(req.trace);
    if (!in) throw ConfigError("cannot open trace " + req.trace);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const auto col = std::find(header.begin(), header.end(), req.column);
    if (col == header.end()) throw ConfigError("trace has no column " + req.column);
    const auto ci = static_cast<std::size_t>(col - header.begin());
    std::vector<double> t, e;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != header.size()) throw ConfigError("malformed trace row: " + line);
        if (std::stoi(cells[0]) != req.k) continue;
        t.push_back(std::stod(cells[1]));
        e.push_back(std::stod(cells[ci]));
    }
    if (t.empty()) throw ConfigError("trace has no rows for k = " + std::to_string(req.k));
    double t0 = t.front(), t1 = t.back();
    if (req.window) std::tie(t0, t1) = *req.window;
    if (req.levels) std::tie(t0, t1) = window_by_levels(t, e, req.levels->first, req.levels->second);
    const auto fit = fit_rate(t, e, t0, t1);
    const json j{{"k", req.k}, {"column", req.column}, {"rate", fit.rate}, {"r2", fit.r2},
                 {"t0", fit.t0}, {"t1", fit.t1}, {"samples", fit.samples}};
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_json(out_path, j);
    }
    return exit_ok;
}

}  // namespace vvd
