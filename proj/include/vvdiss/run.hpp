#pragma once

/**
 * @file run.hpp
 * @brief Run pipeline behind the CLI: set up a configuration, evolve each
 * mode while sampling diagnostics, check the sampled trace and write the
 * run directory.
 */

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vvdiss/config.hpp"
#include "vvdiss/diagnostics.hpp"

namespace vvd {

enum ExitCode : int { exit_ok = 0, exit_admissibility = 1, exit_numerical = 2, exit_io = 3 };

struct Setup {
    RunConfig cfg;
    std::uint64_t hash = 0;
    std::shared_ptr<const ViscosityProfile> profile;
    ShearEquilibrium eq;
    AdmissibilityReport adm;
    std::shared_ptr<const ZCoefficients> coeffs;
    Partition part;
    LocalizedTables loc;
    MultiplierTable table{};
    double seam = 0.0;
    bool runnable() const;  // admissible and periodic at the seam
};

Setup prepare(const RunConfig& cfg);

std::vector<cplx> initial_data(const Setup& s, int k);
/// Fraction of the L2 mass in |z - center| <= L_z / 2.
double inner_half_fraction(const ZGrid& grid, std::span<const cplx> W);

struct ModeTrace {
    int k = 1;
    std::vector<double> t, L2, EA, EA_single;
    std::vector<std::vector<double>> hn;  // |A d_z^l W|^2
    std::vector<double> d1, d2, d3;       // on W
    std::vector<double> d1_aw, d2_aw, d3_aw;
    std::vector<double> dfreq_a, dfreq_b;
    std::vector<double> e_corollary;
    std::map<std::string, std::vector<double>> e_regions;
    std::vector<std::vector<double>> eloc;  // per sample, per interval
    double oracle_error = -1.0;             // max relative L2 error, -1 if no oracle
    StreamMonitor monitor;
    bool k_flagged = false;
    ModeState final_state;
};

ModeTrace run_mode(const Setup& s, int k, std::vector<cplx> W0);

struct ModeReport {
    LyapunovReport lyapunov;       // dEA/dt <= -0.001 (D1 + D2 + D3)[W]
    LyapunovReport lyapunov_thm;   // with D1 + D3
    LyapunovReport lyapunov_aw;    // (D1 + D2 + D3)[A W]
    LyapunovReport lyapunov_freq;  // <AW, w AW>, configured variant
    MonotoneReport l2_monotone, ea_monotone;
    double ea_ratio_min = 1.0, ea_ratio_max = 0.0, c2 = 0.0;
    LadderResult ladder;
    std::vector<double> EN;
    std::optional<LocalizedDecayReport> corollary;
    std::optional<RateFit> fit_l2;
    std::map<std::string, RateFit> fit_regions;
    std::string fit_error;
};

ModeReport analyze(const Setup& s, const ModeTrace& tr);

nlohmann::json to_json(const AdmissibilityReport& rep);
nlohmann::json partition_json(const Setup& s);
nlohmann::json mode_json(const Setup& s, const ModeTrace& tr, const ModeReport& rep);

void write_trace_csv(const std::string& path, const Setup& s, const std::vector<ModeTrace>& traces,
                     const std::vector<ModeReport>& reports);
void write_checkpoint(const std::string& path, const Setup& s, const std::vector<ModeTrace>& traces);
void write_svg(const std::string& path, const std::vector<ModeTrace>& traces);

int cmd_validate(const RunConfig& cfg, const std::string& out_dir);
int cmd_run(const RunConfig& cfg, const std::string& out_dir, bool override_admissibility);
int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, int workers, bool override_admissibility);
int cmd_multiplier_table(const RunConfig& cfg, const std::string& out_dir);

struct FitRequest {
    std::string trace;
    int k = 1;
    std::string column = "L2";
    std::optional<std::pair<double, double>> levels;
    std::optional<std::pair<double, double>> window;
};
int cmd_fit(const FitRequest& req, const std::string& out_path);

}  // namespace vvd
