// Command-line front end: validate | run | sweep | multiplier-table | fit.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "vvdiss/run.hpp"

namespace {

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    std::stringstream ss(text);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (!(ss >> a >> comma >> b) || comma != ',') {
        throw vvd::ConfigError(std::string(what) + ": expected 'a,b', got '" + text + "'");
    }
    return {a, b};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized shear-flow dissipation solver"};
    app.require_subcommand(1);

    std::string config, out = "out";
    bool override_adm = false;
    int workers = 1;

    auto* validate = app.add_subcommand("validate", "check profile admissibility and print the partition");
    validate->add_option("--config", config, "JSON configuration")->required();
    validate->add_option("--out", out, "output directory");

    auto* run = app.add_subcommand("run", "evolve the configured modes");
    run->add_option("--config", config, "JSON configuration")->required();
    run->add_option("--out", out, "output directory");
    run->add_flag("--override-admissibility", override_adm, "simulate even if the profile is not admissible");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("--config", config, "JSON configuration with a 'sweep' object")->required();
    sweep->add_option("--out", out, "output directory");
    sweep->add_option("--workers", workers, "concurrent cases")->check(CLI::PositiveNumber);
    sweep->add_flag("--override-admissibility", override_adm, "simulate even if a profile is not admissible");

    auto* table = app.add_subcommand("multiplier-table", "tabulate the multiplier on a (t, xi) grid");
    table->add_option("--config", config, "JSON configuration")->required();
    table->add_option("--out", out, "output directory");

    vvd::FitRequest fit;
    std::string levels, window, fit_out;
    auto* fitc = app.add_subcommand("fit", "fit an exponential decay rate to a trace column");
    fitc->add_option("--trace", fit.trace, "trace.csv from a run")->required();
    fitc->add_option("--k", fit.k, "mode");
    fitc->add_option("--column", fit.column, "trace column");
    fitc->add_option("--levels", levels, "fit between decay levels lo,hi (in e-folds)");
    fitc->add_option("--window", window, "fit on t0,t1");
    fitc->add_option("--out", fit_out, "write the fit as JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fitc) {
            if (!levels.empty()) fit.levels = parse_pair(levels, "--levels");
            if (!window.empty()) fit.window = parse_pair(window, "--window");
            return vvd::cmd_fit(fit, fit_out);
        }
        const auto cfg = vvd::load_config(config);
        if (*validate) return vvd::cmd_validate(cfg, out);
        if (*run) return vvd::cmd_run(cfg, out, override_adm);
        if (*sweep) return vvd::cmd_sweep(cfg, out, workers, override_adm);
        if (*table) return vvd::cmd_multiplier_table(cfg, out);
    } catch (const vvd::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vvd::exit_io;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vvd::exit_io;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return vvd::exit_numerical;
    }
    return vvd::exit_ok;
}
