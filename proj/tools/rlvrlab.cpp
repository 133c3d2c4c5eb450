// Command-line front end: single runs, hyperparameter sweeps, gate-surface
// tables, and the oracle/property battery.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "rlvr/config.hpp"
#include "rlvr/experiment.hpp"
#include "rlvr/verification.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : split_csv(text)) {
        std::size_t used = 0;
        const double value = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("not a number: " + item);
        out.push_back(value);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rlvrlab: desk-scale lab for trust-region mechanisms in RL with verifiable rewards"};
    app.require_subcommand(1);

    std::string run_config, run_out;
    auto* run = app.add_subcommand("run", "train once from a config file");
    run->add_option("--config", run_config, "experiment config (JSON)")->required();
    run->add_option("--out", run_out, "output directory (overrides the config's output_dir)");

    std::string table_methods, table_out;
    double table_pi = 1.0, table_adv = 1.0, table_rho_min = 0.1, table_rho_max = 3.0;
    int table_points = 0;
    auto* table = app.add_subcommand("gate-table", "tabulate gate weights over a ratio grid");
    table->add_option("--methods", table_methods, "comma-separated method list")->required();
    table->add_option("--pi", table_pi, "old-policy token probability")->required();
    table->add_option("--adv", table_adv, "advantage")->required();
    table->add_option("--rho-min", table_rho_min, "grid start")->required();
    table->add_option("--rho-max", table_rho_max, "grid end")->required();
    table->add_option("--points", table_points, "grid size")->required();
    table->add_option("--out", table_out, "output CSV path")->required();

    std::string sweep_config, sweep_param, sweep_values, sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run one experiment per parameter value");
    sweep->add_option("--config", sweep_config, "base experiment config (JSON)")->required();
    sweep->add_option("--param", sweep_param,
                      "one of alpha, beta_low, beta_high, beta, learning_rate, eps_high")
        ->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep->add_option("--out", sweep_out, "sweep output directory")->required();

    auto* verify = app.add_subcommand("verify", "run the full oracle/property battery");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            rlvr::ExperimentConfig cfg = rlvr::load_experiment_config(run_config);
            if (!run_out.empty()) cfg.output_dir = run_out;
            const int status = rlvr::run_experiment(cfg);
            if (status == rlvr::kStatusDiverged) {
                std::cerr << "run diverged; see " << (cfg.output_dir / "divergence.txt").string()
                          << "\n";
            }
            return status;
        }
        if (table->parsed()) {
            std::vector<rlvr::GateMethod> methods;
            for (const std::string& name : split_csv(table_methods)) {
                methods.push_back(rlvr::parse_gate_method(name));
            }
            rlvr::emit_gate_table(methods, table_pi, table_adv, table_rho_min, table_rho_max,
                                  table_points, rlvr::GateParams{}, table_out);
            return 0;
        }
        if (sweep->parsed()) {
            const rlvr::ExperimentConfig base = rlvr::load_experiment_config(sweep_config);
            return rlvr::run_sweep(base, sweep_param, parse_values(sweep_values), sweep_out);
        }
        if (verify->parsed()) {
            const auto scratch = std::filesystem::temp_directory_path() /
                                 ("rlvrlab-verify-" + std::to_string(::getpid()));
            const auto results = rlvr::verification::run_all(scratch);
            const bool ok = rlvr::verification::report(results, std::cout);
            std::filesystem::remove_all(scratch);
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return rlvr::kStatusConfigError;
    }
    return 0;
}
