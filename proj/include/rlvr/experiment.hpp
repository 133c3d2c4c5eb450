#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "rlvr/config.hpp"
#include "rlvr/metrics.hpp"
#include "rlvr/oracle.hpp"
#include "rlvr/trainer.hpp"

namespace rlvr {

// Exit statuses shared by the library entry points and the CLI.
inline constexpr int kStatusOk = 0;
inline constexpr int kStatusConfigError = 2;
inline constexpr int kStatusDiverged = 3;

// Write-then-rename so interrupted runs never leave truncated files.
inline void atomic_write_file(const std::filesystem::path& path, std::string_view contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("failed writing: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::filesystem::path metrics_path(const std::filesystem::path& output_dir) {
    return output_dir / "metrics.csv";
}

inline std::filesystem::path policy_path(const std::filesystem::path& output_dir) {
    return output_dir / "policy.bin";
}

// Run one experiment: total_steps training steps, one metrics row per step,
// final policy snapshot. Returns kStatusOk, or kStatusDiverged after writing
// a divergence record alongside the metrics collected so far.
inline int run_experiment(const ExperimentConfig& config) {
    config.validate();
    if (config.output_dir.empty()) {
        throw std::invalid_argument("config: output_dir must be set (config field or --out)");
    }
    std::filesystem::create_directories(config.output_dir);

    TrainerState state = make_initial_state(config.task, config.train);
    std::string metrics = metrics_csv_header() + "\n";
    std::string divergence;

    for (int step = 1; step <= config.train.total_steps; ++step) {
        const CollectedBatch batch = collect_groups(state, config.task, config.train);
        MetricsRecord record;
        try {
            record = train_step(state, batch, config.train);
        } catch (const divergence_error& e) {
            divergence = "step " + std::to_string(e.step) + ": " + e.what() + "\n";
            break;
        }
        if (config.oracle_every > 0 && step % config.oracle_every == 0) {
            record.exact_expected_reward =
                mean_exact_expected_reward(state.policy, config.task).expected_reward;
        }
        metrics += to_csv_row(record) + "\n";
    }

    atomic_write_file(metrics_path(config.output_dir), metrics);
    if (!divergence.empty()) {
        atomic_write_file(config.output_dir / "divergence.txt", divergence);
        return kStatusDiverged;
    }
    const std::filesystem::path snapshot = policy_path(config.output_dir);
    const std::filesystem::path tmp = snapshot.string() + ".tmp";
    state.policy.save(tmp);
    std::filesystem::rename(tmp, snapshot);
    return kStatusOk;
}

// Comma-separated table of the gradient weighting factor of each requested
// method over a ratio grid, at fixed (pi_old, advantage).
inline void emit_gate_table(const std::vector<GateMethod>& methods, double pi_old,
                            double advantage, double rho_min, double rho_max, int points,
                            const GateParams& params, const std::filesystem::path& out_path) {
    params.validate();
    if (methods.empty()) throw std::invalid_argument("gate table: need at least one method");
    if (points < 2) throw std::invalid_argument("gate table: grid needs at least 2 points");
    if (!(rho_min < rho_max)) throw std::invalid_argument("gate table: need rho_min < rho_max");
    if (!(rho_min > 0.0)) throw std::invalid_argument("gate table: ratios must be positive");
    if (!(pi_old > 0.0 && pi_old <= 1.0)) {
        throw std::invalid_argument("gate table: pi_old must be in (0, 1]");
    }

    std::string table = "rho";
    for (GateMethod m : methods) {
        table += ',';
        table += to_string(m);
    }
    table += '\n';
    for (int i = 0; i < points; ++i) {
        const double rho = rho_min + (rho_max - rho_min) * i / (points - 1);
        const TokenStep step{rho, advantage, pi_old, std::log(rho)};
        table += format_double(rho);
        for (GateMethod m : methods) {
            table += ',';
            table += format_double(gate_weight(m, step, params));
        }
        table += '\n';
    }
    atomic_write_file(out_path, table);
}

inline void apply_sweep_value(TrainConfig& cfg, std::string_view param, double value) {
    if (param == "alpha") {
        cfg.gate.alpha = value;
    } else if (param == "beta_low") {
        cfg.gate.beta_low = value;
    } else if (param == "beta_high") {
        cfg.gate.beta_high = value;
    } else if (param == "beta") {
        cfg.gate.beta_low = value;
        cfg.gate.beta_high = value;
    } else if (param == "learning_rate") {
        cfg.learning_rate = value;
    } else if (param == "eps_high") {
        cfg.gate.eps_high = value;
    } else {
        throw std::invalid_argument("sweep: unknown parameter " + std::string(param));
    }
}

// One run per value with derived seeds (base seed + index); writes an index
// file mapping values to output directories once every run has finished.
inline int run_sweep(const ExperimentConfig& base, std::string_view param,
                     const std::vector<double>& values, const std::filesystem::path& out_dir) {
    if (values.empty()) throw std::invalid_argument("sweep: value list must not be empty");
    std::filesystem::create_directories(out_dir);

    std::string index = "param,value,path,status\n";
    int status = kStatusOk;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ExperimentConfig cfg = base;
        apply_sweep_value(cfg.train, param, values[i]);
        cfg.train.seed = base.train.seed + i;
        const std::string leaf = std::string(param) + "_" + format_double(values[i]);
        cfg.output_dir = out_dir / leaf;
        const int run_status = run_experiment(cfg);
        if (run_status != kStatusOk) status = run_status;
        index += std::string(param) + "," + format_double(values[i]) + "," + leaf + "," +
                 std::to_string(run_status) + "\n";
    }
    atomic_write_file(out_dir / "index.csv", index);
    return status;
}

}  // namespace rlvr
