#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rlvr/experiment.hpp"

using namespace rlvr;

namespace {

namespace fs = std::filesystem;

struct ScratchDir {
    fs::path path;
    ScratchDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("rlvr_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig small_experiment() {
    ExperimentConfig cfg;
    cfg.task.kind = TaskKind::modsum;
    cfg.task.vocab_size = 4;
    cfg.task.seq_len = 2;
    cfg.task.num_queries = 2;
    cfg.task.modsum_residues = {0, 2};
    cfg.train.method = GateMethod::maspo;
    cfg.train.groups_per_step = 2;
    cfg.train.group_size = 4;
    cfg.train.minibatches_per_step = 4;
    cfg.train.learning_rate = 0.05;
    cfg.train.total_steps = 6;
    cfg.train.seed = 21;
    cfg.oracle_every = 3;
    return cfg;
}

int count_rows(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    int rows = -1;  // first line is the header
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    return rows;
}

}  // namespace

TEST_CASE("run_experiment writes metrics and a policy snapshot", "[experiment]") {
    ScratchDir scratch("run");
    ExperimentConfig cfg = small_experiment();
    cfg.output_dir = scratch.path / "run";
    REQUIRE(run_experiment(cfg) == kStatusOk);

    const std::string metrics = slurp(metrics_path(cfg.output_dir));
    REQUIRE(count_rows(metrics) == cfg.train.total_steps);
    REQUIRE(metrics.rfind(metrics_csv_header() + "\n", 0) == 0);

    const TabularPolicy policy = TabularPolicy::load(policy_path(cfg.output_dir));
    REQUIRE(policy.vocab_size() == 4);
    REQUIRE(policy.num_queries() == 2);

    // Oracle column filled only on the configured cadence.
    std::istringstream lines(metrics);
    std::string line;
    std::getline(lines, line);
    int step = 0;
    while (std::getline(lines, line)) {
        ++step;
        const bool has_oracle = line.back() != ',';
        REQUIRE(has_oracle == (step % cfg.oracle_every == 0));
    }
}

TEST_CASE("zero-step runs produce a header-only metrics file", "[experiment]") {
    ScratchDir scratch("zero");
    ExperimentConfig cfg = small_experiment();
    cfg.train.total_steps = 0;
    cfg.output_dir = scratch.path / "zero";
    REQUIRE(run_experiment(cfg) == kStatusOk);
    REQUIRE(slurp(metrics_path(cfg.output_dir)) == metrics_csv_header() + "\n");
}

TEST_CASE("identical (config, seed) runs are byte-identical", "[experiment]") {
    ScratchDir scratch("det");
    ExperimentConfig cfg = small_experiment();
    cfg.output_dir = scratch.path / "a";
    run_experiment(cfg);
    cfg.output_dir = scratch.path / "b";
    run_experiment(cfg);
    const std::string a = slurp(metrics_path(scratch.path / "a"));
    const std::string b = slurp(metrics_path(scratch.path / "b"));
    REQUIRE(!a.empty());
    REQUIRE(a == b);
    REQUIRE(slurp(policy_path(scratch.path / "a")) == slurp(policy_path(scratch.path / "b")));
}

TEST_CASE("no temp files survive a finished run", "[experiment]") {
    ScratchDir scratch("tmp");
    ExperimentConfig cfg = small_experiment();
    cfg.output_dir = scratch.path / "run";
    run_experiment(cfg);
    for (const auto& entry : fs::recursive_directory_iterator(scratch.path)) {
        REQUIRE(entry.path().extension() != ".tmp");
    }
}

TEST_CASE("missing output directory is a configuration error", "[experiment]") {
    ExperimentConfig cfg = small_experiment();
    REQUIRE_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("diverging runs exit nonzero and leave a divergence record", "[experiment]") {
    ScratchDir scratch("diverge");
    ExperimentConfig cfg = small_experiment();
    // Adam caps each update near the learning rate, so only a rate close to
    // the double range can push a logit past it: two same-sign updates of
    // ~1e308 overflow to infinity.
    cfg.train.learning_rate = 1e308;
    cfg.train.total_steps = 10;
    cfg.oracle_every = 0;
    cfg.output_dir = scratch.path / "run";
    REQUIRE(run_experiment(cfg) == kStatusDiverged);
    REQUIRE(fs::exists(cfg.output_dir / "divergence.txt"));
    REQUIRE(fs::exists(metrics_path(cfg.output_dir)));
    const std::string record = slurp(cfg.output_dir / "divergence.txt");
    REQUIRE(record.find("non-finite") != std::string::npos);
}

TEST_CASE("gate tables tabulate every requested method", "[experiment]") {
    ScratchDir scratch("table");
    const fs::path out = scratch.path / "table.csv";
    const std::vector<GateMethod> methods{GateMethod::maspo, GateMethod::grpo, GateMethod::sapo};
    const GateParams params;
    emit_gate_table(methods, 0.25, 1.0, 0.5, 1.5, 11, params, out);

    std::istringstream lines(slurp(out));
    std::string line;
    std::getline(lines, line);
    REQUIRE(line == "rho,maspo,grpo,sapo");
    int rows = 0;
    bool saw_unit_row = false;
    bool saw_frozen_row = false;
    while (std::getline(lines, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(cells, cell, ',')) values.push_back(std::stod(cell));
        REQUIRE(values.size() == 4);
        const TokenStep step{values[0], 1.0, 0.25, std::log(values[0])};
        REQUIRE(values[1] == maspo_gate(step, params));
        REQUIRE(values[3] == sapo_gate(step, params, false));
        if (values[0] == 1.0) {
            saw_unit_row = true;
            REQUIRE(values[1] == 1.0);
            REQUIRE(values[2] == 1.0);
            REQUIRE(values[3] == 1.0);
        }
        if (values[0] == 1.5) {
            // Frozen arbitrary-precision evaluations at rho=1.5, pi=0.25.
            saw_frozen_row = true;
            REQUIRE_THAT(values[1],
                         Catch::Matchers::WithinAbs(0.95000684658820925, 1e-12));
            REQUIRE_THAT(values[3],
                         Catch::Matchers::WithinAbs(0.94001484880637796, 1e-12));
        }
        if (values[0] > 1.2000001) REQUIRE(values[2] == 0.0);  // grpo clipped region
    }
    REQUIRE(rows == 11);
    REQUIRE(saw_unit_row);
    REQUIRE(saw_frozen_row);
}

TEST_CASE("gate table grid validation", "[experiment]") {
    ScratchDir scratch("tablebad");
    const fs::path out = scratch.path / "t.csv";
    const std::vector<GateMethod> methods{GateMethod::maspo};
    REQUIRE_THROWS_AS(emit_gate_table(methods, 0.5, 1.0, 1.5, 0.5, 11, GateParams{}, out),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(emit_gate_table(methods, 0.5, 1.0, 0.5, 1.5, 1, GateParams{}, out),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(emit_gate_table(methods, 0.5, 1.0, -0.5, 1.5, 5, GateParams{}, out),
                      std::invalid_argument);
}

TEST_CASE("sweeps write one run per value plus an index", "[experiment]") {
    ScratchDir scratch("sweep");
    ExperimentConfig base = small_experiment();
    base.train.total_steps = 3;

    SECTION("a single-value sweep reproduces a plain run") {
        run_sweep(base, "alpha", {0.3}, scratch.path / "sweep");
        ExperimentConfig direct = base;
        direct.train.gate.alpha = 0.3;
        direct.output_dir = scratch.path / "direct";
        run_experiment(direct);
        REQUIRE(slurp(metrics_path(scratch.path / "sweep" / "alpha_0.3")) ==
                slurp(metrics_path(scratch.path / "direct")));
    }
    SECTION("multi-value sweeps derive seeds by index") {
        run_sweep(base, "beta", {0.0, 0.1}, scratch.path / "sweep");
        const std::string index = slurp(scratch.path / "sweep" / "index.csv");
        REQUIRE(index.rfind("param,value,path,status\n", 0) == 0);
        REQUIRE(index.find("beta,0,beta_0,0") != std::string::npos);
        REQUIRE(index.find("beta,0.1,beta_0.1,0") != std::string::npos);
        REQUIRE(fs::exists(metrics_path(scratch.path / "sweep" / "beta_0")));
        REQUIRE(fs::exists(metrics_path(scratch.path / "sweep" / "beta_0.1")));
    }
    SECTION("empty value lists are an error with no outputs") {
        REQUIRE_THROWS_AS(run_sweep(base, "alpha", {}, scratch.path / "sweep"),
                          std::invalid_argument);
        REQUIRE_FALSE(fs::exists(scratch.path / "sweep" / "index.csv"));
    }
    SECTION("unknown parameter names are rejected") {
        REQUIRE_THROWS_AS(run_sweep(base, "gamma", {0.1}, scratch.path / "sweep"),
                          std::invalid_argument);
    }
}
