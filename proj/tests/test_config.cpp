#include <catch2/catch_amalgamated.hpp>

#include <string>

#include <json.hpp>

#include "rlvr/config.hpp"

using namespace rlvr;
using nlohmann::json;

namespace {

json base_config_json() {
    return json{
        {"task",
         {{"kind", "modsum"},
          {"vocab_size", 4},
          {"seq_len", 2},
          {"num_queries", 2},
          {"targets", {1, 3}}}},
        {"train",
         {{"method", "maspo"},
          {"groups_per_step", 2},
          {"group_size", 4},
          {"learning_rate", 0.05},
          {"total_steps", 3},
          {"seed", 9}}},
        {"oracle_every", 2},
    };
}

}  // namespace

TEST_CASE("experiment config parses with defaults", "[config]") {
    const ExperimentConfig cfg = parse_experiment_config(base_config_json());
    REQUIRE(cfg.task.kind == TaskKind::modsum);
    REQUIRE(cfg.task.modsum_residues == std::vector<int>{1, 3});
    REQUIRE(cfg.train.method == GateMethod::maspo);
    REQUIRE(cfg.train.minibatches_per_step == 16);
    REQUIRE(cfg.train.adam_beta1 == 0.9);
    REQUIRE(cfg.train.adam_beta2 == 0.95);
    REQUIRE(cfg.train.entropy_coeff == 0.0);
    REQUIRE(cfg.train.gate.sigma_base == 1.0);
    REQUIRE(cfg.train.gate.alpha == 0.3);
    REQUIRE(cfg.train.gate.tau_neg == 1.05);
    REQUIRE(cfg.oracle_every == 2);
}

TEST_CASE("copy configs carry per-query target sequences", "[config]") {
    json node = base_config_json();
    node["task"]["kind"] = "copy";
    node["task"]["targets"] = json::array({{0, 1}, {2, 3}});
    const ExperimentConfig cfg = parse_experiment_config(node);
    REQUIRE(cfg.task.copy_targets.size() == 2);
    REQUIRE(cfg.task.copy_targets[1] == std::vector<int>{2, 3});
}

TEST_CASE("unknown keys are hard errors that name the field", "[config]") {
    json node = base_config_json();
    node["train"]["gate"] = {{"alpha", 0.5}, {"sigma_bse", 1.0}};
    REQUIRE_THROWS_WITH(parse_experiment_config(node),
                        Catch::Matchers::ContainsSubstring("train.gate.sigma_bse"));

    json top = base_config_json();
    top["oracl_every"] = 3;
    REQUIRE_THROWS_WITH(parse_experiment_config(top),
                        Catch::Matchers::ContainsSubstring("oracl_every"));
}

TEST_CASE("missing required fields are named", "[config]") {
    json node = base_config_json();
    node["train"].erase("learning_rate");
    REQUIRE_THROWS_WITH(parse_experiment_config(node),
                        Catch::Matchers::ContainsSubstring("train.learning_rate"));
}

TEST_CASE("type errors are named", "[config]") {
    json node = base_config_json();
    node["train"]["group_size"] = "eight";
    REQUIRE_THROWS_WITH(parse_experiment_config(node),
                        Catch::Matchers::ContainsSubstring("train.group_size"));
}

TEST_CASE("invalid hyperparameters surface their constraint", "[config]") {
    json node = base_config_json();
    node["train"]["gate"] = {{"alpha", 1.5}};
    REQUIRE_THROWS_WITH(parse_experiment_config(node),
                        Catch::Matchers::ContainsSubstring("alpha"));
}

TEST_CASE("config round-trips through serialization", "[config][property]") {
    json node = base_config_json();
    node["train"]["gate"] = {{"alpha", 0.5}, {"beta_low", 0.01}, {"eps_high", 0.265}};
    node["train"]["entropy_coeff"] = 0.01;
    node["output_dir"] = "out/run1";
    const ExperimentConfig cfg = parse_experiment_config(node);
    const json serialized = to_json(cfg);
    const ExperimentConfig reparsed = parse_experiment_config(serialized);
    REQUIRE(to_json(reparsed) == serialized);
    REQUIRE(reparsed.train.gate.eps_high == 0.265);
    REQUIRE(reparsed.output_dir == cfg.output_dir);
    REQUIRE(reparsed.task.kind == cfg.task.kind);
}

TEST_CASE("task targets are validated against dimensions", "[config]") {
    json node = base_config_json();
    node["task"]["targets"] = {1, 3, 2};  // three residues for two queries
    REQUIRE_THROWS_AS(parse_experiment_config(node), std::invalid_argument);
}
