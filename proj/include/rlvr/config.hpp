#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rlvr/tasks.hpp"
#include "rlvr/trainer.hpp"

namespace rlvr {

// Strict view over one JSON object: typed getters record which keys were
// consumed and finish() rejects anything left over, so misspelled
// hyperparameter names are hard errors.
class JsonObject {
public:
    JsonObject(const nlohmann::json& node, std::string path)
        : node_(&node), path_(std::move(path)) {
        if (!node.is_object()) {
            throw std::invalid_argument("config: " + (path_.empty() ? "root" : path_) +
                                        " must be an object");
        }
    }

    std::string member(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const nlohmann::json& require(const std::string& key) {
        seen_.insert(key);
        const auto it = node_->find(key);
        if (it == node_->end()) {
            throw std::invalid_argument("config: missing field " + member(key));
        }
        return *it;
    }

    const nlohmann::json* optional(const std::string& key) {
        seen_.insert(key);
        const auto it = node_->find(key);
        return it == node_->end() ? nullptr : &*it;
    }

    double number(const std::string& key) { return as_number(require(key), member(key)); }

    double number_or(const std::string& key, double fallback) {
        const auto* j = optional(key);
        return j ? as_number(*j, member(key)) : fallback;
    }

    int integer(const std::string& key) { return as_integer(require(key), member(key)); }

    int integer_or(const std::string& key, int fallback) {
        const auto* j = optional(key);
        return j ? as_integer(*j, member(key)) : fallback;
    }

    std::uint64_t uinteger(const std::string& key) {
        const auto& j = require(key);
        if (j.is_number_unsigned()) return j.get<std::uint64_t>();
        if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
        throw std::invalid_argument("config: " + member(key) + " must be a non-negative integer");
    }

    std::string text(const std::string& key) {
        const auto& j = require(key);
        if (!j.is_string()) throw std::invalid_argument("config: " + member(key) + " must be a string");
        return j.get<std::string>();
    }

    std::string text_or(const std::string& key, std::string fallback) {
        const auto* j = optional(key);
        if (!j) return fallback;
        if (!j->is_string()) throw std::invalid_argument("config: " + member(key) + " must be a string");
        return j->get<std::string>();
    }

    std::vector<int> int_list(const std::string& key) {
        return as_int_list(require(key), member(key));
    }

    std::vector<std::vector<int>> int_matrix(const std::string& key) {
        const auto& j = require(key);
        if (!j.is_array()) throw std::invalid_argument("config: " + member(key) + " must be an array");
        std::vector<std::vector<int>> out;
        for (std::size_t i = 0; i < j.size(); ++i) {
            out.push_back(as_int_list(j[i], member(key) + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    void finish() const {
        for (auto it = node_->begin(); it != node_->end(); ++it) {
            if (!seen_.contains(it.key())) {
                throw std::invalid_argument("config: unknown field " + member(it.key()));
            }
        }
    }

private:
    static double as_number(const nlohmann::json& j, const std::string& where) {
        if (!j.is_number()) throw std::invalid_argument("config: " + where + " must be a number");
        return j.get<double>();
    }

    static int as_integer(const nlohmann::json& j, const std::string& where) {
        if (!j.is_number_integer()) {
            throw std::invalid_argument("config: " + where + " must be an integer");
        }
        return j.get<int>();
    }

    static std::vector<int> as_int_list(const nlohmann::json& j, const std::string& where) {
        if (!j.is_array()) throw std::invalid_argument("config: " + where + " must be an array");
        std::vector<int> out;
        for (std::size_t i = 0; i < j.size(); ++i) {
            out.push_back(as_integer(j[i], where + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    const nlohmann::json* node_;
    std::string path_;
    std::set<std::string> seen_;
};

struct ExperimentConfig {
    TaskSpec task;
    TrainConfig train;
    std::filesystem::path output_dir;
    int oracle_every = 0;  // steps between exact-expectation evaluations; 0 = off

    void validate() const {
        task.validate();
        train.validate();
        if (oracle_every < 0) throw std::invalid_argument("config: oracle_every must be >= 0");
        if (oracle_every > 0 && task.sequence_space_size() > kEnumerationCapacity) {
            throw std::invalid_argument(
                "config: oracle_every requires a sequence space within enumeration capacity");
        }
    }
};

inline GateParams parse_gate_params(const nlohmann::json& node, const std::string& path) {
    JsonObject obj(node, path);
    GateParams p;
    p.sigma_base = obj.number_or("sigma_base", p.sigma_base);
    p.alpha = obj.number_or("alpha", p.alpha);
    p.beta_low = obj.number_or("beta_low", p.beta_low);
    p.beta_high = obj.number_or("beta_high", p.beta_high);
    p.eps_low = obj.number_or("eps_low", p.eps_low);
    p.eps_high = obj.number_or("eps_high", p.eps_high);
    p.tau_pos = obj.number_or("tau_pos", p.tau_pos);
    p.tau_neg = obj.number_or("tau_neg", p.tau_neg);
    p.sigma_cap = obj.number_or("sigma_cap", p.sigma_cap);
    p.risk_floor = obj.number_or("risk_floor", p.risk_floor);
    p.risk_cap = obj.number_or("risk_cap", p.risk_cap);
    obj.finish();
    return p;
}

inline TaskSpec parse_task_spec(const nlohmann::json& node, const std::string& path) {
    JsonObject obj(node, path);
    TaskSpec task;
    task.kind = parse_task_kind(obj.text("kind"));
    task.vocab_size = obj.integer("vocab_size");
    task.seq_len = obj.integer("seq_len");
    task.num_queries = obj.integer("num_queries");
    if (task.kind == TaskKind::copy) {
        task.copy_targets = obj.int_matrix("targets");
    } else {
        task.modsum_residues = obj.int_list("targets");
    }
    obj.finish();
    task.validate();
    return task;
}

inline TrainConfig parse_train_config(const nlohmann::json& node, const std::string& path) {
    JsonObject obj(node, path);
    TrainConfig cfg;
    cfg.method = parse_gate_method(obj.text("method"));
    if (const auto* gate = obj.optional("gate")) {
        cfg.gate = parse_gate_params(*gate, obj.member("gate"));
    }
    cfg.groups_per_step = obj.integer("groups_per_step");
    cfg.group_size = obj.integer("group_size");
    cfg.minibatches_per_step = obj.integer_or("minibatches_per_step", cfg.minibatches_per_step);
    cfg.learning_rate = obj.number("learning_rate");
    cfg.adam_beta1 = obj.number_or("adam_beta1", cfg.adam_beta1);
    cfg.adam_beta2 = obj.number_or("adam_beta2", cfg.adam_beta2);
    cfg.adam_eps = obj.number_or("adam_eps", cfg.adam_eps);
    cfg.entropy_coeff = obj.number_or("entropy_coeff", cfg.entropy_coeff);
    cfg.adv_reweight_alpha = obj.number_or("adv_reweight_alpha", cfg.adv_reweight_alpha);
    cfg.total_steps = obj.integer("total_steps");
    cfg.seed = obj.uinteger("seed");
    obj.finish();
    cfg.validate();
    return cfg;
}

inline ExperimentConfig parse_experiment_config(const nlohmann::json& node) {
    JsonObject obj(node, "");
    ExperimentConfig cfg;
    cfg.task = parse_task_spec(obj.require("task"), "task");
    cfg.train = parse_train_config(obj.require("train"), "train");
    cfg.output_dir = obj.text_or("output_dir", "");
    cfg.oracle_every = obj.integer_or("oracle_every", 0);
    obj.finish();
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    nlohmann::json node;
    try {
        node = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + path.string() + ": " + e.what());
    }
    return parse_experiment_config(node);
}

inline nlohmann::json to_json(const GateParams& p) {
    return nlohmann::json{
        {"sigma_base", p.sigma_base}, {"alpha", p.alpha},
        {"beta_low", p.beta_low},     {"beta_high", p.beta_high},
        {"eps_low", p.eps_low},       {"eps_high", p.eps_high},
        {"tau_pos", p.tau_pos},       {"tau_neg", p.tau_neg},
        {"sigma_cap", p.sigma_cap},   {"risk_floor", p.risk_floor},
        {"risk_cap", p.risk_cap},
    };
}

inline nlohmann::json to_json(const TaskSpec& task) {
    nlohmann::json node{
        {"kind", to_string(task.kind)},
        {"vocab_size", task.vocab_size},
        {"seq_len", task.seq_len},
        {"num_queries", task.num_queries},
    };
    if (task.kind == TaskKind::copy) {
        node["targets"] = task.copy_targets;
    } else {
        node["targets"] = task.modsum_residues;
    }
    return node;
}

inline nlohmann::json to_json(const TrainConfig& cfg) {
    return nlohmann::json{
        {"method", to_string(cfg.method)},
        {"gate", to_json(cfg.gate)},
        {"groups_per_step", cfg.groups_per_step},
        {"group_size", cfg.group_size},
        {"minibatches_per_step", cfg.minibatches_per_step},
        {"learning_rate", cfg.learning_rate},
        {"adam_beta1", cfg.adam_beta1},
        {"adam_beta2", cfg.adam_beta2},
        {"adam_eps", cfg.adam_eps},
        {"entropy_coeff", cfg.entropy_coeff},
        {"adv_reweight_alpha", cfg.adv_reweight_alpha},
        {"total_steps", cfg.total_steps},
        {"seed", cfg.seed},
    };
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json node{
        {"task", to_json(cfg.task)},
        {"train", to_json(cfg.train)},
        {"oracle_every", cfg.oracle_every},
    };
    if (!cfg.output_dir.empty()) node["output_dir"] = cfg.output_dir.string();
    return node;
}

}  // namespace rlvr
