#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlvr/errors.hpp"
#include "rlvr/policy.hpp"

namespace rlvr {

enum class TaskKind { copy, modsum };

inline std::string_view to_string(TaskKind kind) {
    return kind == TaskKind::copy ? "copy" : "modsum";
}

inline TaskKind parse_task_kind(std::string_view name) {
    if (name == "copy") return TaskKind::copy;
    if (name == "modsum") return TaskKind::modsum;
    throw std::invalid_argument("unknown task kind: " + std::string(name));
}

// Exhaustive enumeration is restricted to this many sequences.
inline constexpr std::int64_t kEnumerationCapacity = 4096;

// Synthetic verifiable-reward task over fixed-length token sequences.
// copy rewards exact reproduction of a per-query target (rare successes);
// modsum rewards hitting a per-query residue of the token sum (frequent
// successes). The two sit at opposite ends of the advantage spectrum.
struct TaskSpec {
    TaskKind kind = TaskKind::copy;
    int vocab_size = 0;
    int seq_len = 0;
    int num_queries = 0;
    std::vector<std::vector<int>> copy_targets;  // copy: per-query target sequence
    std::vector<int> modsum_residues;            // modsum: per-query residue in [0, V)

    void validate() const {
        if (vocab_size < 1 || seq_len < 1 || num_queries < 1) {
            throw std::invalid_argument("TaskSpec: dimensions must be positive");
        }
        if (kind == TaskKind::copy) {
            if (static_cast<int>(copy_targets.size()) != num_queries) {
                throw std::invalid_argument("TaskSpec: need one copy target per query");
            }
            for (const auto& target : copy_targets) {
                if (static_cast<int>(target.size()) != seq_len) {
                    throw std::invalid_argument("TaskSpec: copy target length must equal seq_len");
                }
                for (int tok : target) {
                    if (tok < 0 || tok >= vocab_size) {
                        throw std::invalid_argument("TaskSpec: copy target token out of range");
                    }
                }
            }
        } else {
            if (static_cast<int>(modsum_residues.size()) != num_queries) {
                throw std::invalid_argument("TaskSpec: need one modsum residue per query");
            }
            for (int r : modsum_residues) {
                if (r < 0 || r >= vocab_size) {
                    throw std::invalid_argument("TaskSpec: modsum residue out of range");
                }
            }
        }
    }

    std::int64_t sequence_space_size() const {
        std::int64_t count = 1;
        for (int t = 0; t < seq_len; ++t) {
            count *= vocab_size;
            if (count > kEnumerationCapacity) return count;
        }
        return count;
    }
};

// Deterministic binary verdict: +1 on a correct sequence, -1 otherwise.
inline int verify(const TaskSpec& spec, int query, std::span<const int> tokens) {
    if (query < 0 || query >= spec.num_queries) {
        throw std::domain_error("verify: query out of range");
    }
    if (static_cast<int>(tokens.size()) != spec.seq_len) {
        throw std::domain_error("verify: token sequence must have seq_len entries");
    }
    for (int tok : tokens) {
        if (tok < 0 || tok >= spec.vocab_size) {
            throw std::domain_error("verify: token out of range");
        }
    }
    if (spec.kind == TaskKind::copy) {
        const auto& target = spec.copy_targets[query];
        for (int t = 0; t < spec.seq_len; ++t) {
            if (tokens[t] != target[t]) return -1;
        }
        return 1;
    }
    std::int64_t sum = 0;
    for (int tok : tokens) sum += tok;
    return sum % spec.vocab_size == spec.modsum_residues[query] ? 1 : -1;
}

// Exact probability of a +1 reward under the policy, by enumeration of all
// V^T sequences.
inline double success_probability(const TaskSpec& spec, const TabularPolicy& policy, int query) {
    spec.validate();
    const std::int64_t count = spec.sequence_space_size();
    if (count > kEnumerationCapacity) {
        throw capacity_error("success_probability: sequence space exceeds " +
                             std::to_string(kEnumerationCapacity) + " sequences");
    }
    std::vector<int> tokens(spec.seq_len, 0);
    double total = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
        if (verify(spec, query, tokens) > 0) {
            total += std::exp(policy.log_prob(query, tokens).total);
        }
        for (int t = spec.seq_len - 1; t >= 0; --t) {  // odometer increment
            if (++tokens[t] < spec.vocab_size) break;
            tokens[t] = 0;
        }
    }
    return total;
}

}  // namespace rlvr
