#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlvr/rng.hpp"

namespace rlvr {

// Softmax of one logit row with log-probabilities, computed with
// max-subtraction for stability.
struct SoftmaxRow {
    std::vector<double> probs;
    std::vector<double> logps;

    double entropy() const {
        double h = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k) h -= probs[k] * logps[k];
        return h;
    }
};

struct LogProb {
    double total;
    std::vector<double> per_token;
};

// Gradient of log-probability at one position: the visited logit row gets
// one_hot(token) - softmax(row), every other coordinate is zero.
struct PositionGrad {
    std::size_t offset;          // flat index of the row's first coordinate
    std::vector<double> values;  // length vocab_size
};

// First-order-Markov autoregressive softmax policy over fixed-length token
// sequences. Rows are indexed by (query, position, previous token), where
// previous-token index V is the start-of-sequence marker.
class TabularPolicy {
public:
    TabularPolicy(int num_queries, int seq_len, int vocab_size, double fill = 0.0)
        : num_queries_(num_queries), seq_len_(seq_len), vocab_(vocab_size) {
        if (num_queries < 1 || seq_len < 1 || vocab_size < 1) {
            throw std::domain_error("TabularPolicy: dimensions must be positive");
        }
        logits_.assign(static_cast<std::size_t>(num_queries) * seq_len * (vocab_size + 1) * vocab_size,
                       fill);
    }

    int num_queries() const { return num_queries_; }
    int seq_len() const { return seq_len_; }
    int vocab_size() const { return vocab_; }
    std::size_t param_count() const { return logits_.size(); }

    std::span<double> params() { return logits_; }
    std::span<const double> params() const { return logits_; }

    std::size_t row_offset(int query, int pos, int prev) const {
        check_query(query);
        if (pos < 0 || pos >= seq_len_ || prev < 0 || prev > vocab_) {
            throw std::domain_error("TabularPolicy: row index out of range");
        }
        return ((static_cast<std::size_t>(query) * seq_len_ + pos) * (vocab_ + 1) + prev) *
               vocab_;
    }

    SoftmaxRow softmax_row(int query, int pos, int prev) const {
        const std::size_t base = row_offset(query, pos, prev);
        SoftmaxRow row;
        row.probs.resize(vocab_);
        row.logps.resize(vocab_);
        double peak = logits_[base];
        for (int k = 1; k < vocab_; ++k) peak = std::max(peak, logits_[base + k]);
        double sum = 0.0;
        for (int k = 0; k < vocab_; ++k) {
            row.probs[k] = std::exp(logits_[base + k] - peak);
            sum += row.probs[k];
        }
        const double log_z = peak + std::log(sum);
        for (int k = 0; k < vocab_; ++k) {
            row.probs[k] /= sum;
            row.logps[k] = logits_[base + k] - log_z;
        }
        return row;
    }

    LogProb log_prob(int query, std::span<const int> tokens) const {
        check_tokens(tokens);
        LogProb out{0.0, {}};
        out.per_token.reserve(tokens.size());
        for (int t = 0; t < seq_len_; ++t) {
            const auto row = softmax_row(query, t, prev_of(tokens, t));
            out.per_token.push_back(row.logps[tokens[t]]);
            out.total += row.logps[tokens[t]];
        }
        return out;
    }

    std::vector<int> sample(int query, RandomStream& rng) const {
        check_query(query);
        std::vector<int> tokens(seq_len_);
        for (int t = 0; t < seq_len_; ++t) {
            const int prev = t == 0 ? vocab_ : tokens[t - 1];
            const auto row = softmax_row(query, t, prev);
            const double u = rng.next_uniform();
            double cum = 0.0;
            int choice = vocab_ - 1;
            for (int k = 0; k < vocab_; ++k) {
                cum += row.probs[k];
                if (u < cum) {
                    choice = k;
                    break;
                }
            }
            tokens[t] = choice;
        }
        return tokens;
    }

    // Mean over positions of the Shannon entropy (nats) of the rows visited
    // along the given token prefix.
    double entropy(int query, std::span<const int> tokens) const {
        check_tokens(tokens);
        double h = 0.0;
        for (int t = 0; t < seq_len_; ++t) {
            h += softmax_row(query, t, prev_of(tokens, t)).entropy();
        }
        return h / seq_len_;
    }

    std::vector<PositionGrad> grad_log_prob(int query, std::span<const int> tokens) const {
        check_tokens(tokens);
        std::vector<PositionGrad> grads;
        grads.reserve(seq_len_);
        for (int t = 0; t < seq_len_; ++t) {
            const int prev = prev_of(tokens, t);
            const auto row = softmax_row(query, t, prev);
            PositionGrad g{row_offset(query, t, prev), {}};
            g.values.resize(vocab_);
            for (int k = 0; k < vocab_; ++k) g.values[k] = -row.probs[k];
            g.values[tokens[t]] += 1.0;
            grads.push_back(std::move(g));
        }
        return grads;
    }

    bool all_finite() const {
        for (double v : logits_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open policy file for writing: " + path.string());
        out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
        const std::array<std::int32_t, 3> dims{num_queries_, seq_len_, vocab_};
        out.write(reinterpret_cast<const char*>(dims.data()), sizeof(dims));
        out.write(reinterpret_cast<const char*>(logits_.data()),
                  static_cast<std::streamsize>(logits_.size() * sizeof(double)));
        if (!out) throw std::runtime_error("failed writing policy file: " + path.string());
    }

    static TabularPolicy load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open policy file: " + path.string());
        std::array<char, 8> magic{};
        in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
        if (!in || std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) {
            throw std::runtime_error("not a policy snapshot: " + path.string());
        }
        std::array<std::int32_t, 3> dims{};
        in.read(reinterpret_cast<char*>(dims.data()), sizeof(dims));
        if (!in) throw std::runtime_error("truncated policy snapshot: " + path.string());
        TabularPolicy policy(dims[0], dims[1], dims[2]);
        in.read(reinterpret_cast<char*>(policy.logits_.data()),
                static_cast<std::streamsize>(policy.logits_.size() * sizeof(double)));
        if (!in) throw std::runtime_error("truncated policy snapshot: " + path.string());
        if (!policy.all_finite()) throw std::runtime_error("policy snapshot holds non-finite logits");
        return policy;
    }

private:
    static constexpr std::array<char, 8> kMagic{'r', 'l', 'v', 'r', 'p', 'o', 'l', '1'};

    void check_query(int query) const {
        if (query < 0 || query >= num_queries_) {
            throw std::domain_error("TabularPolicy: query out of range");
        }
    }

    void check_tokens(std::span<const int> tokens) const {
        if (static_cast<int>(tokens.size()) != seq_len_) {
            throw std::domain_error("TabularPolicy: token sequence must have seq_len entries");
        }
        for (int tok : tokens) {
            if (tok < 0 || tok >= vocab_) {
                throw std::domain_error("TabularPolicy: token out of range");
            }
        }
    }

    int prev_of(std::span<const int> tokens, int t) const {
        return t == 0 ? vocab_ : tokens[t - 1];
    }

    int num_queries_, seq_len_, vocab_;
    std::vector<double> logits_;
};

}  // namespace rlvr
