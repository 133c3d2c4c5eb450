#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rlvr {

// Instance exceeds what exhaustive enumeration is allowed to handle.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A training update produced a non-finite parameter.
struct divergence_error : std::runtime_error {
    divergence_error(std::int64_t step_, const std::string& message)
        : std::runtime_error(message), step(step_) {}
    std::int64_t step;
};

}  // namespace rlvr
