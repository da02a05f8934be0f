// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace riscp {

/// Conformability violation between matrix operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// System dimensions violate an identifiability or training constraint.
struct FeasibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An alternating LS update hit a rank-deficient coefficient matrix.
struct IllPosedUpdateError : std::runtime_error {
    IllPosedUpdateError(const std::string& what, long effective_rank, long required_rank,
                        int iteration = -1)
        : std::runtime_error(what),
          effective_rank(effective_rank),
          required_rank(required_rank),
          iteration(iteration) {}

    long effective_rank;
    long required_rank;
    int iteration;  // -1 when raised outside the ALS loop
};

/// Input carries too little information to start the estimator.
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// First-column normalization hit a (numerically) zero pivot entry.
struct DegenerateScalingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace riscp
