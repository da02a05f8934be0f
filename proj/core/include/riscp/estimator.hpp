// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riscp/channel.hpp"
#include "riscp/linalg.hpp"

namespace riscp {

/// Stopping parameters of the alternating LS estimator.
struct AlsConfig {
    double epsilon = 1e-5;  ///< stop when a squared relative Frobenius change drops below this
    int max_iters = 20;
    double pinv_tol = -1.0;  ///< rank cutoff for the LS updates; < 0 selects eps * max(rows, cols)

    void validate() const;
};

/// Per-iteration convergence record.  The change fields are the squared
/// relative Frobenius changes compared against AlsConfig::epsilon; the
/// residual is the LS objective after the full iteration.
struct IterationStats {
    double h1_change;
    double h2_change;
    double residual;
};

struct EstimationResult {
    ComplexMatrix h1;  ///< N x M estimate
    ComplexMatrix h2;  ///< K x N estimate
    int iterations = 0;
    bool converged = false;
    std::vector<IterationStats> history;  ///< one entry per iteration run
};

struct FeasibilityReport {
    bool feasible = false;
    std::vector<std::string> violations;

    std::string message() const;
};

/// Identifiability gate: M >= N, K >= N and P <= N.  The report names
/// every violated inequality.
FeasibilityReport check_feasibility(const SystemDims& dims);

/// Initial H1 estimate: the adjoint of the N dominant right singular
/// vectors of the mode-2 stack (KP x M), an N x M matrix spanning the
/// same row space as H1 on noiseless data.  Throws DegenerateInputError
/// when the stack has fewer than N numerically nonzero singular values.
ComplexMatrix init_h1(const ReceivedTensor& z, int n);

/// Conditional LS update of H2 given H1: minimizes
/// ||Z1 - (H1^T kr Phi) H2^T||_F over H2.  Z1 is the mode-1 stack
/// (PM x K).  Throws IllPosedUpdateError when H1^T kr Phi is column
/// rank deficient.
ComplexMatrix als_step_h2(const ComplexMatrix& z1, const ComplexMatrix& h1_hat,
                          const PhaseMatrix& phase, double pinv_tol = -1.0);

/// Conditional LS update of H1 given H2: minimizes
/// ||Z2 - (Phi kr H2) H1||_F over H1.  Z2 is the mode-2 stack (KP x M).
ComplexMatrix als_step_h1(const ComplexMatrix& z2, const ComplexMatrix& h2_hat,
                          const PhaseMatrix& phase, double pinv_tol = -1.0);

/// Alternating LS estimation of (H1, H2) from the received tensor.
///
/// Starts from `initial_h1` when given (N x M), otherwise from
/// init_h1().  Each iteration updates H2 then H1 in closed form and
/// stops as soon as either estimate's squared relative change is at most
/// cfg.epsilon, or after cfg.max_iters iterations.  The returned
/// estimates carry the usual diagonal scaling ambiguity; resolve it with
/// metrics::normalize_first_column before comparing against a truth.
EstimationResult als_estimate(const ReceivedTensor& z, const PhaseMatrix& phase,
                              const AlsConfig& cfg = {},
                              const std::optional<ComplexMatrix>& initial_h1 = std::nullopt);

/// Genie-aided baselines: one conditional LS solve with the other
/// channel perfectly known.  These are exactly one ALS half-step
/// evaluated at the truth.
ComplexMatrix genie_ls_h2(const ReceivedTensor& z, const ComplexMatrix& h1_true,
                          const PhaseMatrix& phase, double pinv_tol = -1.0);
ComplexMatrix genie_ls_h1(const ReceivedTensor& z, const ComplexMatrix& h2_true,
                          const PhaseMatrix& phase, double pinv_tol = -1.0);

}  // namespace riscp
