// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

#include "riscp/channel.hpp"
#include "riscp/estimator.hpp"

namespace riscp {

/// Per-trial NMSE measurement plus the metadata needed to reproduce it.
struct NmseRecord {
    double nmse_h1 = std::numeric_limits<double>::quiet_NaN();
    double nmse_h2 = std::numeric_limits<double>::quiet_NaN();
    double nmse_h1_db = std::numeric_limits<double>::quiet_NaN();
    double nmse_h2_db = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    SystemDims dims;
};

/// Canonical form under the diagonal scaling ambiguity: row n of H1 is
/// divided by its first-column entry and column n of H2 is multiplied by
/// the same factor, leaving H2 diag(Phi_p) H1 unchanged for every p.
/// Throws DegenerateScalingError on a zero (or subnormal) pivot.
ChannelPair normalize_first_column(const ChannelPair& pair);

/// Squared Frobenius error normalized by the truth:
/// ||truth - est||_F^2 / ||truth||_F^2.
double nmse(const ComplexMatrix& truth, const ComplexMatrix& est);

double to_db(double linear);

/// Scaling-invariant NMSE: both the truth pair and the estimate pair are
/// brought to the canonical form of normalize_first_column, then NMSE is
/// computed per channel.
NmseRecord aligned_nmse(const ChannelPair& truth, const ChannelPair& estimate);
NmseRecord aligned_nmse(const ChannelPair& truth, const EstimationResult& estimate);

}  // namespace riscp
