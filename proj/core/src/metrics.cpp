// SPDX-License-Identifier: Apache-2.0
#include "riscp/metrics.hpp"

#include <cmath>
#include <string>

#include "riscp/errors.hpp"

namespace riscp {

ChannelPair normalize_first_column(const ChannelPair& pair) {
    if (pair.h1.rows() != pair.h2.cols())
        throw DimensionError("normalize_first_column: H1 rows and H2 columns disagree on N");
    if (pair.h1.cols() < 1) throw DimensionError("normalize_first_column: H1 has no columns");

    ChannelPair out = pair;
    for (Eigen::Index n = 0; n < pair.h1.rows(); ++n) {
        const std::complex<double> pivot = pair.h1(n, 0);
        // a subnormal pivot would overflow the rescaled row
        if (!(std::abs(pivot) >= std::numeric_limits<double>::min()))
            throw DegenerateScalingError("normalize_first_column: H1(" + std::to_string(n) +
                                         ",0) is zero or subnormal");
        out.h1.row(n) /= pivot;
        out.h2.col(n) *= pivot;
    }
    return out;
}

double nmse(const ComplexMatrix& truth, const ComplexMatrix& est) {
    if (truth.rows() != est.rows() || truth.cols() != est.cols())
        throw DimensionError("nmse: shapes differ");
    const double denom = truth.squaredNorm();
    if (denom == 0.0) throw DegenerateInputError("nmse: truth matrix is zero");
    return (truth - est).squaredNorm() / denom;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

NmseRecord aligned_nmse(const ChannelPair& truth, const ChannelPair& estimate) {
    const ChannelPair truth_c = normalize_first_column(truth);
    const ChannelPair est_c = normalize_first_column(estimate);

    NmseRecord record;
    record.nmse_h1 = nmse(truth_c.h1, est_c.h1);
    record.nmse_h2 = nmse(truth_c.h2, est_c.h2);
    record.nmse_h1_db = to_db(record.nmse_h1);
    record.nmse_h2_db = to_db(record.nmse_h2);
    return record;
}

NmseRecord aligned_nmse(const ChannelPair& truth, const EstimationResult& estimate) {
    return aligned_nmse(truth, ChannelPair{estimate.h1, estimate.h2});
}

}  // namespace riscp
