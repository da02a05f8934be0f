// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "riscp/linalg.hpp"

namespace riscp {

/// System dimensions: M BS antennas serving K single-antenna users via an
/// N-element reflecting surface, trained with P phase configurations of T
/// pilot slots each.
struct SystemDims {
    int m = 0;  ///< BS antenna count
    int k = 0;  ///< user count
    int n = 0;  ///< RIS element count
    int p = 0;  ///< training phase configurations
    int t = 0;  ///< pilot time slots per configuration

    /// Throws FeasibilityError unless all dimensions are positive and
    /// T >= M (pilot removal needs full-row-rank pilots).
    void validate() const;

    /// Identifiability: M >= N, K >= N and P <= N.
    bool feasible() const { return m >= n && k >= n && p <= n; }
};

/// The two estimation targets: H1 (N x M, surface-to-BS side) and
/// H2 (K x N, users-to-surface side).
struct ChannelPair {
    ComplexMatrix h1;
    ComplexMatrix h2;
};

/// P x N unit-modulus training configurations; row p configures the
/// surface during the p-th training phase.
struct PhaseMatrix {
    ComplexMatrix phi;

    int phases() const { return static_cast<int>(phi.rows()); }
    int elements() const { return static_cast<int>(phi.cols()); }
};

/// M x T pilot block with orthonormal rows (X X^H = I_M).
struct PilotMatrix {
    ComplexMatrix x;
};

/// Noise level expressed on the SNR axis; sigma2 = 10^(-snr_db/10), so
/// 0 dB corresponds to unit-variance noise entries.  snr_db = +inf is the
/// exact noiseless case (sigma2 = 0).
struct NoiseSpec {
    double snr_db = 0.0;
    double sigma2 = 1.0;

    static NoiseSpec from_snr_db(double snr_db) {
        return {snr_db, std::pow(10.0, -snr_db / 10.0)};
    }
    static NoiseSpec noiseless() {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
};

/// The P-slice stack of post-pilot-removal observations; slice p is the
/// K x M matrix seen under the p-th phase configuration.  Provenance
/// fields record how the tensor was produced.
struct ReceivedTensor {
    std::vector<ComplexMatrix> slices;
    SystemDims dims;
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;

    int users() const { return slices.empty() ? 0 : static_cast<int>(slices.front().rows()); }
    int antennas() const { return slices.empty() ? 0 : static_cast<int>(slices.front().cols()); }
    int phases() const { return static_cast<int>(slices.size()); }
};

/// i.i.d. CN(0,1) channel pair drawn from a deterministic stream; equal
/// seeds reproduce bit-identical matrices.
ChannelPair generate_channels(const SystemDims& dims, std::uint64_t rng_seed);

/// P x N DFT phase matrix, Phi(p,n) = exp(-j 2 pi (p-1)(n-1) / N).
/// Rows are mutually orthogonal: Phi Phi^H = N I_P.  Requires P <= N.
PhaseMatrix dft_phase(int p, int n);

/// First M rows of the T-point unitary DFT matrix; X X^H = I_M exactly.
/// Requires T >= M.
PilotMatrix generate_pilots(int m, int t);

/// Received blocks Y_p = H2 diag(Phi_p) H1 X + W_p, p = 1..P, with W_p
/// entries i.i.d. CN(0, sigma2) drawn deterministically from rng_seed.
std::vector<ComplexMatrix> synthesize_received(const ChannelPair& channels,
                                               const PhaseMatrix& phase, const PilotMatrix& pilots,
                                               const NoiseSpec& noise, std::uint64_t rng_seed);

/// Pilot removal: slice p of the result is Y_p X^H (K x M).  Provenance
/// is attached verbatim when supplied by the caller.
ReceivedTensor remove_pilots(const std::vector<ComplexMatrix>& received, const PilotMatrix& pilots,
                             const SystemDims& dims = {},
                             double snr_db = std::numeric_limits<double>::quiet_NaN(),
                             std::uint64_t seed = 0);

// Matrix-stacked forms of the received tensor under the unfolding row
// conventions; on noiseless input stack_mode1 equals unfold_mode1(...)
// and stack_mode2 equals unfold_mode2(...).
ComplexMatrix stack_mode1(const ReceivedTensor& z);  // PM x K
ComplexMatrix stack_mode2(const ReceivedTensor& z);  // KP x M

}  // namespace riscp
