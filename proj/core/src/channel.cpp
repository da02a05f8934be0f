// SPDX-License-Identifier: Apache-2.0
#include "riscp/channel.hpp"

#include <numbers>
#include <string>

#include "riscp/errors.hpp"
#include "riscp/rng.hpp"

namespace riscp {

void SystemDims::validate() const {
    if (m <= 0 || k <= 0 || n <= 0 || p <= 0 || t <= 0)
        throw FeasibilityError("system dims must be positive: M=" + std::to_string(m) +
                               " K=" + std::to_string(k) + " N=" + std::to_string(n) +
                               " P=" + std::to_string(p) + " T=" + std::to_string(t));
    if (t < m)
        throw FeasibilityError("pilot slots T=" + std::to_string(t) +
                               " < M=" + std::to_string(m) + "; orthogonal pilots need T >= M");
}

ChannelPair generate_channels(const SystemDims& dims, std::uint64_t rng_seed) {
    dims.validate();
    ComplexGaussian rng(rng_seed);
    ChannelPair out;
    out.h1 = rng.matrix(dims.n, dims.m);
    out.h2 = rng.matrix(dims.k, dims.n);
    return out;
}

PhaseMatrix dft_phase(int p, int n) {
    if (p <= 0 || n <= 0) throw FeasibilityError("dft_phase: P and N must be positive");
    if (p > n)
        throw FeasibilityError("dft_phase: P=" + std::to_string(p) + " > N=" + std::to_string(n) +
                               "; training phases may not exceed surface elements");
    ComplexMatrix phi(p, n);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (int row = 0; row < p; ++row)
        for (int col = 0; col < n; ++col)
            phi(row, col) = std::polar(1.0, step * static_cast<double>(row) * col);
    return {phi};
}

PilotMatrix generate_pilots(int m, int t) {
    if (m <= 0 || t <= 0) throw FeasibilityError("generate_pilots: M and T must be positive");
    if (t < m)
        throw FeasibilityError("generate_pilots: T=" + std::to_string(t) +
                               " < M=" + std::to_string(m));
    ComplexMatrix x(m, t);
    const double scale = 1.0 / std::sqrt(static_cast<double>(t));
    const double step = -2.0 * std::numbers::pi / static_cast<double>(t);
    for (int row = 0; row < m; ++row)
        for (int col = 0; col < t; ++col)
            x(row, col) = std::polar(scale, step * static_cast<double>(row) * col);
    return {x};
}

std::vector<ComplexMatrix> synthesize_received(const ChannelPair& channels,
                                               const PhaseMatrix& phase, const PilotMatrix& pilots,
                                               const NoiseSpec& noise, std::uint64_t rng_seed) {
    const auto n = channels.h1.rows();
    if (channels.h2.cols() != n || phase.phi.cols() != n)
        throw DimensionError("synthesize_received: H1/H2/Phi disagree on N");
    if (pilots.x.rows() != channels.h1.cols())
        throw DimensionError("synthesize_received: H1 columns and pilot rows disagree on M");

    const auto p = phase.phi.rows();
    ComplexGaussian rng(rng_seed);
    std::vector<ComplexMatrix> received;
    received.reserve(p);
    const ComplexMatrix h1x = channels.h1 * pilots.x;  // N x T, shared across phases
    for (Eigen::Index i = 0; i < p; ++i) {
        ComplexMatrix y = channels.h2 * phase.phi.row(i).asDiagonal() * h1x;
        if (noise.sigma2 > 0.0) y += rng.matrix(y.rows(), y.cols(), noise.sigma2);
        received.push_back(std::move(y));
    }
    return received;
}

ReceivedTensor remove_pilots(const std::vector<ComplexMatrix>& received, const PilotMatrix& pilots,
                             const SystemDims& dims, double snr_db, std::uint64_t seed) {
    ReceivedTensor out;
    out.dims = dims;
    out.snr_db = snr_db;
    out.seed = seed;
    out.slices.reserve(received.size());
    const ComplexMatrix xh = pilots.x.adjoint();  // T x M
    for (const auto& y : received) {
        if (y.cols() != xh.rows())
            throw DimensionError("remove_pilots: Y_p columns and pilot slots disagree on T");
        out.slices.push_back(y * xh);
    }
    return out;
}

namespace {

void require_rectangular(const ReceivedTensor& z) {
    for (const auto& slice : z.slices)
        if (slice.rows() != z.users() || slice.cols() != z.antennas())
            throw DimensionError("received tensor slices must share one K x M shape");
}

}  // namespace

ComplexMatrix stack_mode1(const ReceivedTensor& z) {
    require_rectangular(z);
    const auto p = z.phases();
    const auto k = z.users();
    const auto m = z.antennas();
    ComplexMatrix out(static_cast<Eigen::Index>(p) * m, k);
    // row (m-1)*P + p holds slice p's m-th column transposed
    for (int ip = 0; ip < p; ++ip)
        for (int im = 0; im < m; ++im)
            out.row(static_cast<Eigen::Index>(im) * p + ip) = z.slices[ip].col(im).transpose();
    return out;
}

ComplexMatrix stack_mode2(const ReceivedTensor& z) {
    require_rectangular(z);
    const auto p = z.phases();
    const auto k = z.users();
    const auto m = z.antennas();
    ComplexMatrix out(static_cast<Eigen::Index>(k) * p, m);
    // row (p-1)*K + k holds slice p's k-th row
    for (int ip = 0; ip < p; ++ip)
        out.middleRows(static_cast<Eigen::Index>(ip) * k, k) = z.slices[ip];
    return out;
}

}  // namespace riscp
