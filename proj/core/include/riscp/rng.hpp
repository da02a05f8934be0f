// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace riscp {

/// Stream tags keep the channel and noise draws of one trial independent
/// of each other regardless of how many values either stream consumes.
enum class Stream : std::uint64_t {
    channels = 0x1,
    noise = 0x2,
};

namespace detail {

// SplitMix64 finalizer (Steele, Lea & Flood).  Full-period bijection on
// 64-bit words; used purely as a mixing function here.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Derives a 64-bit seed from a base seed and up to three coordinates
/// (sweep point, trial, stream).  Folding each coordinate through a
/// fresh SplitMix64 round makes the derived streams independent: adding
/// sweep points or trials never perturbs the seed of an existing one.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = detail::splitmix64(base);
    s = detail::splitmix64(s ^ a);
    s = detail::splitmix64(s ^ b);
    s = detail::splitmix64(s ^ c);
    return s;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, Stream tag) {
    return derive_seed(base, a, b, static_cast<std::uint64_t>(tag));
}

/// Deterministic complex-Gaussian source.  Box-Muller on top of
/// mt19937_64 with an explicit bits-to-double conversion, so one entry
/// always consumes exactly two generator words and the stream layout is
/// identical on every standard library.
class ComplexGaussian {
  public:
    explicit ComplexGaussian(std::uint64_t seed) : gen_(seed) {}

    /// One CN(0, variance) sample.
    std::complex<double> operator()(double variance = 1.0) {
        // u1 in (0,1], u2 in [0,1)
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
        const double r = std::sqrt(-variance * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    /// Dense rows x cols matrix of i.i.d. CN(0, variance) entries,
    /// filled in column-major order.
    Eigen::MatrixXcd matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0) {
        Eigen::MatrixXcd out(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = (*this)(variance);
        return out;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace riscp
