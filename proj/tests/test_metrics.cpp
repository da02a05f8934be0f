// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "riscp/channel.hpp"
#include "riscp/errors.hpp"
#include "riscp/metrics.hpp"

using namespace riscp;
using testutil::max_rel_err;
using testutil::random_complex;

namespace {

Eigen::VectorXcd random_diagonal(int n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> mag(0.25, 4.0);
    std::uniform_real_distribution<double> arg(0.0, 6.28);
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; ++i) d(i) = std::polar(mag(gen), arg(gen));
    return d;
}

ChannelPair rescaled(const ChannelPair& pair, const Eigen::VectorXcd& lambda) {
    return {lambda.asDiagonal().inverse() * pair.h1, pair.h2 * lambda.asDiagonal()};
}

}  // namespace

TEST_CASE("normalize_first_column is the identity on an already-canonical pair") {
    std::mt19937_64 gen(1);
    ChannelPair pair{random_complex(3, 4, gen), random_complex(5, 3, gen)};
    pair.h1.col(0).setOnes();
    const ChannelPair out = normalize_first_column(pair);
    CHECK(out.h1 == pair.h1);
    CHECK(out.h2 == pair.h2);
}

TEST_CASE("normalization cancels the diagonal scaling ambiguity") {
    std::mt19937_64 gen(2);
    const ChannelPair pair{random_complex(3, 4, gen), random_complex(5, 3, gen)};
    const ChannelPair other = rescaled(pair, random_diagonal(3, gen));

    const ChannelPair canon_a = normalize_first_column(pair);
    const ChannelPair canon_b = normalize_first_column(other);
    CHECK(max_rel_err(canon_b.h1, canon_a.h1) < 1e-12);
    CHECK(max_rel_err(canon_b.h2, canon_a.h2) < 1e-12);
}

TEST_CASE("normalization preserves the reconstructed tensor") {
    std::mt19937_64 gen(3);
    const ChannelPair pair{random_complex(3, 4, gen), random_complex(5, 3, gen)};
    const ComplexMatrix phi = random_complex(2, 3, gen);
    const ChannelPair canon = normalize_first_column(pair);
    for (int p = 0; p < 2; ++p) {
        const ComplexMatrix before = pair.h2 * phi.row(p).asDiagonal() * pair.h1;
        const ComplexMatrix after = canon.h2 * phi.row(p).asDiagonal() * canon.h1;
        CHECK(max_rel_err(after, before) < 1e-12);
    }
}

TEST_CASE("normalization rejects a zero pivot") {
    std::mt19937_64 gen(4);
    ChannelPair pair{random_complex(3, 4, gen), random_complex(5, 3, gen)};
    pair.h1(1, 0) = 0.0;
    CHECK_THROWS_AS(normalize_first_column(pair), DegenerateScalingError);
}

TEST_CASE("nmse analytic values") {
    std::mt19937_64 gen(5);
    const ComplexMatrix h = random_complex(4, 3, gen);
    CHECK(nmse(h, h) == 0.0);
    CHECK(nmse(h, ComplexMatrix::Zero(4, 3)) == 1.0);
    CHECK(std::abs(nmse(h, 2.0 * h) - 1.0) < 1e-14);
    CHECK_THROWS_AS(nmse(h, ComplexMatrix::Zero(3, 3)), DimensionError);
    CHECK_THROWS_AS(nmse(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)),
                    DegenerateInputError);
}

TEST_CASE("aligned_nmse of the truth against itself is zero") {
    std::mt19937_64 gen(6);
    const ChannelPair truth{random_complex(3, 5, gen), random_complex(4, 3, gen)};
    const NmseRecord rec = aligned_nmse(truth, truth);
    CHECK(rec.nmse_h1 == 0.0);
    CHECK(rec.nmse_h2 == 0.0);
}

TEST_CASE("aligned_nmse is invariant to diagonal rescaling") {
    std::mt19937_64 gen(7);
    for (int rep = 0; rep < 50; ++rep) {
        const ChannelPair truth{random_complex(3, 5, gen), random_complex(4, 3, gen)};
        const NmseRecord rec = aligned_nmse(truth, rescaled(truth, random_diagonal(3, gen)));
        CHECK(rec.nmse_h1 <= 1e-20);
        CHECK(rec.nmse_h2 <= 1e-20);
    }
}

TEST_CASE("aligned_nmse localizes a perturbation applied to H1 only") {
    std::mt19937_64 gen(8);
    const ChannelPair truth{random_complex(3, 5, gen), random_complex(4, 3, gen)};
    ChannelPair est = truth;
    // perturb only columns 2.. of H1 so the normalization pivots stay put
    const ComplexMatrix delta = 1e-4 * random_complex(3, 4, gen);
    est.h1.rightCols(4) += delta;

    const NmseRecord rec = aligned_nmse(truth, est);
    // the canonical form divides row n by H1(n,0), an oracle we can apply to delta directly
    ComplexMatrix scaled_delta = delta;
    ComplexMatrix scaled_h1 = truth.h1;
    for (int n = 0; n < 3; ++n) {
        scaled_delta.row(n) /= truth.h1(n, 0);
        scaled_h1.row(n) /= truth.h1(n, 0);
    }
    const double expected = scaled_delta.squaredNorm() / scaled_h1.squaredNorm();
    CHECK(std::abs(rec.nmse_h1 - expected) < 1e-12 * expected + 1e-18);
    CHECK(rec.nmse_h2 == 0.0);
}

TEST_CASE("dB fields are consistent with the linear fields") {
    std::mt19937_64 gen(9);
    const ChannelPair truth{random_complex(3, 5, gen), random_complex(4, 3, gen)};
    ChannelPair est = truth;
    est.h1 += 0.01 * random_complex(3, 5, gen);
    est.h2 += 0.01 * random_complex(4, 3, gen);
    const NmseRecord rec = aligned_nmse(truth, est);
    CHECK(rec.nmse_h1_db == 10.0 * std::log10(rec.nmse_h1));
    CHECK(rec.nmse_h2_db == 10.0 * std::log10(rec.nmse_h2));
}
