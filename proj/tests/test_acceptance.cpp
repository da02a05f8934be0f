// SPDX-License-Identifier: Apache-2.0
//
// Release acceptance suite.  Each test case checks one criterion at its
// stated tolerance and prints a single PASS/FAIL line, so a ctest log
// shows the whole gate at a glance.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "riscp/channel.hpp"
#include "riscp/estimator.hpp"
#include "riscp/metrics.hpp"
#include "riscp/sweep.hpp"

using namespace riscp;
using testutil::max_rel_err;
using testutil::random_complex;

namespace {

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void report(int id, const std::string& name, bool pass, double seconds) {
    std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                seconds);
    std::fflush(stdout);
}

const SweepRow& find_row(const SweepResult& result, double sweep_value, double snr_db,
                         const std::string& method) {
    for (const auto& row : result.rows)
        if (row.sweep_value == sweep_value && row.snr_db == snr_db && row.method == method)
            return row;
    throw std::runtime_error("row not found");
}

// Benchmark comparison sweep (desk-scale trial count), shared by
// criteria 3 and 6.
const SweepResult& benchmark_sweep() {
    static const SweepResult result = [] {
        SweepConfig cfg;
        cfg.dims = {32, 16, 16, 16, 32};
        cfg.snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
        cfg.trials = 200;
        cfg.base_seed = 2024;
        cfg.baselines = true;
        return run_sweep(cfg);
    }();
    return result;
}

}  // namespace

TEST_CASE("criterion 1: noiseless exact recovery") {
    const double t0 = now_s();
    const SystemDims dims{8, 8, 4, 4, 8};
    AlsConfig cfg;
    cfg.epsilon = 1e-14;  // run the fixed point down to numerical convergence
    cfg.max_iters = 200;

    bool pass = true;
    for (int seed = 1; seed <= 100; ++seed) {
        const ChannelPair truth = generate_channels(dims, seed);
        const PhaseMatrix phi = dft_phase(dims.p, dims.n);
        const PilotMatrix x = generate_pilots(dims.m, dims.t);
        const auto y = synthesize_received(truth, phi, x, NoiseSpec::noiseless(), 100000 + seed);
        const ReceivedTensor z = remove_pilots(y, x);

        const NmseRecord rec = aligned_nmse(truth, als_estimate(z, phi, cfg));
        pass = pass && rec.nmse_h1 <= 1e-8 && rec.nmse_h2 <= 1e-8;
        CHECK(rec.nmse_h1 <= 1e-8);
        CHECK(rec.nmse_h2 <= 1e-8);
    }
    const double elapsed = now_s() - t0;
    pass = pass && elapsed < 10.0;
    CHECK(elapsed < 10.0);
    report(1, "noiseless exact recovery, 100 seeds", pass, elapsed);
}

TEST_CASE("criterion 2: unfolding oracle equivalence") {
    const double t0 = now_s();
    std::mt19937_64 gen(271828);
    bool pass = true;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto n = 1 + static_cast<Eigen::Index>(gen() % 4);
        const auto m = 1 + static_cast<Eigen::Index>(gen() % 4);
        const auto k = 1 + static_cast<Eigen::Index>(gen() % 4);
        const auto p = 1 + static_cast<Eigen::Index>(gen() % 4);
        const ComplexMatrix h1 = random_complex(n, m, gen);
        const ComplexMatrix h2 = random_complex(k, n, gen);
        const ComplexMatrix phi = random_complex(p, n, gen);

        const double e1 = max_rel_err(unfold_mode1(h1, h2, phi), testutil::oracle_mode1(h1, h2, phi));
        const double e2 = max_rel_err(unfold_mode2(h1, h2, phi), testutil::oracle_mode2(h1, h2, phi));
        const double e3 = max_rel_err(unfold_mode3(h1, h2, phi), testutil::oracle_mode3(h1, h2, phi));
        pass = pass && e1 < 1e-12 && e2 < 1e-12 && e3 < 1e-12;
        CHECK(e1 < 1e-12);
        CHECK(e2 < 1e-12);
        CHECK(e3 < 1e-12);
    }
    report(2, "1000 random unfoldings match the scalar oracle", pass, now_s() - t0);
}

TEST_CASE("criterion 3: benchmark gap reproduction") {
    const double t0 = now_s();
    const SweepResult& result = benchmark_sweep();

    double gap_h1 = 0.0, gap_h2 = 0.0;
    for (double snr : result.config.snr_grid_db) {
        gap_h1 += find_row(result, snr, snr, "als").nmse_h1_db -
                  find_row(result, snr, snr, "genie_h1").nmse_h1_db;
        gap_h2 += find_row(result, snr, snr, "als").nmse_h2_db -
                  find_row(result, snr, snr, "genie_h2").nmse_h2_db;
    }
    gap_h1 /= static_cast<double>(result.config.snr_grid_db.size());
    gap_h2 /= static_cast<double>(result.config.snr_grid_db.size());

    const double elapsed = now_s() - t0;
    const bool pass =
        gap_h1 >= 2.5 && gap_h1 <= 5.5 && gap_h2 >= 1.0 && gap_h2 <= 4.0 && elapsed < 300.0;
    CHECK(gap_h1 >= 2.5);
    CHECK(gap_h1 <= 5.5);
    CHECK(gap_h2 >= 1.0);
    CHECK(gap_h2 <= 4.0);
    CHECK(elapsed < 300.0);
    std::printf("    H1 gap %.2f dB (want 4 +- 1.5), H2 gap %.2f dB (want 2.5 +- 1.5)\n", gap_h1,
                gap_h2);
    report(3, "ALS-vs-genie gaps on the benchmark configuration", pass, elapsed);
}

TEST_CASE("criterion 4: NMSE grows with the surface size N") {
    const double t0 = now_s();
    SweepConfig cfg;
    cfg.dims = {64, 64, 64, 16, 64};
    cfg.snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
    cfg.sweep_variable = SweepVariable::n;
    cfg.sweep_values = {16, 32, 64};
    cfg.trials = 100;
    cfg.base_seed = 31;
    cfg.baselines = false;
    const SweepResult result = run_sweep(cfg);

    bool pass = true;
    for (double snr : cfg.snr_grid_db) {
        for (std::size_t i = 1; i < cfg.sweep_values.size(); ++i) {
            const auto& lo = find_row(result, cfg.sweep_values[i - 1], snr, "als");
            const auto& hi = find_row(result, cfg.sweep_values[i], snr, "als");
            pass = pass && hi.nmse_h1 >= lo.nmse_h1 && hi.nmse_h2 >= lo.nmse_h2;
            CHECK(hi.nmse_h1 >= lo.nmse_h1);
            CHECK(hi.nmse_h2 >= lo.nmse_h2);
        }
    }
    report(4, "NMSE non-decreasing in N at every SNR", pass, now_s() - t0);
}

TEST_CASE("criterion 5: more training phases P improve NMSE with diminishing returns") {
    const double t0 = now_s();
    SweepConfig cfg;
    cfg.dims = {64, 64, 64, 16, 64};
    cfg.snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
    cfg.sweep_variable = SweepVariable::p;
    cfg.sweep_values = {16, 24, 32, 40};
    cfg.trials = 100;
    cfg.base_seed = 41;
    cfg.baselines = false;
    const SweepResult result = run_sweep(cfg);

    bool pass = true;
    for (double snr : cfg.snr_grid_db) {
        for (std::size_t i = 1; i < cfg.sweep_values.size(); ++i) {
            const auto& lo = find_row(result, cfg.sweep_values[i - 1], snr, "als");
            const auto& hi = find_row(result, cfg.sweep_values[i], snr, "als");
            pass = pass && hi.nmse_h1 <= lo.nmse_h1 && hi.nmse_h2 <= lo.nmse_h2;
            CHECK(hi.nmse_h1 <= lo.nmse_h1);
            CHECK(hi.nmse_h2 <= lo.nmse_h2);
        }
    }

    // diminishing returns at 20 dB: the 16->24 step buys more than 32->40
    for (const char* channel : {"h1", "h2"}) {
        const bool is_h1 = std::string(channel) == "h1";
        const auto db_at = [&](int p) {
            const auto& row = find_row(result, p, 20.0, "als");
            return is_h1 ? row.nmse_h1_db : row.nmse_h2_db;
        };
        const double first_step = db_at(16) - db_at(24);
        const double last_step = db_at(32) - db_at(40);
        pass = pass && last_step < first_step;
        CHECK(last_step < first_step);
    }
    report(5, "NMSE non-increasing in P with diminishing returns", pass, now_s() - t0);
}

TEST_CASE("criterion 6: genie baselines fall 10 dB per 10 dB of SNR") {
    const double t0 = now_s();
    const SweepResult& result = benchmark_sweep();

    const double slope_h1 = (find_row(result, 30, 30, "genie_h1").nmse_h1_db -
                             find_row(result, 10, 10, "genie_h1").nmse_h1_db) /
                            2.0;
    const double slope_h2 = (find_row(result, 30, 30, "genie_h2").nmse_h2_db -
                             find_row(result, 10, 10, "genie_h2").nmse_h2_db) /
                            2.0;
    const bool pass = std::abs(slope_h1 + 10.0) <= 1.0 && std::abs(slope_h2 + 10.0) <= 1.0;
    CHECK(std::abs(slope_h1 + 10.0) <= 1.0);
    CHECK(std::abs(slope_h2 + 10.0) <= 1.0);
    std::printf("    genie slopes per 10 dB: H1 %.2f dB, H2 %.2f dB\n", slope_h1, slope_h2);
    report(6, "genie NMSE slope is -10 +- 1 dB per decade over 10-30 dB", pass, now_s() - t0);
}

TEST_CASE("criterion 7: scaling-ambiguity invariance") {
    const double t0 = now_s();
    std::mt19937_64 gen(161803);
    std::uniform_real_distribution<double> mag(0.25, 4.0);
    std::uniform_real_distribution<double> arg(0.0, 6.28);

    bool pass = true;
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(gen() % 3);
        const int m = n + static_cast<int>(gen() % 3);
        const int k = n + static_cast<int>(gen() % 3);
        const int p = 1 + static_cast<int>(gen() % n);
        const ChannelPair truth{random_complex(n, m, gen), random_complex(k, n, gen)};
        const PhaseMatrix phi = dft_phase(p, n);

        Eigen::VectorXcd lambda(n);
        for (int i = 0; i < n; ++i) lambda(i) = std::polar(mag(gen), arg(gen));
        const ChannelPair scaled{lambda.asDiagonal().inverse() * truth.h1,
                                 truth.h2 * lambda.asDiagonal()};

        const NmseRecord rec = aligned_nmse(truth, scaled);
        pass = pass && rec.nmse_h1 <= 1e-20 && rec.nmse_h2 <= 1e-20;
        CHECK(rec.nmse_h1 <= 1e-20);
        CHECK(rec.nmse_h2 <= 1e-20);

        for (int ip = 0; ip < p; ++ip) {
            const ComplexMatrix want = truth.h2 * phi.phi.row(ip).asDiagonal() * truth.h1;
            const ComplexMatrix got = scaled.h2 * phi.phi.row(ip).asDiagonal() * scaled.h1;
            const double err = max_rel_err(got, want);
            pass = pass && err < 1e-12;
            CHECK(err < 1e-12);
        }
    }
    report(7, "1000 diagonal rescalings are metric- and tensor-invariant", pass, now_s() - t0);
}

TEST_CASE("criterion 8: byte-identical CSV under a fixed config and seed") {
    const double t0 = now_s();
    SweepConfig cfg;
    cfg.dims = {8, 8, 4, 4, 8};
    cfg.snr_grid_db = {0.0, 10.0, 20.0};
    cfg.trials = 5;
    cfg.base_seed = 99;
    cfg.baselines = true;

    std::ostringstream first, second;
    write_csv(run_sweep(cfg), first);
    write_csv(run_sweep(cfg), second);
    const bool pass = first.str() == second.str() && !first.str().empty();
    CHECK(first.str() == second.str());
    report(8, "determinism of sweep CSV output", pass, now_s() - t0);
}
