// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "riscp/estimator.hpp"
#include "riscp/metrics.hpp"

namespace riscp {

enum class SweepVariable { snr, n, p };
enum class OutputFormat { csv, json };

std::string to_string(SweepVariable v);
std::string to_string(OutputFormat f);
SweepVariable sweep_variable_from_string(const std::string& s);
OutputFormat output_format_from_string(const std::string& s);

/// "0:5:30" (start:step:stop, inclusive) or a comma-separated list.
std::vector<double> parse_real_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Full description of one Monte Carlo experiment.
struct SweepConfig {
    SystemDims dims;
    std::vector<double> snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
    SweepVariable sweep_variable = SweepVariable::snr;
    std::vector<int> sweep_values;  ///< swept N or P values; unused for the SNR sweep
    int trials = 200;
    std::uint64_t base_seed = 1;
    AlsConfig als;
    bool baselines = true;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    int threads = 0;  ///< trial workers; 0 = hardware concurrency
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json sweep_config_to_json(const SweepConfig& cfg);

/// Derived per-trial seeds; channel and noise draws come from separate
/// streams so either can be varied without touching the other.
struct TrialSeeds {
    std::uint64_t channel = 0;
    std::uint64_t noise = 0;
};

TrialSeeds trial_seeds(std::uint64_t base_seed, std::size_t point_index, std::size_t trial_index);

/// Outcome of one estimation method on one channel realization.
struct MethodStats {
    bool discarded = false;
    double nmse_h1 = std::numeric_limits<double>::quiet_NaN();
    double nmse_h2 = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    bool converged = false;
    double seconds = 0.0;
};

struct TrialRecord {
    TrialSeeds seeds;
    MethodStats als;
    MethodStats genie_h1;  ///< filled only when baselines were requested
    MethodStats genie_h2;
};

/// One full channel realization: synthesis, pilot removal, the ALS
/// estimator and (optionally) both genie baselines on the same data.
/// Estimator degeneracies are recorded as discarded markers, never
/// thrown.  Throws FeasibilityError when dims violate the
/// identifiability conditions.
TrialRecord run_trial(const SystemDims& dims, double snr_db, const TrialSeeds& seeds,
                      const AlsConfig& als_cfg, bool with_baselines);

/// One aggregated (sweep point, method) cell.  Linear NMSE fields are
/// means over the non-discarded trials; dB fields are 10 log10 of those
/// means.
struct SweepRow {
    std::string sweep_var;
    double sweep_value = 0.0;
    double snr_db = 0.0;
    std::string method;
    double nmse_h1 = std::numeric_limits<double>::quiet_NaN();
    double nmse_h1_db = std::numeric_limits<double>::quiet_NaN();
    double nmse_h2 = std::numeric_limits<double>::quiet_NaN();
    double nmse_h2_db = std::numeric_limits<double>::quiet_NaN();
    int trials = 0;
    int discarded = 0;
    double mean_iters = 0.0;
    double converged_frac = 0.0;
    int max_iters = 0;          ///< JSON only
    double wall_time_s = 0.0;   ///< JSON only
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows;
};

/// Runs trials x sweep-points independent trials with per-trial derived
/// seeds and aggregates them in fixed index order, so concurrent
/// execution is bit-identical to sequential.  All sweep points are
/// feasibility-checked before the first trial runs.
SweepResult run_sweep(const SweepConfig& cfg);

void write_csv(const SweepResult& result, std::ostream& os);
void write_json(const SweepResult& result, std::ostream& os);

/// Writes the result to `path` in the requested format.  I/O failures
/// raise std::runtime_error naming the path.
void emit_results(const SweepResult& result, const std::string& path, OutputFormat format);

}  // namespace riscp
