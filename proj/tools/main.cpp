// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo driver for PARAFAC-based cascaded channel estimation.
// Subcommands mirror the three experiment axes (SNR, surface size N,
// training phases P) plus a single-trial inspector.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "riscp/errors.hpp"
#include "riscp/sweep.hpp"

namespace {

struct CliFlags {
    std::string config_path;
    int m = 0, k = 0, t = 0;
    std::string n, p;  // scalar or list depending on the subcommand
    std::string snr;
    int trials = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    int max_iters = 0;
    bool baselines = false;
    bool no_baselines = false;
    std::string out;
    std::string format;
    int threads = -1;
};

void add_common_options(CLI::App* cmd, CliFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
    cmd->add_option("--m", f.m, "BS antennas M");
    cmd->add_option("--k", f.k, "users K");
    cmd->add_option("--n", f.n, "RIS elements N (list for sweep-n)");
    cmd->add_option("--p", f.p, "training phases P (list for sweep-p)");
    cmd->add_option("--t", f.t, "pilot slots T");
    cmd->add_option("--snr", f.snr, "SNR grid in dB: comma list or start:step:stop");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per sweep point");
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--epsilon", f.epsilon, "ALS stop threshold");
    cmd->add_option("--max-iters", f.max_iters, "ALS iteration cap");
    cmd->add_flag("--baselines", f.baselines, "run the genie-aided LS baselines");
    cmd->add_flag("--no-baselines", f.no_baselines, "skip the genie-aided LS baselines");
    cmd->add_option("--out", f.out, "output file path (stdout when omitted)");
    cmd->add_option("--format", f.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", f.threads, "trial worker threads (0 = all cores)");
}

riscp::SweepConfig assemble_config(const CLI::App* cmd, const CliFlags& f,
                                   riscp::SweepVariable variable) {
    riscp::SweepConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream is(f.config_path);
        if (!is) throw std::runtime_error("cannot open config file '" + f.config_path + "'");
        nlohmann::json j;
        is >> j;
        cfg = riscp::sweep_config_from_json(j);
    }
    cfg.sweep_variable = variable;

    const auto given = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (given("--m")) cfg.dims.m = f.m;
    if (given("--k")) cfg.dims.k = f.k;
    if (given("--t")) cfg.dims.t = f.t;
    if (given("--snr")) cfg.snr_grid_db = riscp::parse_real_grid(f.snr);

    if (variable == riscp::SweepVariable::n) {
        if (given("--n")) cfg.sweep_values = riscp::parse_int_list(f.n);
        if (given("--p")) cfg.dims.p = riscp::parse_int_list(f.p).at(0);
        if (!cfg.sweep_values.empty()) cfg.dims.n = cfg.sweep_values.front();
    } else if (variable == riscp::SweepVariable::p) {
        if (given("--p")) cfg.sweep_values = riscp::parse_int_list(f.p);
        if (given("--n")) cfg.dims.n = riscp::parse_int_list(f.n).at(0);
        if (!cfg.sweep_values.empty()) cfg.dims.p = cfg.sweep_values.front();
    } else {
        if (given("--n")) cfg.dims.n = riscp::parse_int_list(f.n).at(0);
        if (given("--p")) cfg.dims.p = riscp::parse_int_list(f.p).at(0);
    }

    if (given("--trials")) cfg.trials = f.trials;
    if (given("--seed")) cfg.base_seed = f.seed;
    if (given("--epsilon")) cfg.als.epsilon = f.epsilon;
    if (given("--max-iters")) cfg.als.max_iters = f.max_iters;
    if (f.baselines) cfg.baselines = true;
    if (f.no_baselines) cfg.baselines = false;
    if (given("--out")) cfg.output_path = f.out;
    if (given("--format")) cfg.format = riscp::output_format_from_string(f.format);
    if (given("--threads")) cfg.threads = f.threads;
    return cfg;
}

void deliver(const riscp::SweepResult& result) {
    if (result.config.output_path.empty()) {
        if (result.config.format == riscp::OutputFormat::csv)
            riscp::write_csv(result, std::cout);
        else
            riscp::write_json(result, std::cout);
    } else {
        riscp::emit_results(result, result.config.output_path, result.config.format);
        std::cerr << "wrote " << result.config.output_path << "\n";
    }
}

int run_sweep_command(const CLI::App* cmd, const CliFlags& flags, riscp::SweepVariable variable) {
    const riscp::SweepConfig cfg = assemble_config(cmd, flags, variable);
    const riscp::SweepResult result = riscp::run_sweep(cfg);
    deliver(result);
    return 0;
}

int run_single_trial(const CLI::App* cmd, const CliFlags& flags) {
    riscp::SweepConfig cfg = assemble_config(cmd, flags, riscp::SweepVariable::snr);
    cfg.trials = 1;
    if (cfg.snr_grid_db.size() > 1) cfg.snr_grid_db.resize(1);
    const riscp::SweepResult result = riscp::run_sweep(cfg);

    for (const auto& row : result.rows) {
        std::fprintf(stderr, "%-9s snr=%5.1f dB  nmse_h1=%10.4g (%7.2f dB)  nmse_h2=%10.4g (%7.2f dB)  iters=%g%s\n",
                     row.method.c_str(), row.snr_db, row.nmse_h1, row.nmse_h1_db, row.nmse_h2,
                     row.nmse_h2_db, row.mean_iters, row.discarded ? "  [discarded]" : "");
    }
    deliver(result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PARAFAC (alternating LS) channel estimation simulator for "
                 "RIS-assisted multi-user MISO downlinks"};
    app.require_subcommand(1);

    CliFlags flags;
    auto* snr_cmd = app.add_subcommand("sweep-snr", "NMSE versus SNR for fixed dims");
    auto* n_cmd = app.add_subcommand("sweep-n", "NMSE versus SNR for a list of N values");
    auto* p_cmd = app.add_subcommand("sweep-p", "NMSE versus SNR for a list of P values");
    auto* trial_cmd = app.add_subcommand("single-trial", "one seeded realization, verbose");
    for (auto* cmd : {snr_cmd, n_cmd, p_cmd, trial_cmd}) add_common_options(cmd, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (snr_cmd->parsed()) return run_sweep_command(snr_cmd, flags, riscp::SweepVariable::snr);
        if (n_cmd->parsed()) return run_sweep_command(n_cmd, flags, riscp::SweepVariable::n);
        if (p_cmd->parsed()) return run_sweep_command(p_cmd, flags, riscp::SweepVariable::p);
        if (trial_cmd->parsed()) return run_single_trial(trial_cmd, flags);
    } catch (const riscp::FeasibilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
