// SPDX-License-Identifier: Apache-2.0
#include "riscp/sweep.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "riscp/errors.hpp"
#include "riscp/rng.hpp"

namespace riscp {

namespace {

using json = nlohmann::json;

// Shortest round-trip decimal representation; keeps CSV output exact
// and byte-stable.
std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse number '" + s + "'");
    }
}

struct SweepPoint {
    double sweep_value;
    double snr_db;
    SystemDims dims;
};

std::vector<SweepPoint> build_points(const SweepConfig& cfg) {
    std::vector<SweepPoint> points;
    if (cfg.snr_grid_db.empty()) throw FeasibilityError("run_sweep: empty SNR grid");
    switch (cfg.sweep_variable) {
        case SweepVariable::snr:
            for (double snr : cfg.snr_grid_db) points.push_back({snr, snr, cfg.dims});
            break;
        case SweepVariable::n:
            if (cfg.sweep_values.empty()) throw FeasibilityError("run_sweep: no N values to sweep");
            for (int v : cfg.sweep_values)
                for (double snr : cfg.snr_grid_db) {
                    SystemDims d = cfg.dims;
                    d.n = v;
                    points.push_back({static_cast<double>(v), snr, d});
                }
            break;
        case SweepVariable::p:
            if (cfg.sweep_values.empty()) throw FeasibilityError("run_sweep: no P values to sweep");
            for (int v : cfg.sweep_values)
                for (double snr : cfg.snr_grid_db) {
                    SystemDims d = cfg.dims;
                    d.p = v;
                    points.push_back({static_cast<double>(v), snr, d});
                }
            break;
    }
    return points;
}

void preflight(const SweepConfig& cfg, const std::vector<SweepPoint>& points) {
    if (cfg.trials < 1) throw FeasibilityError("run_sweep: trials must be at least 1");
    cfg.als.validate();
    std::string problems;
    for (const auto& pt : points) {
        std::string local;
        try {
            pt.dims.validate();
            const auto report = check_feasibility(pt.dims);
            if (!report.feasible) local = report.message();
        } catch (const FeasibilityError& e) {
            local = e.what();
        }
        if (!local.empty())
            problems += "\n  " + to_string(cfg.sweep_variable) + "=" + fmt(pt.sweep_value) +
                        " snr=" + fmt(pt.snr_db) + ": " + local;
    }
    if (!problems.empty()) throw FeasibilityError("run_sweep pre-flight failed:" + problems);
}

struct Accumulator {
    double sum_h1 = 0.0, sum_h2 = 0.0;
    long iters = 0;
    int max_iters = 0;
    int converged = 0;
    int used = 0;
    int discarded = 0;
    double seconds = 0.0;

    void add(const MethodStats& s) {
        seconds += s.seconds;
        if (s.discarded) {
            ++discarded;
            return;
        }
        sum_h1 += s.nmse_h1;
        sum_h2 += s.nmse_h2;
        iters += s.iterations;
        max_iters = std::max(max_iters, s.iterations);
        converged += s.converged ? 1 : 0;
        ++used;
    }
};

SweepRow make_row(const SweepConfig& cfg, const SweepPoint& pt, const std::string& method,
                  const Accumulator& acc) {
    SweepRow row;
    row.sweep_var = to_string(cfg.sweep_variable);
    row.sweep_value = pt.sweep_value;
    row.snr_db = pt.snr_db;
    row.method = method;
    if (acc.used > 0) {
        row.nmse_h1 = acc.sum_h1 / acc.used;
        row.nmse_h2 = acc.sum_h2 / acc.used;
        row.nmse_h1_db = to_db(row.nmse_h1);
        row.nmse_h2_db = to_db(row.nmse_h2);
        row.mean_iters = static_cast<double>(acc.iters) / acc.used;
        row.converged_frac = static_cast<double>(acc.converged) / acc.used;
    }
    row.trials = cfg.trials;
    row.discarded = acc.discarded;
    row.max_iters = acc.max_iters;
    row.wall_time_s = acc.seconds;
    return row;
}

json row_to_json(const SweepRow& r) {
    return json{{"sweep_var", r.sweep_var},
                {"sweep_value", r.sweep_value},
                {"snr_db", r.snr_db},
                {"method", r.method},
                {"nmse_h1", r.nmse_h1},
                {"nmse_h1_db", r.nmse_h1_db},
                {"nmse_h2", r.nmse_h2},
                {"nmse_h2_db", r.nmse_h2_db},
                {"trials", r.trials},
                {"discarded", r.discarded},
                {"mean_iters", r.mean_iters},
                {"converged_frac", r.converged_frac},
                {"max_iters", r.max_iters},
                {"wall_time_s", r.wall_time_s}};
}

}  // namespace

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::snr: return "snr";
        case SweepVariable::n: return "n";
        case SweepVariable::p: return "p";
    }
    return "?";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

SweepVariable sweep_variable_from_string(const std::string& s) {
    if (s == "snr") return SweepVariable::snr;
    if (s == "n") return SweepVariable::n;
    if (s == "p") return SweepVariable::p;
    throw std::invalid_argument("unknown sweep variable '" + s + "'");
}

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + s + "'");
}

std::vector<double> parse_real_grid(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw std::invalid_argument("range must be start:step:stop, got '" + text + "'");
        const double start = parse_double(parts[0]);
        const double step = parse_double(parts[1]);
        const double stop = parse_double(parts[2]);
        if (step == 0.0) throw std::invalid_argument("range step must be nonzero");
        std::vector<double> out;
        const double slack = 1e-9 * std::max(1.0, std::abs(step));
        if (step > 0)
            for (double v = start; v <= stop + slack; v += step) out.push_back(v);
        else
            for (double v = start; v >= stop - slack; v += step) out.push_back(v);
        if (out.empty()) throw std::invalid_argument("empty range '" + text + "'");
        return out;
    }
    std::vector<double> out;
    for (const auto& tok : split(text, ',')) out.push_back(parse_double(tok));
    if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_real_grid(text)) {
        const int i = static_cast<int>(std::llround(v));
        if (static_cast<double>(i) != v)
            throw std::invalid_argument("expected integer values in '" + text + "'");
        out.push_back(i);
    }
    return out;
}

SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig cfg;
    if (j.contains("dims")) {
        const auto& d = j.at("dims");
        cfg.dims.m = d.value("m", cfg.dims.m);
        cfg.dims.k = d.value("k", cfg.dims.k);
        cfg.dims.n = d.value("n", cfg.dims.n);
        cfg.dims.p = d.value("p", cfg.dims.p);
        cfg.dims.t = d.value("t", cfg.dims.t);
    }
    if (j.contains("snr_grid_db")) {
        const auto& g = j.at("snr_grid_db");
        if (g.is_string())
            cfg.snr_grid_db = parse_real_grid(g.get<std::string>());
        else
            cfg.snr_grid_db = g.get<std::vector<double>>();
    }
    if (j.contains("sweep_variable"))
        cfg.sweep_variable = sweep_variable_from_string(j.at("sweep_variable").get<std::string>());
    if (j.contains("sweep_values")) {
        const auto& v = j.at("sweep_values");
        if (v.is_string())
            cfg.sweep_values = parse_int_list(v.get<std::string>());
        else
            cfg.sweep_values = v.get<std::vector<int>>();
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.base_seed = j.value("base_seed", cfg.base_seed);
    if (j.contains("als")) {
        const auto& a = j.at("als");
        cfg.als.epsilon = a.value("epsilon", cfg.als.epsilon);
        cfg.als.max_iters = a.value("max_iters", cfg.als.max_iters);
        cfg.als.pinv_tol = a.value("pinv_tol", cfg.als.pinv_tol);
    }
    cfg.baselines = j.value("baselines", cfg.baselines);
    cfg.output_path = j.value("output_path", cfg.output_path);
    if (j.contains("format"))
        cfg.format = output_format_from_string(j.at("format").get<std::string>());
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
}

json sweep_config_to_json(const SweepConfig& cfg) {
    return json{{"dims",
                 {{"m", cfg.dims.m},
                  {"k", cfg.dims.k},
                  {"n", cfg.dims.n},
                  {"p", cfg.dims.p},
                  {"t", cfg.dims.t}}},
                {"snr_grid_db", cfg.snr_grid_db},
                {"sweep_variable", to_string(cfg.sweep_variable)},
                {"sweep_values", cfg.sweep_values},
                {"trials", cfg.trials},
                {"base_seed", cfg.base_seed},
                {"als",
                 {{"epsilon", cfg.als.epsilon},
                  {"max_iters", cfg.als.max_iters},
                  {"pinv_tol", cfg.als.pinv_tol}}},
                {"baselines", cfg.baselines},
                {"output_path", cfg.output_path},
                {"format", to_string(cfg.format)},
                {"threads", cfg.threads}};
}

TrialSeeds trial_seeds(std::uint64_t base_seed, std::size_t point_index, std::size_t trial_index) {
    return {derive_seed(base_seed, point_index, trial_index, Stream::channels),
            derive_seed(base_seed, point_index, trial_index, Stream::noise)};
}

TrialRecord run_trial(const SystemDims& dims, double snr_db, const TrialSeeds& seeds,
                      const AlsConfig& als_cfg, bool with_baselines) {
    dims.validate();
    const auto report = check_feasibility(dims);
    if (!report.feasible) throw FeasibilityError("run_trial: " + report.message());

    const ChannelPair truth = generate_channels(dims, seeds.channel);
    const PhaseMatrix phase = dft_phase(dims.p, dims.n);
    const PilotMatrix pilots = generate_pilots(dims.m, dims.t);
    const NoiseSpec noise =
        std::isinf(snr_db) ? NoiseSpec::noiseless() : NoiseSpec::from_snr_db(snr_db);
    const auto received = synthesize_received(truth, phase, pilots, noise, seeds.noise);
    const ReceivedTensor z = remove_pilots(received, pilots, dims, snr_db, seeds.noise);

    TrialRecord rec;
    rec.seeds = seeds;

    {
        const double t0 = now_seconds();
        try {
            const EstimationResult est = als_estimate(z, phase, als_cfg);
            const NmseRecord nm = aligned_nmse(truth, est);
            rec.als.nmse_h1 = nm.nmse_h1;
            rec.als.nmse_h2 = nm.nmse_h2;
            rec.als.iterations = est.iterations;
            rec.als.converged = est.converged;
        } catch (const IllPosedUpdateError&) {
            rec.als.discarded = true;
        } catch (const DegenerateInputError&) {
            rec.als.discarded = true;
        } catch (const DegenerateScalingError&) {
            rec.als.discarded = true;
        }
        rec.als.seconds = now_seconds() - t0;
    }

    if (with_baselines) {
        {
            const double t0 = now_seconds();
            try {
                const ComplexMatrix h1_hat = genie_ls_h1(z, truth.h2, phase, als_cfg.pinv_tol);
                rec.genie_h1.nmse_h1 = nmse(truth.h1, h1_hat);
                rec.genie_h1.iterations = 1;
                rec.genie_h1.converged = true;
            } catch (const IllPosedUpdateError&) {
                rec.genie_h1.discarded = true;
            }
            rec.genie_h1.seconds = now_seconds() - t0;
        }
        {
            const double t0 = now_seconds();
            try {
                const ComplexMatrix h2_hat = genie_ls_h2(z, truth.h1, phase, als_cfg.pinv_tol);
                rec.genie_h2.nmse_h2 = nmse(truth.h2, h2_hat);
                rec.genie_h2.iterations = 1;
                rec.genie_h2.converged = true;
            } catch (const IllPosedUpdateError&) {
                rec.genie_h2.discarded = true;
            }
            rec.genie_h2.seconds = now_seconds() - t0;
        }
    }
    return rec;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    const auto points = build_points(cfg);
    preflight(cfg, points);

    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t total = points.size() * trials;
    std::vector<TrialRecord> records(total);

    std::size_t workers = cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = std::max<std::size_t>(1, std::min(workers, total));

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= total) break;
            try {
                const std::size_t pt = i / trials;
                const std::size_t tr = i % trials;
                records[i] = run_trial(points[pt].dims, points[pt].snr_db,
                                       trial_seeds(cfg.base_seed, pt, tr), cfg.als, cfg.baselines);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                break;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Deterministic reduction in (point, trial) index order.
    SweepResult result;
    result.config = cfg;
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
        Accumulator als, genie_h1, genie_h2;
        for (std::size_t tr = 0; tr < trials; ++tr) {
            const TrialRecord& rec = records[pt * trials + tr];
            als.add(rec.als);
            if (cfg.baselines) {
                genie_h1.add(rec.genie_h1);
                genie_h2.add(rec.genie_h2);
            }
        }
        result.rows.push_back(make_row(cfg, points[pt], "als", als));
        if (cfg.baselines) {
            result.rows.push_back(make_row(cfg, points[pt], "genie_h1", genie_h1));
            result.rows.push_back(make_row(cfg, points[pt], "genie_h2", genie_h2));
        }
    }
    return result;
}

void write_csv(const SweepResult& result, std::ostream& os) {
    os << "sweep_var,sweep_value,snr_db,method,nmse_h1,nmse_h1_db,nmse_h2,nmse_h2_db,"
          "trials,discarded,mean_iters,converged_frac\n";
    for (const auto& r : result.rows) {
        os << r.sweep_var << ',' << fmt(r.sweep_value) << ',' << fmt(r.snr_db) << ',' << r.method
           << ',' << fmt(r.nmse_h1) << ',' << fmt(r.nmse_h1_db) << ',' << fmt(r.nmse_h2) << ','
           << fmt(r.nmse_h2_db) << ',' << r.trials << ',' << r.discarded << ','
           << fmt(r.mean_iters) << ',' << fmt(r.converged_frac) << '\n';
    }
}

void write_json(const SweepResult& result, std::ostream& os) {
    json j;
    j["config"] = sweep_config_to_json(result.config);
    j["rows"] = json::array();
    for (const auto& r : result.rows) j["rows"].push_back(row_to_json(r));
    os << j.dump(2) << '\n';
}

void emit_results(const SweepResult& result, const std::string& path, OutputFormat format) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_results: cannot open '" + path + "' for writing");
    if (format == OutputFormat::csv)
        write_csv(result, os);
    else
        write_json(result, os);
    os.flush();
    if (!os.good()) throw std::runtime_error("emit_results: write to '" + path + "' failed");
}

}  // namespace riscp
