#include "core/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

namespace neurokey {

void ExperimentPlan::validate() const {
    TpmParams probe{k, n_values.empty() ? 1 : n_values.front(), l, m_values.empty() ? 1 : m_values.front()};
    probe.validate();
    if (n_values.empty() || m_values.empty()) {
        raise(ErrorCode::Validation, "experiment plan: empty grid");
    }
    for (int n : n_values) {
        TpmParams{k, n, l, 1}.validate();
    }
    for (int m : m_values) {
        TpmParams{k, 1, l, m}.validate();
    }
    if (runs_per_cell < 1) {
        raise(ErrorCode::Validation, "experiment plan: runs_per_cell must be >= 1");
    }
    if (max_iterations < 1) {
        raise(ErrorCode::Validation, "experiment plan: max_iterations must be >= 1");
    }
}

ExperimentPlan plan_from_json(const std::string& text, ExperimentPlan base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::Validation, std::string("plan JSON parse error: ") + e.what());
    }
    try {
        ExperimentPlan plan = base;
        if (j.contains("k")) plan.k = j["k"].get<int>();
        if (j.contains("l")) plan.l = j["l"].get<int>();
        if (j.contains("n_values")) plan.n_values = j["n_values"].get<std::vector<int>>();
        if (j.contains("m_values")) plan.m_values = j["m_values"].get<std::vector<int>>();
        if (j.contains("runs_per_cell")) plan.runs_per_cell = j["runs_per_cell"].get<int>();
        if (j.contains("rule")) plan.rule = rule_from_string(j["rule"].get<std::string>());
        if (j.contains("base_seed")) plan.base_seed = j["base_seed"].get<uint64_t>();
        if (j.contains("max_iterations")) plan.max_iterations = j["max_iterations"].get<int>();
        if (j.contains("attack_enabled")) plan.attack_enabled = j["attack_enabled"].get<bool>();
        return plan;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::Validation, std::string("plan JSON field error: ") + e.what());
    }
}

std::string plan_to_json(const ExperimentPlan& plan) {
    nlohmann::json j{
        {"k", plan.k},
        {"l", plan.l},
        {"n_values", plan.n_values},
        {"m_values", plan.m_values},
        {"runs_per_cell", plan.runs_per_cell},
        {"rule", to_string(plan.rule)},
        {"base_seed", plan.base_seed},
        {"max_iterations", plan.max_iterations},
        {"attack_enabled", plan.attack_enabled},
    };
    return j.dump(2);
}

RunStatistics summarize(const std::vector<double>& samples) {
    if (samples.empty()) {
        raise(ErrorCode::Validation, "summarize: empty sample set");
    }
    RunStatistics stats;
    stats.sample_count = static_cast<int64_t>(samples.size());
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    stats.minimum = sorted.front();
    stats.maximum = sorted.back();
    const size_t n = sorted.size();
    stats.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    stats.average = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
    if (n < 2) {
        stats.std_dev_undefined = true;
    } else {
        double ss = 0.0;
        for (double v : sorted) {
            const double d = v - stats.average;
            ss += d * d;
        }
        stats.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
        stats.ci95_half_width = 1.96 * stats.std_dev / std::sqrt(static_cast<double>(n));
    }
    return stats;
}

SessionSeeds derive_session_seeds(uint64_t base_seed, int m, int n, int run_index) {
    const uint64_t run_seed = derive_seed({base_seed, static_cast<uint64_t>(m), static_cast<uint64_t>(n),
                                           static_cast<uint64_t>(run_index)});
    SessionSeeds seeds;
    seeds.input_seed = derive_seed({run_seed, 1});
    seeds.weight_seed_a = derive_seed({run_seed, 2});
    seeds.weight_seed_b = derive_seed({run_seed, 3});
    return seeds;
}

uint64_t derive_attacker_seed(uint64_t base_seed, int m, int n, int run_index) {
    const uint64_t run_seed = derive_seed({base_seed, static_cast<uint64_t>(m), static_cast<uint64_t>(n),
                                           static_cast<uint64_t>(run_index)});
    return derive_seed({run_seed, 4});
}

namespace {

struct RunResult {
    int64_t sync_time = 0;
    bool converged = false;
    double score = 0.0;
    WeightMatrix final_weights_a;
};

GridCellReport aggregate_cell(int m, int n, int l, bool attack_enabled, std::vector<RunResult>& runs) {
    GridCellReport cell;
    cell.m = m;
    cell.n = n;
    cell.has_attack = attack_enabled;
    std::vector<double> sync_samples;
    std::vector<double> score_samples;
    int64_t timeouts = 0;
    for (RunResult& run : runs) {
        if (!run.converged) {
            ++timeouts;
            continue;
        }
        sync_samples.push_back(static_cast<double>(run.sync_time));
        if (attack_enabled) score_samples.push_back(run.score);
        cell.weight_ensemble.push_back(std::move(run.final_weights_a));
    }
    if (!sync_samples.empty()) {
        cell.sync_time = summarize(sync_samples);
        cell.histogram = weight_histogram(cell.weight_ensemble, l);
        cell.entropy = estimate_weight_entropy(cell.histogram);
    }
    cell.sync_time.timeout_count = timeouts;
    if (attack_enabled && !score_samples.empty()) {
        cell.attack_score = summarize(score_samples);
        cell.attack_score.timeout_count = timeouts;
    }
    return cell;
}

}  // namespace

std::vector<GridCellReport> run_batch(const ExperimentPlan& plan, int threads, const ProgressFn& progress) {
    plan.validate();
    unsigned worker_count = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    if (worker_count == 0) worker_count = 1;

    std::vector<GridCellReport> reports;
    const int total_cells = static_cast<int>(plan.n_values.size() * plan.m_values.size());
    int done = 0;
    for (int n : plan.n_values) {
        for (int m : plan.m_values) {
            std::vector<RunResult> runs(plan.runs_per_cell);
            std::atomic<int> next_run{0};
            auto worker = [&]() {
                for (;;) {
                    const int run_index = next_run.fetch_add(1);
                    if (run_index >= plan.runs_per_cell) break;
                    SessionConfig config;
                    config.params = TpmParams{plan.k, n, plan.l, m};
                    config.rule = plan.rule;
                    config.max_iterations = plan.max_iterations;
                    config.seeds = derive_session_seeds(plan.base_seed, m, n, run_index);
                    RunResult& out = runs[run_index];
                    if (plan.attack_enabled) {
                        AttackSession attack;
                        attack.config = config;
                        attack.attacker_weight_seed = derive_attacker_seed(plan.base_seed, m, n, run_index);
                        attack.attacker_rule = plan.rule;
                        AttackResult result = eavesdrop_session(attack);
                        out.sync_time = result.transcript.sync_time;
                        out.converged = result.transcript.converged;
                        out.score = result.score;
                        out.final_weights_a = std::move(result.transcript.final_weights_a);
                    } else {
                        SessionTranscript transcript = run_key_agreement(config);
                        out.sync_time = transcript.sync_time;
                        out.converged = transcript.converged;
                        out.final_weights_a = std::move(transcript.final_weights_a);
                    }
                }
            };
            std::vector<std::thread> pool;
            for (unsigned t = 1; t < worker_count; ++t) pool.emplace_back(worker);
            worker();
            for (std::thread& t : pool) t.join();
            reports.push_back(aggregate_cell(m, n, plan.l, plan.attack_enabled, runs));
            ++done;
            if (progress) progress(done, total_cells);
        }
    }
    return reports;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

std::vector<size_t> row_order(const std::vector<GridCellReport>& reports) {
    std::vector<size_t> order(reports.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (reports[a].n != reports[b].n) return reports[a].n < reports[b].n;
        return reports[a].m < reports[b].m;
    });
    return order;
}

}  // namespace

void write_report_csv(const std::vector<GridCellReport>& reports, std::ostream& out) {
    out << "m,n,sync_avg,sync_ci95,sync_min,sync_max,sync_median,entropy_avg,key_length_bits,"
           "attack_avg,attack_ci95,attack_min,attack_max,attack_median,timeouts\n";
    for (size_t idx : row_order(reports)) {
        const GridCellReport& cell = reports[idx];
        out << cell.m << ',' << cell.n << ',' << format_number(cell.sync_time.average) << ','
            << format_number(cell.sync_time.ci95_half_width) << ',' << format_number(cell.sync_time.minimum)
            << ',' << format_number(cell.sync_time.maximum) << ',' << format_number(cell.sync_time.median)
            << ',' << format_number(cell.entropy.average_entropy) << ',' << cell.entropy.effective_key_length
            << ',';
        if (cell.has_attack) {
            out << format_number(cell.attack_score.average) << ','
                << format_number(cell.attack_score.ci95_half_width) << ','
                << format_number(cell.attack_score.minimum) << ',' << format_number(cell.attack_score.maximum)
                << ',' << format_number(cell.attack_score.median);
        } else {
            out << ",,,,";
        }
        out << ',' << cell.sync_time.timeout_count << '\n';
    }
}

namespace {

double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

}  // namespace

void write_report_json(const std::vector<GridCellReport>& reports, std::ostream& out) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t idx : row_order(reports)) {
        const GridCellReport& cell = reports[idx];
        nlohmann::json row{
            {"m", cell.m},
            {"n", cell.n},
            {"sync_avg", rounded(cell.sync_time.average)},
            {"sync_ci95", rounded(cell.sync_time.ci95_half_width)},
            {"sync_std", rounded(cell.sync_time.std_dev)},
            {"sync_min", rounded(cell.sync_time.minimum)},
            {"sync_max", rounded(cell.sync_time.maximum)},
            {"sync_median", rounded(cell.sync_time.median)},
            {"sync_samples", cell.sync_time.sample_count},
            {"sync_std_undefined", cell.sync_time.std_dev_undefined},
            {"entropy_avg", rounded(cell.entropy.average_entropy)},
            {"key_length_bits", cell.entropy.effective_key_length},
            {"timeouts", cell.sync_time.timeout_count},
        };
        if (cell.has_attack) {
            row["attack_avg"] = rounded(cell.attack_score.average);
            row["attack_ci95"] = rounded(cell.attack_score.ci95_half_width);
            row["attack_std"] = rounded(cell.attack_score.std_dev);
            row["attack_min"] = rounded(cell.attack_score.minimum);
            row["attack_max"] = rounded(cell.attack_score.maximum);
            row["attack_median"] = rounded(cell.attack_score.median);
            row["attack_samples"] = cell.attack_score.sample_count;
        } else {
            row["attack_avg"] = nullptr;
            row["attack_ci95"] = nullptr;
            row["attack_std"] = nullptr;
            row["attack_min"] = nullptr;
            row["attack_max"] = nullptr;
            row["attack_median"] = nullptr;
            row["attack_samples"] = 0;
        }
        rows.push_back(std::move(row));
    }
    out << rows.dump(2) << '\n';
}

void export_report(const std::vector<GridCellReport>& reports, const std::string& format,
                   const std::string& destination) {
    if (reports.empty()) {
        raise(ErrorCode::Validation, "export_report: no reports");
    }
    std::ofstream out(destination, std::ios::trunc);
    if (!out) {
        raise(ErrorCode::Io, "cannot open for writing: " + destination);
    }
    if (format == "csv") {
        write_report_csv(reports, out);
    } else if (format == "json") {
        write_report_json(reports, out);
    } else {
        raise(ErrorCode::InvalidArgument, "export format must be csv or json");
    }
    if (!out) {
        raise(ErrorCode::Io, "write failed: " + destination);
    }

    const std::filesystem::path dest(destination);
    const std::filesystem::path stem = dest.parent_path() / dest.stem();
    for (const GridCellReport& cell : reports) {
        if (cell.weight_ensemble.empty()) continue;
        std::filesystem::path hist_path =
            stem.string() + "_hist_m" + std::to_string(cell.m) + "_n" + std::to_string(cell.n) + ".csv";
        std::ofstream hist_out(hist_path, std::ios::trunc);
        if (!hist_out) {
            raise(ErrorCode::Io, "cannot open for writing: " + hist_path.string());
        }
        write_histogram_csv(cell.histogram, hist_out);
    }
}

}  // namespace neurokey
