#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/attack.hpp"
#include "core/session.hpp"

namespace neurokey {

// Monte-Carlo grid: one cell per (m, n) combination.
struct ExperimentPlan {
    int k = 3;
    int l = 5;
    std::vector<int> n_values;
    std::vector<int> m_values;
    int runs_per_cell = 1000;
    LearningRule rule = LearningRule::Hebbian;
    uint64_t base_seed = 0;
    int max_iterations = 10000;
    bool attack_enabled = false;

    void validate() const;
};

// Fields present in the JSON override the base plan, so a plan file can
// be partial and layer on top of CLI flags.
ExperimentPlan plan_from_json(const std::string& text, ExperimentPlan base = {});
std::string plan_to_json(const ExperimentPlan& plan);

struct RunStatistics {
    double average = 0.0;
    double minimum = 0.0;
    double maximum = 0.0;
    double median = 0.0;
    double std_dev = 0.0;
    double ci95_half_width = 0.0;
    int64_t sample_count = 0;
    int64_t timeout_count = 0;
    bool std_dev_undefined = false;  // single-sample cell
};

// min/max exact, median by midpoint for even counts, sample standard
// deviation (n-1) and a 1.96 * std / sqrt(n) normal-approximation CI.
RunStatistics summarize(const std::vector<double>& samples);

struct GridCellReport {
    int m = 0;
    int n = 0;
    RunStatistics sync_time;
    EntropyReport entropy;
    WeightHistogram histogram;
    bool has_attack = false;
    RunStatistics attack_score;
    // Final weights (party A) of converged runs, in run order.
    std::vector<WeightMatrix> weight_ensemble;
};

using ProgressFn = std::function<void(int cells_done, int cells_total)>;

// Runs every cell of the plan. Per-run seeds derive from
// (base_seed, m, n, run_index), so any run is individually replayable and
// results do not depend on scheduling. threads = 0 picks the hardware
// concurrency. Timeouts are recorded per cell, never raised.
std::vector<GridCellReport> run_batch(const ExperimentPlan& plan, int threads = 0,
                                      const ProgressFn& progress = nullptr);

// Seed derivation used by run_batch, exposed for replaying single runs.
SessionSeeds derive_session_seeds(uint64_t base_seed, int m, int n, int run_index);
uint64_t derive_attacker_seed(uint64_t base_seed, int m, int n, int run_index);

// CSV columns: m,n,sync_avg,sync_ci95,sync_min,sync_max,sync_median,
// entropy_avg,key_length_bits,attack_avg,attack_ci95,attack_min,
// attack_max,attack_median,timeouts. Rows ordered by (n, m); attack
// columns are blank when the plan ran without an attacker.
void write_report_csv(const std::vector<GridCellReport>& reports, std::ostream& out);

// Same fields as the CSV plus standard deviations and sample counts.
void write_report_json(const std::vector<GridCellReport>& reports, std::ostream& out);

// Writes the main report plus per-cell histogram CSV siblings
// (<stem>_hist_m<M>_n<N>.csv). format is "csv" or "json".
void export_report(const std::vector<GridCellReport>& reports, const std::string& format,
                   const std::string& destination);

// Fixed-precision number formatting shared by the CSV/JSON exporters:
// up to six significant digits, no exponent padding surprises.
std::string format_number(double v);

}  // namespace neurokey
