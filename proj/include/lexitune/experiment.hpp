#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexitune/config_file.hpp"
#include "lexitune/drift_gen.hpp"
#include "lexitune/lexiflow.hpp"
#include "lexitune/theory_bounds.hpp"

namespace lexitune {

enum class MethodVariant {
    hypertime,          // chronological lexicographic [avg, worst] direct search
    hypertime_reverse,  // priority reversed: [worst, avg]
    cfo_avg,            // average-only direct search
    cfo_worst,          // worst-only direct search
    cfo_weighted,       // single weighted combination of avg and worst
    random_search
};

MethodVariant variant_from_string(const std::string& s);
const char* variant_name(MethodVariant v);
ObjectiveMode variant_mode(MethodVariant v, double weighted_lambda);

enum class FinalFit { full, train_only };
enum class SelectRule { online, posthoc };

// Fully resolved experiment description: dataset source, learner, search
// space, fold settings, optimizer settings, and test protocol.
struct ExperimentConfig {
    // dataset: exactly one source
    std::optional<std::string> dataset_path;
    std::optional<DriftScenario> scenario;
    Task task = Task::regression;
    std::string label_column = "label";

    LearnerSpec learner;
    LossMetric metric = LossMetric::mse;
    SearchSpace space;

    std::size_t folds_k = 4;
    FoldStrategy strategy = FoldStrategy::cv;
    Chronology chronology = Chronology::chronological;
    double holdout_fraction = 0.3;
    std::optional<std::vector<double>> boundaries;

    MethodVariant variant = MethodVariant::hypertime;
    double weighted_lambda = 0.01;
    OptimizerParams optimizer;            // seed/mode filled per run
    SelectRule select = SelectRule::online;

    std::optional<std::string> test_path;
    double test_fraction = 0.3;
    std::size_t n_test_folds = 5;
    FinalFit final_fit = FinalFit::full;

    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    std::string out_dir = "results";
};

// `bench --theorem` settings.
struct TheoremConfig {
    double beta = 4.0;
    double epsilon = 0.05;
    std::size_t grid_size = 50;
    std::size_t draws = 200;
    std::size_t kstar = 0;  // 1-based; 0 means the last fold
    std::uint64_t seed = 0;
    std::optional<double> kappa_override;  // default: the threshold itself
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    Configuration selected;
    ObjectiveVector selected_objectives;
    std::vector<double> test_fold_losses;
    double test_average = 0.0;
    double test_worst = 0.0;
    Trace trace;
};

struct MethodResult {
    std::string method;
    std::vector<std::string> param_names;  // coordinate order of stored configs
    std::vector<SeedOutcome> per_seed;
    double test_average_mean = 0.0;
    double test_average_std = 0.0;
    double test_worst_mean = 0.0;
    double test_worst_std = 0.0;
    std::vector<double> per_fold_mean;  // over seeds, one per test fold
    std::vector<double> per_fold_std;
    std::size_t winning_folds = 0;      // filled by compare_methods
};

struct ExperimentReport {
    std::vector<MethodResult> methods;
    std::size_t n_test_folds = 0;
};

// Tunes, retrains, and scores one method over every seed. The dataset and
// test split are rebuilt deterministically from the config.
MethodResult run_experiment(const ExperimentConfig& config);

// Runs each variant on the shared dataset/test split and fills the
// tie-inclusive winning-fold counts from the per-fold mean losses.
ExperimentReport compare_methods(const ExperimentConfig& base,
                                 const std::vector<MethodVariant>& variants);

// Recomputes winning-fold counts (all tied methods are credited).
void fill_winning_folds(ExperimentReport& report);

// summary.csv, per_fold.csv, report.json, and trace_<method>_seed<k>.jsonl
// under out_dir. Byte-deterministic for a fixed report.
void report_emit(const ExperimentReport& report, const std::string& out_dir,
                 bool write_traces = true);

// Re-renders the CSV outputs from a saved report.json.
ExperimentReport load_report(const std::string& path);

struct TheoremRow {
    double beta = 0.0;
    double epsilon = 0.0;
    std::size_t n_val = 0;
    std::size_t kstar = 0;
    double l_avg_star = 0.0;
    double l_avg_at_ckstar = 0.0;
    double l_worst_at_ckstar = 0.0;
    double threshold = 0.0;
    double kappa_used = 0.0;
    bool case_flag = true;
    double bound = 0.0;
    double observed_mean = 0.0;   // mean over test draws
    double within_bound = 0.0;    // fraction of draws with loss <= bound
    double coverage = 0.0;        // Hoeffding Monte-Carlo coverage
};

// Enumerates a sampled configuration grid on the tuning data, selects the
// tolerance-optimal configuration at kappa = threshold, and stress-tests the
// two-case bound against fresh test draws from the fold-k* distribution.
// Requires a scenario-backed regression config.
TheoremRow run_theorem_check(const ExperimentConfig& config, const TheoremConfig& theorem);

void write_theorem_csv(const TheoremRow& row, const std::string& path);
std::string theorem_csv_string(const TheoremRow& row);

// Parses the experiment config file (see README for the grammar).
ExperimentConfig parse_experiment_config(const ConfigFile& file);
std::vector<MethodVariant> parse_variant_list(const std::string& tokens);
TheoremConfig parse_theorem_config(const ConfigFile& file);

}  // namespace lexitune
