// lexitune command-line front end.
//
// Subcommands:
//   gen-data  scenario JSON -> dataset CSV (+ provenance sidecar)
//   tune      run one method variant, emit summary/per-fold CSVs and traces
//   bench     run several variants on the shared dataset; --theorem adds the
//             bound table
//   report    re-render the CSV outputs from a saved report.json

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lexitune/experiment.hpp"

namespace {

using namespace lexitune;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string seeds;
    std::string kappa;
    std::string variant;
    std::string strategy;
    std::string select;
    std::string final_fit;
    std::int64_t seed = -1;
    std::int64_t budget = -1;
    std::int64_t k = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "experiment config file")->required();
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--seed", f.seed, "single tuning seed");
    cmd->add_option("--seeds", f.seeds, "comma- or space-separated seed list");
    cmd->add_option("--budget", f.budget, "evaluation budget per seed");
    cmd->add_option("--strategy", f.strategy, "fold strategy: cv or holdout");
    cmd->add_option("--k", f.k, "number of validation folds");
    cmd->add_option("--kappa", f.kappa, "tolerance list, e.g. '1%,0%'");
    cmd->add_option("--select", f.select, "selection rule: online or posthoc");
    cmd->add_option("--final-fit", f.final_fit, "final fit data: full or train_only");
}

std::string replace_commas(std::string s) {
    for (char& ch : s)
        if (ch == ',') ch = ' ';
    return s;
}

// Applies CLI overrides onto the parsed file before building the config.
ExperimentConfig build_config(const CommonFlags& f) {
    ConfigFile file = ConfigFile::parse_file(f.config_path);
    if (!f.out_dir.empty()) file.set("experiment", "out", f.out_dir);
    if (f.seed >= 0) file.set("experiment", "seeds", std::to_string(f.seed));
    if (!f.seeds.empty()) file.set("experiment", "seeds", replace_commas(f.seeds));
    if (f.budget >= 0) file.set("optimizer", "budget", std::to_string(f.budget));
    if (!f.strategy.empty()) file.set("folds", "strategy", f.strategy);
    if (f.k >= 0) file.set("folds", "k", std::to_string(f.k));
    if (!f.kappa.empty()) file.set("optimizer", "kappa", replace_commas(f.kappa));
    if (!f.variant.empty()) file.set("experiment", "variant", f.variant);
    if (!f.select.empty()) file.set("optimizer", "select", f.select);
    if (!f.final_fit.empty()) file.set("experiment", "final_fit", f.final_fit);
    return parse_experiment_config(file);
}

void print_summary(const ExperimentReport& report) {
    std::printf("%-20s %14s %14s %6s\n", "method", "test_average", "test_worst", "wins");
    for (const MethodResult& m : report.methods)
        std::printf("%-20s %14.6g %14.6g %6zu\n", m.method.c_str(), m.test_average_mean,
                    m.test_worst_mean, m.winning_folds);
}

int cmd_gen_data(const std::string& scenario_path, const std::string& out_csv) {
    const DriftScenario scenario = load_scenario(scenario_path);
    const TimeSeriesDataset ds = generate(scenario);
    write_csv(ds, out_csv);
    save_scenario(scenario, out_csv + ".scenario.json");
    std::printf("wrote %zu rows to %s\n", ds.size(), out_csv.c_str());
    return 0;
}

int cmd_tune(const CommonFlags& flags) {
    const ExperimentConfig cfg = build_config(flags);
    ExperimentReport report;
    report.methods.push_back(run_experiment(cfg));
    report.n_test_folds = report.methods.front().per_fold_mean.size();
    fill_winning_folds(report);
    report_emit(report, cfg.out_dir);
    print_summary(report);
    std::printf("outputs in %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_bench(const CommonFlags& flags, const std::string& variants_flag, bool theorem) {
    ConfigFile file = ConfigFile::parse_file(flags.config_path);
    std::string variants_spec = variants_flag;
    if (variants_spec.empty())
        variants_spec = file.get_string_or("experiment", "variants", "hypertime cfo_avg");
    const std::vector<MethodVariant> variants = parse_variant_list(variants_spec);

    const ExperimentConfig cfg = build_config(flags);
    const ExperimentReport report = compare_methods(cfg, variants);
    report_emit(report, cfg.out_dir);
    print_summary(report);

    if (theorem) {
        const TheoremConfig tc = parse_theorem_config(file);
        const TheoremRow row = run_theorem_check(cfg, tc);
        write_theorem_csv(row, cfg.out_dir + "/theorem.csv");
        std::fputs(theorem_csv_string(row).c_str(), stdout);
    }
    std::printf("outputs in %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_dir) {
    ExperimentReport report = load_report(in_path);
    fill_winning_folds(report);
    report_emit(report, out_dir, /*write_traces=*/false);
    print_summary(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexitune: tolerance-lexicographic hyperparameter tuning over "
                 "chronological validation folds"};
    app.require_subcommand(1);

    std::string scenario_path, gen_out = "data.csv";
    CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic drift dataset");
    gen->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    gen->add_option("--out", gen_out, "output CSV path");

    CommonFlags tune_flags;
    CLI::App* tune = app.add_subcommand("tune", "tune one method variant");
    add_common(tune, tune_flags);
    tune->add_option("--variant", tune_flags.variant, "method variant");

    CommonFlags bench_flags;
    std::string bench_variants;
    bool bench_theorem = false;
    CLI::App* bench = app.add_subcommand("bench", "compare method variants");
    add_common(bench, bench_flags);
    bench->add_option("--variants", bench_variants, "variant list, e.g. 'hypertime,cfo_avg'");
    bench->add_flag("--theorem", bench_theorem, "also compute the bound table");

    std::string report_in, report_out = "results";
    CLI::App* report = app.add_subcommand("report", "re-render a saved report.json");
    report->add_option("--in", report_in, "path to report.json")->required();
    report->add_option("--out", report_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(scenario_path, gen_out);
        if (tune->parsed()) return cmd_tune(tune_flags);
        if (bench->parsed()) return cmd_bench(bench_flags, bench_variants, bench_theorem);
        if (report->parsed()) return cmd_report(report_in, report_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
