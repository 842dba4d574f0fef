#include "lexitune/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace lexitune {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

struct ResolvedData {
    TimeSeriesDataset tuning;
    std::vector<TimeSeriesDataset> test_folds;
};

// Builds the tuning dataset and the chronological test folds; both are fixed
// across seeds and method variants.
ResolvedData resolve_data(const ExperimentConfig& cfg) {
    TimeSeriesDataset full;
    if (cfg.scenario) {
        full = generate(*cfg.scenario);
    } else if (cfg.dataset_path) {
        full = load_csv(*cfg.dataset_path, cfg.task, cfg.label_column);
    } else {
        throw ConfigError("experiment: no dataset source configured");
    }

    ResolvedData out;
    if (cfg.test_path) {
        out.tuning = full;
        TimeSeriesDataset shifted = load_csv(*cfg.test_path, cfg.task, cfg.label_column);
        // Offset test origins past the tuning rows so the leakage check
        // stays meaningful for separate files.
        for (std::size_t& o : shifted.origin) o += full.size();
        const std::size_t n = shifted.size();
        const std::size_t base = n / cfg.n_test_folds;
        const std::size_t extra = n % cfg.n_test_folds;
        std::size_t pos = 0;
        for (std::size_t f = 0; f < cfg.n_test_folds; ++f) {
            const std::size_t len = base + (f < extra ? 1 : 0);
            if (len == 0) throw ConfigError("experiment: test fold would be empty");
            std::vector<std::size_t> idx(len);
            for (std::size_t i = 0; i < len; ++i) idx[i] = pos + i;
            out.test_folds.push_back(shifted.subset(idx));
            pos += len;
        }
    } else {
        TrainTestSplit split = split_train_test(full, cfg.test_fraction, cfg.n_test_folds);
        out.tuning = std::move(split.train);
        out.test_folds = std::move(split.test_folds);
    }
    return out;
}

// Tuning must never see a test row: every tuning-row origin must precede
// every test-row origin.
void assert_no_leakage(const ResolvedData& data) {
    std::size_t max_tuning = 0;
    for (std::size_t o : data.tuning.origin) max_tuning = std::max(max_tuning, o);
    for (const TimeSeriesDataset& fold : data.test_folds)
        for (std::size_t o : fold.origin)
            if (o <= max_tuning)
                throw std::logic_error("tuning data overlaps a test fold (leakage)");
}

Configuration select_configuration(const ExperimentConfig& cfg, const OptimizerResult& result,
                                   const Tolerance& kappa) {
    if (cfg.select == SelectRule::online || result.trace.empty()) return result.best;
    std::vector<std::pair<Configuration, ObjectiveVector>> points;
    points.reserve(result.trace.size());
    for (const TraceEntry& e : result.trace) points.emplace_back(e.config, e.objectives);
    const std::vector<std::size_t> chosen = lexi_optimal_set(points, kappa);
    return points[chosen.front()].first;
}

}  // namespace

MethodVariant variant_from_string(const std::string& s) {
    if (s == "hypertime") return MethodVariant::hypertime;
    if (s == "hypertime_reverse") return MethodVariant::hypertime_reverse;
    if (s == "cfo_avg") return MethodVariant::cfo_avg;
    if (s == "cfo_worst") return MethodVariant::cfo_worst;
    if (s == "cfo_weighted") return MethodVariant::cfo_weighted;
    if (s == "random_search") return MethodVariant::random_search;
    throw ConfigError("unknown method variant: " + s);
}

const char* variant_name(MethodVariant v) {
    switch (v) {
        case MethodVariant::hypertime: return "hypertime";
        case MethodVariant::hypertime_reverse: return "hypertime_reverse";
        case MethodVariant::cfo_avg: return "cfo_avg";
        case MethodVariant::cfo_worst: return "cfo_worst";
        case MethodVariant::cfo_weighted: return "cfo_weighted";
        case MethodVariant::random_search: return "random_search";
    }
    return "unknown";
}

ObjectiveMode variant_mode(MethodVariant v, double weighted_lambda) {
    ObjectiveMode mode;
    switch (v) {
        case MethodVariant::hypertime:
        case MethodVariant::random_search:
            mode.kind = ObjectiveModeKind::lexi_avg_then_worst;
            break;
        case MethodVariant::hypertime_reverse:
            mode.kind = ObjectiveModeKind::lexi_worst_then_avg;
            break;
        case MethodVariant::cfo_avg:
            mode.kind = ObjectiveModeKind::single_avg;
            break;
        case MethodVariant::cfo_worst:
            mode.kind = ObjectiveModeKind::single_worst;
            break;
        case MethodVariant::cfo_weighted:
            mode.kind = ObjectiveModeKind::weighted;
            mode.weight_lambda = weighted_lambda;
            break;
    }
    return mode;
}

MethodResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("experiment: at least one seed is required");
    const ResolvedData data = resolve_data(cfg);
    assert_no_leakage(data);

    MethodResult result;
    result.method = variant_name(cfg.variant);
    for (std::size_t i = 0; i < cfg.space.dimension(); ++i)
        result.param_names.push_back(cfg.space.name_at(i));

    for (std::uint64_t seed : cfg.seeds) {
        const std::uint64_t opt_seed = derive_seed(seed, 1);
        const std::uint64_t shuffle_seed = derive_seed(seed, 2);

        const FoldPlan plan =
            plan_folds(data.tuning, cfg.folds_k, cfg.strategy, cfg.holdout_fraction,
                       cfg.chronology, shuffle_seed, cfg.boundaries);

        const Evaluator evaluator = [&](const Configuration& c) {
            return evaluate_config(c, data.tuning, plan, cfg.learner, cfg.space, cfg.metric);
        };

        OptimizerParams params = cfg.optimizer;
        params.seed = opt_seed;
        params.mode = variant_mode(cfg.variant, cfg.weighted_lambda);
        // A shared config may carry more tolerance levels than a
        // single-objective variant uses; the prefix keeps priority order.
        if (params.kappa.kappa.size() > params.mode.objective_count())
            params.kappa.kappa.resize(params.mode.objective_count());

        OptimizerResult opt = cfg.variant == MethodVariant::random_search
                                  ? random_search(cfg.space, evaluator, params)
                                  : run_lexiflow(cfg.space, evaluator, params);

        const Configuration selected =
            select_configuration(cfg, opt, resolve_kappa(params));

        // Final fit on the tuning data, then score each test fold.
        TimeSeriesDataset fit_data = data.tuning;
        if (cfg.final_fit == FinalFit::train_only && cfg.strategy == FoldStrategy::holdout) {
            const FoldSplit split = holdout_split(plan);
            fit_data = data.tuning.subset(split.train_indices);
        }
        const Model model = train(cfg.learner, cfg.space, selected, fit_data);

        SeedOutcome outcome;
        outcome.seed = seed;
        outcome.selected = selected;
        outcome.selected_objectives = opt.best_objectives;
        for (const TimeSeriesDataset& fold : data.test_folds)
            outcome.test_fold_losses.push_back(loss(model, fold, cfg.metric));
        outcome.test_average = mean_of(outcome.test_fold_losses);
        outcome.test_worst =
            *std::max_element(outcome.test_fold_losses.begin(), outcome.test_fold_losses.end());
        outcome.trace = std::move(opt.trace);
        result.per_seed.push_back(std::move(outcome));
    }

    std::vector<double> avgs, worsts;
    for (const SeedOutcome& o : result.per_seed) {
        avgs.push_back(o.test_average);
        worsts.push_back(o.test_worst);
    }
    result.test_average_mean = mean_of(avgs);
    result.test_average_std = sample_std(avgs);
    result.test_worst_mean = mean_of(worsts);
    result.test_worst_std = sample_std(worsts);

    const std::size_t n_folds = data.test_folds.size();
    result.per_fold_mean.resize(n_folds);
    result.per_fold_std.resize(n_folds);
    for (std::size_t f = 0; f < n_folds; ++f) {
        std::vector<double> fold_losses;
        for (const SeedOutcome& o : result.per_seed) fold_losses.push_back(o.test_fold_losses[f]);
        result.per_fold_mean[f] = mean_of(fold_losses);
        result.per_fold_std[f] = sample_std(fold_losses);
    }
    return result;
}

void fill_winning_folds(ExperimentReport& report) {
    if (report.methods.empty()) return;
    for (MethodResult& m : report.methods) m.winning_folds = 0;
    for (std::size_t f = 0; f < report.n_test_folds; ++f) {
        double best = std::numeric_limits<double>::infinity();
        for (const MethodResult& m : report.methods)
            best = std::min(best, m.per_fold_mean[f]);
        for (MethodResult& m : report.methods)
            if (m.per_fold_mean[f] == best) m.winning_folds += 1;  // ties: credit everyone
    }
}

ExperimentReport compare_methods(const ExperimentConfig& base,
                                 const std::vector<MethodVariant>& variants) {
    if (variants.empty()) throw ConfigError("compare_methods: no variants given");
    ExperimentReport report;
    for (MethodVariant v : variants) {
        ExperimentConfig cfg = base;
        cfg.variant = v;
        report.methods.push_back(run_experiment(cfg));
    }
    report.n_test_folds = report.methods.front().per_fold_mean.size();
    for (const MethodResult& m : report.methods)
        if (m.per_fold_mean.size() != report.n_test_folds)
            throw std::logic_error("compare_methods: mismatched test folds across methods");
    fill_winning_folds(report);
    return report;
}

namespace {

json config_values_json(const std::vector<std::string>& names, const Configuration& config) {
    json out = json::object();
    for (std::size_t i = 0; i < config.values.size(); ++i) {
        const std::string key = i < names.size() ? names[i] : "p" + std::to_string(i);
        const ParamValue& v = config.values[i];
        if (const double* d = std::get_if<double>(&v))
            out[key] = *d;
        else if (const std::int64_t* n = std::get_if<std::int64_t>(&v))
            out[key] = *n;
        else
            out[key] = std::get<std::string>(v);
    }
    return out;
}

json report_to_json(const ExperimentReport& report) {
    json out;
    out["n_test_folds"] = report.n_test_folds;
    out["methods"] = json::array();
    for (const MethodResult& m : report.methods) {
        json jm;
        jm["method"] = m.method;
        jm["param_names"] = m.param_names;
        jm["test_average_mean"] = m.test_average_mean;
        jm["test_average_std"] = m.test_average_std;
        jm["test_worst_mean"] = m.test_worst_mean;
        jm["test_worst_std"] = m.test_worst_std;
        jm["winning_folds"] = m.winning_folds;
        jm["per_fold_mean"] = m.per_fold_mean;
        jm["per_fold_std"] = m.per_fold_std;
        jm["per_seed"] = json::array();
        for (const SeedOutcome& o : m.per_seed) {
            json jo;
            jo["seed"] = o.seed;
            json sel = json::array();
            // Values kept as an array to preserve coordinate order exactly.
            for (const ParamValue& v : o.selected.values) {
                if (const double* d = std::get_if<double>(&v))
                    sel.push_back(*d);
                else if (const std::int64_t* n = std::get_if<std::int64_t>(&v))
                    sel.push_back(*n);
                else
                    sel.push_back(std::get<std::string>(v));
            }
            jo["selected"] = sel;
            jo["selected_objectives"] = o.selected_objectives;
            jo["test_fold_losses"] = o.test_fold_losses;
            jo["test_average"] = o.test_average;
            jo["test_worst"] = o.test_worst;
            jm["per_seed"].push_back(std::move(jo));
        }
        out["methods"].push_back(std::move(jm));
    }
    return out;
}

}  // namespace

void report_emit(const ExperimentReport& report, const std::string& out_dir, bool write_traces) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + out_dir);

    {
        std::ofstream out(out_dir + "/summary.csv");
        if (!out) throw std::runtime_error("cannot write " + out_dir + "/summary.csv");
        out << "method,test_average,test_average_std,test_worst,test_worst_std,winning_folds\n";
        for (const MethodResult& m : report.methods)
            out << m.method << ',' << fmt(m.test_average_mean) << ',' << fmt(m.test_average_std)
                << ',' << fmt(m.test_worst_mean) << ',' << fmt(m.test_worst_std) << ','
                << m.winning_folds << '\n';
    }
    {
        std::ofstream out(out_dir + "/per_fold.csv");
        if (!out) throw std::runtime_error("cannot write " + out_dir + "/per_fold.csv");
        out << "method,fold,mean_loss,std_loss\n";
        for (const MethodResult& m : report.methods)
            for (std::size_t f = 0; f < m.per_fold_mean.size(); ++f)
                out << m.method << ',' << (f + 1) << ',' << fmt(m.per_fold_mean[f]) << ','
                    << fmt(m.per_fold_std[f]) << '\n';
    }
    {
        std::ofstream out(out_dir + "/report.json");
        if (!out) throw std::runtime_error("cannot write " + out_dir + "/report.json");
        out << report_to_json(report).dump(2) << '\n';
    }
    if (write_traces) {
        for (const MethodResult& m : report.methods) {
            for (const SeedOutcome& o : m.per_seed) {
                const std::string path = out_dir + "/trace_" + m.method + "_seed" +
                                         std::to_string(o.seed) + ".jsonl";
                std::ofstream out(path);
                if (!out) throw std::runtime_error("cannot write " + path);
                for (const TraceEntry& e : o.trace) {
                    json line;
                    line["iteration"] = e.iteration;
                    line["config"] = config_values_json(m.param_names, e.config);
                    line["fold_losses"] = e.fold_losses;
                    line["objectives"] = e.objectives;
                    line["event"] = trace_event_name(e.event);
                    line["delta"] = e.delta;
                    line["targets"] = e.targets;
                    out << line.dump() << '\n';
                }
            }
        }
    }
}

ExperimentReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    ExperimentReport report;
    report.n_test_folds = j.at("n_test_folds").get<std::size_t>();
    for (const json& jm : j.at("methods")) {
        MethodResult m;
        m.method = jm.at("method").get<std::string>();
        m.param_names = jm.at("param_names").get<std::vector<std::string>>();
        m.test_average_mean = jm.at("test_average_mean").get<double>();
        m.test_average_std = jm.at("test_average_std").get<double>();
        m.test_worst_mean = jm.at("test_worst_mean").get<double>();
        m.test_worst_std = jm.at("test_worst_std").get<double>();
        m.winning_folds = jm.at("winning_folds").get<std::size_t>();
        m.per_fold_mean = jm.at("per_fold_mean").get<std::vector<double>>();
        m.per_fold_std = jm.at("per_fold_std").get<std::vector<double>>();
        for (const json& jo : jm.at("per_seed")) {
            SeedOutcome o;
            o.seed = jo.at("seed").get<std::uint64_t>();
            for (const json& v : jo.at("selected")) {
                if (v.is_number_integer())
                    o.selected.values.emplace_back(v.get<std::int64_t>());
                else if (v.is_number())
                    o.selected.values.emplace_back(v.get<double>());
                else
                    o.selected.values.emplace_back(v.get<std::string>());
            }
            o.selected_objectives = jo.at("selected_objectives").get<std::vector<double>>();
            o.test_fold_losses = jo.at("test_fold_losses").get<std::vector<double>>();
            o.test_average = jo.at("test_average").get<double>();
            o.test_worst = jo.at("test_worst").get<double>();
            m.per_seed.push_back(std::move(o));
        }
        report.methods.push_back(std::move(m));
    }
    return report;
}

TheoremRow run_theorem_check(const ExperimentConfig& cfg, const TheoremConfig& theorem) {
    if (!cfg.scenario)
        throw ConfigError("theorem check requires a scenario-backed dataset");
    if (cfg.scenario->task != Task::regression || cfg.metric != LossMetric::mse)
        throw ConfigError("theorem check supports regression with the mse metric");

    const ResolvedData data = resolve_data(cfg);
    assert_no_leakage(data);
    const FoldPlan plan = plan_folds(data.tuning, cfg.folds_k, FoldStrategy::cv,
                                     cfg.holdout_fraction, Chronology::chronological);

    const std::size_t kstar = theorem.kstar == 0 ? plan.k : theorem.kstar;
    if (kstar < 1 || kstar > plan.k) throw ConfigError("theorem: kstar out of range");

    // Sampled configuration grid with its fold losses.
    SeededRng grid_rng(derive_seed(theorem.seed, 101));
    std::vector<Configuration> grid;
    std::vector<FoldLosses> grid_losses;
    for (std::size_t i = 0; i < theorem.grid_size; ++i) {
        Configuration c = sample_uniform(cfg.space, grid_rng);
        grid_losses.push_back(
            evaluate_config(c, data.tuning, plan, cfg.learner, cfg.space, cfg.metric));
        grid.push_back(std::move(c));
    }

    std::vector<double> l_avg(grid.size()), l_worst(grid.size()), l_kstar(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ObjectiveVector v =
            aggregate(grid_losses[i], ObjectiveMode{ObjectiveModeKind::lexi_avg_then_worst, 0.0});
        l_avg[i] = v[0];
        l_worst[i] = v[1];
        l_kstar[i] = grid_losses[i][kstar - 1];
    }

    const std::size_t best_on_kstar = static_cast<std::size_t>(
        std::min_element(l_kstar.begin(), l_kstar.end()) - l_kstar.begin());
    const double l_avg_star = *std::min_element(l_avg.begin(), l_avg.end());
    const double threshold = kappa_threshold(l_avg[best_on_kstar], l_avg_star);
    const double kappa_used = theorem.kappa_override.value_or(threshold);

    // Tolerance-optimal selection over the grid at the chosen kappa.
    std::vector<std::pair<Configuration, ObjectiveVector>> points;
    for (std::size_t i = 0; i < grid.size(); ++i)
        points.emplace_back(grid[i], ObjectiveVector{l_avg[i], l_worst[i]});
    Tolerance kappa;
    kappa.kappa = {kappa_used, 0.0};
    const std::size_t chosen = lexi_optimal_set(points, kappa).front();

    TheoremRow row;
    row.beta = theorem.beta;
    row.epsilon = theorem.epsilon;
    row.kstar = kstar;
    row.n_val = plan.segments[kstar - 1].size();
    row.l_avg_star = l_avg_star;
    row.l_avg_at_ckstar = l_avg[best_on_kstar];
    row.l_worst_at_ckstar = l_worst[best_on_kstar];
    row.threshold = threshold;
    row.kappa_used = kappa_used;
    row.case_flag = l_kstar[chosen] <= l_avg[chosen];

    BoundInputs inputs;
    inputs.beta = theorem.beta;
    inputs.epsilon = theorem.epsilon;
    inputs.n_val = row.n_val;
    inputs.l_avg_at_ckstar = row.l_avg_at_ckstar;
    inputs.l_avg_star = row.l_avg_star;
    inputs.l_worst_at_ckstar = row.l_worst_at_ckstar;
    inputs.kappa = kappa_used;
    inputs.case_flag = row.case_flag;
    row.bound = test_loss_bound(inputs);

    // Model whose fold-k* validation loss the bound speaks about.
    const FoldSplit split = cv_split(plan, kstar);
    const TimeSeriesDataset fit_data = data.tuning.subset(split.train_indices);
    const Model model = train(cfg.learner, cfg.space, grid[chosen], fit_data);

    // Generative parameters of the fold-k* time range (midpoint row).
    const std::vector<std::size_t>& seg = plan.segments[kstar - 1];
    const double mid_ts = data.tuning.timestamps[seg[seg.size() / 2]];
    const DriftScenario& sc = *cfg.scenario;
    const double time_fraction = (mid_ts + 0.5) / static_cast<double>(sc.n_rows);
    std::vector<double> gen_w;
    double gen_sigma = 0.0;
    {
        double acc = 0.0;
        std::size_t active = sc.segments.size() - 1;
        for (std::size_t s = 0; s < sc.segments.size(); ++s) {
            if (time_fraction < acc + sc.segments[s].fraction) {
                active = s;
                break;
            }
            acc += sc.segments[s].fraction;
        }
        gen_w = sc.segments[active].weights;
        gen_sigma = sc.segments[active].noise_sigma;
    }

    // Fresh draws from the fold-k* distribution.
    std::size_t within = 0;
    double observed_sum = 0.0;
    std::vector<double> observed(theorem.draws);
    for (std::size_t dr = 0; dr < theorem.draws; ++dr) {
        SeededRng rng(derive_seed(theorem.seed, 1000 + dr));
        TimeSeriesDataset draw;
        draw.task = Task::regression;
        draw.feature_dim = sc.feature_dim;
        draw.features = Matrix(row.n_val, sc.feature_dim);
        draw.timestamps.resize(row.n_val);
        draw.labels.resize(row.n_val);
        for (std::size_t i = 0; i < row.n_val; ++i) {
            draw.timestamps[i] = static_cast<double>(i);
            double signal = 0.0;
            for (std::size_t c = 0; c < sc.feature_dim; ++c) {
                draw.features(i, c) = rng.uniform(-1.0, 1.0);
                signal += gen_w[c] * draw.features(i, c);
            }
            draw.labels[i] = signal + (gen_sigma > 0.0 ? rng.normal(0.0, gen_sigma) : 0.0);
        }
        finalize_rows(draw);
        const double l = loss(model, draw, LossMetric::mse);
        observed[dr] = l;
        observed_sum += l;
        if (l <= row.bound) ++within;
    }
    row.observed_mean = observed_sum / static_cast<double>(theorem.draws);
    row.within_bound = static_cast<double>(within) / static_cast<double>(theorem.draws);

    // Concentration coverage of the draws around their own mean.
    const double tail = hoeffding_term(theorem.beta, theorem.epsilon, row.n_val);
    std::size_t close = 0;
    for (double l : observed)
        if (std::fabs(l - row.observed_mean) <= tail) ++close;
    row.coverage = static_cast<double>(close) / static_cast<double>(theorem.draws);
    return row;
}

std::string theorem_csv_string(const TheoremRow& row) {
    std::string out =
        "beta,epsilon,n_val,kstar,l_avg_star,l_avg_at_ckstar,l_worst_at_ckstar,"
        "kappa_threshold,kappa_used,case,bound,observed_mean,within_bound,coverage\n";
    out += fmt(row.beta) + ',' + fmt(row.epsilon) + ',' + std::to_string(row.n_val) + ',' +
           std::to_string(row.kstar) + ',' + fmt(row.l_avg_star) + ',' +
           fmt(row.l_avg_at_ckstar) + ',' + fmt(row.l_worst_at_ckstar) + ',' +
           fmt(row.threshold) + ',' + fmt(row.kappa_used) + ',' +
           (row.case_flag ? "1" : "2") + ',' + fmt(row.bound) + ',' + fmt(row.observed_mean) +
           ',' + fmt(row.within_bound) + ',' + fmt(row.coverage) + '\n';
    return out;
}

void write_theorem_csv(const TheoremRow& row, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << theorem_csv_string(row);
}

namespace {

const std::set<std::string>& known_tunables() {
    static const std::set<std::string> names = {
        "lambda", "degree", "k", "distance", "n_estimators", "learning_rate",
        "min_samples_leaf"};
    return names;
}

void check_keys(const ConfigFile& file, const std::string& section,
                const std::set<std::string>& allowed) {
    for (const std::string& key : file.keys(section))
        if (!allowed.contains(key))
            throw ConfigError("unknown config key: [" + section + "] " + key);
}

ParamDomain parse_param_domain(const std::vector<std::string>& tokens) {
    // name kind args...; caller strips the name.
    const std::string& kind = tokens[1];
    if (kind == "continuous" || kind == "integer") {
        if (tokens.size() < 4)
            throw ConfigError("param '" + tokens[0] + "': expected lower and upper bounds");
        bool log_scale = false;
        if (tokens.size() == 5) {
            if (tokens[4] != "log")
                throw ConfigError("param '" + tokens[0] + "': unexpected token " + tokens[4]);
            log_scale = true;
        } else if (tokens.size() > 5) {
            throw ConfigError("param '" + tokens[0] + "': too many tokens");
        }
        try {
            if (kind == "continuous")
                return ParamDomain::make_continuous(std::stod(tokens[2]), std::stod(tokens[3]),
                                                    log_scale);
            return ParamDomain::make_integer(std::stoll(tokens[2]), std::stoll(tokens[3]),
                                             log_scale);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("param '" + tokens[0] + "': " + e.what());
        }
    }
    if (kind == "categorical") {
        if (tokens.size() < 3)
            throw ConfigError("param '" + tokens[0] + "': categorical needs choices");
        return ParamDomain::make_categorical(
            std::vector<std::string>(tokens.begin() + 2, tokens.end()));
    }
    throw ConfigError("param '" + tokens[0] + "': unknown kind " + kind);
}

}  // namespace

ExperimentConfig parse_experiment_config(const ConfigFile& file) {
    ExperimentConfig cfg;

    check_keys(file, "dataset", {"path", "scenario", "task", "label"});
    const bool has_path = file.has("dataset", "path");
    const bool has_scenario = file.has("dataset", "scenario");
    if (has_path == has_scenario)
        throw ConfigError("[dataset] must set exactly one of: path, scenario");
    const std::string task = file.get_string_or("dataset", "task", "regression");
    if (task == "regression")
        cfg.task = Task::regression;
    else if (task == "binary_classification")
        cfg.task = Task::binary_classification;
    else
        throw ConfigError("[dataset] task: unknown value " + task);
    cfg.label_column = file.get_string_or("dataset", "label", "label");
    if (has_path) cfg.dataset_path = file.get_string("dataset", "path");
    if (has_scenario) {
        cfg.scenario = load_scenario(file.get_string("dataset", "scenario"));
        cfg.task = cfg.scenario->task;
    }

    {
        std::set<std::string> allowed = {"family", "metric"};
        allowed.insert(known_tunables().begin(), known_tunables().end());
        check_keys(file, "learner", allowed);
        cfg.learner.family = learner_family_from_string(file.get_string("learner", "family"));
        cfg.metric = loss_metric_from_string(file.get_string_or("learner", "metric", "mse"));
        for (const std::string& key : file.keys("learner")) {
            if (key == "family" || key == "metric") continue;
            const std::string raw = file.get_string("learner", key);
            std::int64_t iv = 0;
            const auto [p1, e1] = std::from_chars(raw.data(), raw.data() + raw.size(), iv);
            if (e1 == std::errc{} && p1 == raw.data() + raw.size()) {
                cfg.learner.fixed[key] = iv;
                continue;
            }
            double dv = 0.0;
            const auto [p2, e2] = std::from_chars(raw.data(), raw.data() + raw.size(), dv);
            if (e2 == std::errc{} && p2 == raw.data() + raw.size()) {
                cfg.learner.fixed[key] = dv;
                continue;
            }
            cfg.learner.fixed[key] = raw;
        }
    }

    check_keys(file, "space", {"param"});
    for (const std::string& line : file.get_all("space", "param")) {
        const std::vector<std::string> tokens = split_tokens(line);
        if (tokens.size() < 2) throw ConfigError("param line needs: name kind ...");
        cfg.space.add(tokens[0], parse_param_domain(tokens));
    }
    if (cfg.space.dimension() == 0) throw ConfigError("[space] defines no parameters");

    check_keys(file, "folds", {"k", "strategy", "chronology", "holdout_fraction", "boundaries"});
    cfg.folds_k = static_cast<std::size_t>(file.get_int_or("folds", "k", 4));
    const std::string strategy = file.get_string_or("folds", "strategy", "cv");
    if (strategy == "cv")
        cfg.strategy = FoldStrategy::cv;
    else if (strategy == "holdout")
        cfg.strategy = FoldStrategy::holdout;
    else
        throw ConfigError("[folds] strategy: unknown value " + strategy);
    const std::string chronology = file.get_string_or("folds", "chronology", "chronological");
    if (chronology == "chronological")
        cfg.chronology = Chronology::chronological;
    else if (chronology == "shuffled")
        cfg.chronology = Chronology::shuffled;
    else
        throw ConfigError("[folds] chronology: unknown value " + chronology);
    cfg.holdout_fraction = file.get_double_or("folds", "holdout_fraction", 0.3);
    if (file.has("folds", "boundaries")) {
        std::vector<double> b;
        for (const std::string& tok : split_tokens(file.get_string("folds", "boundaries")))
            b.push_back(std::stod(tok));
        cfg.boundaries = std::move(b);
    }

    check_keys(file, "optimizer",
               {"budget", "kappa", "delta_init", "delta_lower", "delta_restart_step", "select"});
    cfg.optimizer.budget = static_cast<std::size_t>(file.get_int_or("optimizer", "budget", 100));
    if (cfg.optimizer.budget < 1) throw ConfigError("[optimizer] budget must be >= 1");
    cfg.optimizer.delta_init = file.get_double_or("optimizer", "delta_init", 0.25);
    cfg.optimizer.delta_lower = file.get_double_or("optimizer", "delta_lower", 0.0009765625);
    cfg.optimizer.delta_restart_step = file.get_double_or("optimizer", "delta_restart_step", -1.0);
    if (file.has("optimizer", "kappa")) {
        Tolerance t;
        for (const std::string& tok : split_tokens(file.get_string("optimizer", "kappa")))
            t.kappa.push_back(parse_fraction_or_percent(tok));
        cfg.optimizer.kappa = std::move(t);
    }
    const std::string select = file.get_string_or("optimizer", "select", "online");
    if (select == "online")
        cfg.select = SelectRule::online;
    else if (select == "posthoc")
        cfg.select = SelectRule::posthoc;
    else
        throw ConfigError("[optimizer] select: unknown value " + select);

    check_keys(file, "test", {"test_fraction", "test_path", "n_test_folds"});
    if (file.has("test", "test_path")) cfg.test_path = file.get_string("test", "test_path");
    cfg.test_fraction = file.get_double_or("test", "test_fraction", 0.3);
    cfg.n_test_folds = static_cast<std::size_t>(file.get_int_or("test", "n_test_folds", 5));

    check_keys(file, "experiment",
               {"variant", "variants", "weighted_lambda", "seeds", "out", "final_fit"});
    if (file.has("experiment", "variant"))
        cfg.variant = variant_from_string(file.get_string("experiment", "variant"));
    cfg.weighted_lambda = file.get_double_or("experiment", "weighted_lambda", 0.01);
    if (file.has("experiment", "seeds")) {
        cfg.seeds.clear();
        for (const std::string& tok : split_tokens(file.get_string("experiment", "seeds")))
            cfg.seeds.push_back(static_cast<std::uint64_t>(std::stoull(tok)));
        if (cfg.seeds.empty()) throw ConfigError("[experiment] seeds is empty");
    }
    cfg.out_dir = file.get_string_or("experiment", "out", "results");
    const std::string final_fit = file.get_string_or("experiment", "final_fit", "full");
    if (final_fit == "full")
        cfg.final_fit = FinalFit::full;
    else if (final_fit == "train_only")
        cfg.final_fit = FinalFit::train_only;
    else
        throw ConfigError("[experiment] final_fit: unknown value " + final_fit);

    check_keys(file, "theorem",
               {"beta", "epsilon", "grid_size", "draws", "kstar", "kappa", "seed"});
    return cfg;
}

std::vector<MethodVariant> parse_variant_list(const std::string& tokens) {
    std::vector<MethodVariant> out;
    std::string cur;
    for (char ch : tokens + ",") {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty()) out.push_back(variant_from_string(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (out.empty()) throw ConfigError("empty variant list");
    return out;
}

TheoremConfig parse_theorem_config(const ConfigFile& file) {
    TheoremConfig t;
    t.beta = file.get_double_or("theorem", "beta", 4.0);
    t.epsilon = file.get_double_or("theorem", "epsilon", 0.05);
    t.grid_size = static_cast<std::size_t>(file.get_int_or("theorem", "grid_size", 50));
    t.draws = static_cast<std::size_t>(file.get_int_or("theorem", "draws", 200));
    t.kstar = static_cast<std::size_t>(file.get_int_or("theorem", "kstar", 0));
    t.seed = static_cast<std::uint64_t>(file.get_int_or("theorem", "seed", 0));
    if (file.has("theorem", "kappa"))
        t.kappa_override = parse_fraction_or_percent(file.get_string("theorem", "kappa"));
    return t;
}

}  // namespace lexitune
