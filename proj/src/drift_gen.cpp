#include "lexitune/drift_gen.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "lexitune/config_file.hpp"
#include "lexitune/rng.hpp"

namespace lexitune {

namespace {

// Piecewise-linear interpolation of segment weights, anchored at segment
// midpoints along the time axis; constant before the first midpoint and
// after the last.
std::vector<double> interpolated_weights(const DriftScenario& sc, double time_fraction) {
    std::vector<double> midpoints;
    double acc = 0.0;
    for (const DriftSegment& seg : sc.segments) {
        midpoints.push_back(acc + 0.5 * seg.fraction);
        acc += seg.fraction;
    }
    if (time_fraction <= midpoints.front()) return sc.segments.front().weights;
    if (time_fraction >= midpoints.back()) return sc.segments.back().weights;
    std::size_t hi = 1;
    while (midpoints[hi] < time_fraction) ++hi;
    const double t = (time_fraction - midpoints[hi - 1]) / (midpoints[hi] - midpoints[hi - 1]);
    std::vector<double> w(sc.feature_dim);
    for (std::size_t i = 0; i < sc.feature_dim; ++i)
        w[i] = (1.0 - t) * sc.segments[hi - 1].weights[i] + t * sc.segments[hi].weights[i];
    return w;
}

double interpolated_sigma(const DriftScenario& sc, double time_fraction) {
    std::vector<double> midpoints;
    double acc = 0.0;
    for (const DriftSegment& seg : sc.segments) {
        midpoints.push_back(acc + 0.5 * seg.fraction);
        acc += seg.fraction;
    }
    if (time_fraction <= midpoints.front()) return sc.segments.front().noise_sigma;
    if (time_fraction >= midpoints.back()) return sc.segments.back().noise_sigma;
    std::size_t hi = 1;
    while (midpoints[hi] < time_fraction) ++hi;
    const double t = (time_fraction - midpoints[hi - 1]) / (midpoints[hi] - midpoints[hi - 1]);
    return (1.0 - t) * sc.segments[hi - 1].noise_sigma + t * sc.segments[hi].noise_sigma;
}

}  // namespace

void validate(const DriftScenario& scenario) {
    if (scenario.segments.empty()) throw std::invalid_argument("scenario: no segments");
    if (scenario.feature_dim == 0) throw std::invalid_argument("scenario: feature_dim must be >= 1");
    if (scenario.n_rows < 10 * scenario.segments.size())
        throw std::invalid_argument("scenario: n_rows must be >= 10 * segment count");
    double total = 0.0;
    for (const DriftSegment& seg : scenario.segments) {
        if (seg.fraction <= 0.0) throw std::invalid_argument("scenario: segment fraction must be > 0");
        if (seg.noise_sigma < 0.0) throw std::invalid_argument("scenario: noise_sigma must be >= 0");
        if (seg.weights.size() != scenario.feature_dim)
            throw std::invalid_argument("scenario: segment weight length != feature_dim");
        total += seg.fraction;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("scenario: segment fractions must sum to 1");
}

TimeSeriesDataset generate(const DriftScenario& scenario) {
    validate(scenario);
    const std::size_t n = scenario.n_rows;
    const std::size_t dim = scenario.feature_dim;
    SeededRng rng(scenario.seed);

    // Segment start offsets in rows.
    std::vector<std::size_t> seg_start;
    double acc = 0.0;
    for (const DriftSegment& seg : scenario.segments) {
        seg_start.push_back(static_cast<std::size_t>(std::floor(acc * static_cast<double>(n) + 0.5)));
        acc += seg.fraction;
    }

    TimeSeriesDataset ds;
    ds.task = scenario.task;
    ds.feature_dim = dim;
    ds.timestamps.resize(n);
    ds.labels.resize(n);
    ds.features = Matrix(n, dim);

    std::size_t active = 0;
    for (std::size_t r = 0; r < n; ++r) {
        ds.timestamps[r] = static_cast<double>(r);
        for (std::size_t c = 0; c < dim; ++c) ds.features(r, c) = rng.uniform(-1.0, 1.0);

        std::vector<double> w;
        double sigma = 0.0;
        if (scenario.drift_kind == DriftKind::piecewise) {
            while (active + 1 < scenario.segments.size() && r >= seg_start[active + 1]) ++active;
            w = scenario.segments[active].weights;
            sigma = scenario.segments[active].noise_sigma;
        } else {
            const double tf = (static_cast<double>(r) + 0.5) / static_cast<double>(n);
            w = interpolated_weights(scenario, tf);
            sigma = interpolated_sigma(scenario, tf);
        }

        double signal = 0.0;
        for (std::size_t c = 0; c < dim; ++c) signal += w[c] * ds.features(r, c);
        const double noise = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
        if (scenario.task == Task::regression)
            ds.labels[r] = signal + noise;
        else
            ds.labels[r] = (signal + noise) > 0.0 ? 1.0 : 0.0;
    }
    finalize_rows(ds);
    return ds;
}

TrainTestSplit split_train_test(const TimeSeriesDataset& dataset, double test_fraction,
                                std::size_t n_test_folds) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split_train_test: test_fraction must be in (0,1)");
    if (n_test_folds < 1) throw std::invalid_argument("split_train_test: need >= 1 test fold");
    const std::size_t n = dataset.size();
    const auto n_test = static_cast<std::size_t>(
        std::floor(test_fraction * static_cast<double>(n) + 0.5));
    if (n_test < n_test_folds)
        throw std::invalid_argument("split_train_test: a test fold would be empty");
    if (n_test >= n) throw std::invalid_argument("split_train_test: no training rows left");

    const std::size_t n_train = n - n_test;
    std::vector<std::size_t> idx(n_train);
    for (std::size_t i = 0; i < n_train; ++i) idx[i] = i;

    TrainTestSplit split;
    split.train = dataset.subset(idx);

    const std::size_t base = n_test / n_test_folds;
    const std::size_t extra = n_test % n_test_folds;
    std::size_t pos = n_train;
    for (std::size_t f = 0; f < n_test_folds; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        std::vector<std::size_t> fold_idx(len);
        for (std::size_t i = 0; i < len; ++i) fold_idx[i] = pos + i;
        split.test_folds.push_back(dataset.subset(fold_idx));
        pos += len;
    }
    return split;
}

DriftScenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }

    DriftScenario sc;
    try {
        const std::string task = j.value("task", "regression");
        if (task == "regression")
            sc.task = Task::regression;
        else if (task == "binary_classification")
            sc.task = Task::binary_classification;
        else
            throw ConfigError(path + ": unknown task " + task);
        sc.n_rows = j.at("n_rows").get<std::size_t>();
        sc.feature_dim = j.at("feature_dim").get<std::size_t>();
        const std::string kind = j.value("drift_kind", "piecewise");
        if (kind == "piecewise")
            sc.drift_kind = DriftKind::piecewise;
        else if (kind == "linear_interp")
            sc.drift_kind = DriftKind::linear_interp;
        else
            throw ConfigError(path + ": unknown drift_kind " + kind);
        sc.seed = j.value("seed", std::uint64_t{0});
        for (const auto& seg : j.at("segments")) {
            DriftSegment s;
            s.fraction = seg.at("fraction").get<double>();
            s.weights = seg.at("weights").get<std::vector<double>>();
            s.noise_sigma = seg.value("noise_sigma", 0.0);
            sc.segments.push_back(std::move(s));
        }
        validate(sc);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return sc;
}

void save_scenario(const DriftScenario& scenario, const std::string& path) {
    nlohmann::json j;
    j["task"] = scenario.task == Task::regression ? "regression" : "binary_classification";
    j["n_rows"] = scenario.n_rows;
    j["feature_dim"] = scenario.feature_dim;
    j["drift_kind"] = scenario.drift_kind == DriftKind::piecewise ? "piecewise" : "linear_interp";
    j["seed"] = scenario.seed;
    j["segments"] = nlohmann::json::array();
    for (const DriftSegment& seg : scenario.segments) {
        nlohmann::json s;
        s["fraction"] = seg.fraction;
        s["weights"] = seg.weights;
        s["noise_sigma"] = seg.noise_sigma;
        j["segments"].push_back(std::move(s));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace lexitune
