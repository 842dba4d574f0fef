#include "lexitune/learners.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lexitune {

namespace {

std::atomic<std::uint64_t> g_training_runs{0};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_prob(double p) { return std::min(1.0 - 1e-6, std::max(1e-6, p)); }

// Tunable lookup order: search-space configuration, fixed override, default.
class TunableReader {
public:
    TunableReader(const LearnerSpec& spec, const SearchSpace& space, const Configuration& config)
        : spec_(spec), space_(space), config_(config) {}

    double get_double(const std::string& name, double fallback) const {
        if (space_.has(name)) return config_.get_double(space_, name);
        if (auto it = spec_.fixed.find(name); it != spec_.fixed.end()) {
            if (const double* d = std::get_if<double>(&it->second)) return *d;
            if (const std::int64_t* i = std::get_if<std::int64_t>(&it->second))
                return static_cast<double>(*i);
        }
        return fallback;
    }

    std::int64_t get_int(const std::string& name, std::int64_t fallback) const {
        if (space_.has(name)) return config_.get_int(space_, name);
        if (auto it = spec_.fixed.find(name); it != spec_.fixed.end())
            if (const std::int64_t* i = std::get_if<std::int64_t>(&it->second)) return *i;
        return fallback;
    }

    std::string get_choice(const std::string& name, const std::string& fallback) const {
        if (space_.has(name)) return config_.get_choice(space_, name);
        if (auto it = spec_.fixed.find(name); it != spec_.fixed.end())
            if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
        return fallback;
    }

private:
    const LearnerSpec& spec_;
    const SearchSpace& space_;
    const Configuration& config_;
};

Matrix expand_features(const Matrix& x, std::size_t degree) {
    if (degree == 1) return x;
    Matrix out(x.rows, x.cols * degree);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c) {
            double p = x(r, c);
            for (std::size_t d = 0; d < degree; ++d) {
                out(r, c * degree + d) = p;
                p *= x(r, c);
            }
        }
    return out;
}

Model train_ridge(const TunableReader& t, const TimeSeriesDataset& data) {
    const double lambda = t.get_double("lambda", 1.0);
    const auto degree = static_cast<std::size_t>(t.get_int("degree", 1));
    if (lambda < 0.0) throw std::invalid_argument("ridge: lambda must be >= 0");
    if (degree < 1 || degree > 3) throw std::invalid_argument("ridge: degree must be in {1,2,3}");

    const Matrix expanded = expand_features(data.features, degree);
    const std::size_t dim = expanded.cols;
    const std::size_t n = expanded.rows;

    // Standardize with training statistics only; constant columns are merely
    // centred.
    std::vector<double> mean(dim, 0.0), scale(dim, 1.0);
    for (std::size_t c = 0; c < dim; ++c) {
        double m = 0.0;
        for (std::size_t r = 0; r < n; ++r) m += expanded(r, c);
        m /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = expanded(r, c) - m;
            var += d * d;
        }
        var /= static_cast<double>(n);
        mean[c] = m;
        scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    Matrix design(n, dim + 1);
    for (std::size_t r = 0; r < n; ++r) {
        design(r, 0) = 1.0;
        for (std::size_t c = 0; c < dim; ++c)
            design(r, c + 1) = (expanded(r, c) - mean[c]) / scale[c];
    }

    const std::vector<double> w = ridge_normal_solve(design, data.labels, lambda, true);

    Model model;
    model.family = LearnerFamily::ridge;
    model.task = data.task;
    model.degree = degree;
    model.weights.resize(dim);
    model.intercept = w[0];
    for (std::size_t c = 0; c < dim; ++c) {
        model.weights[c] = w[c + 1] / scale[c];
        model.intercept -= w[c + 1] * mean[c] / scale[c];
    }
    return model;
}

Model train_knn(const TunableReader& t, const TimeSeriesDataset& data) {
    const std::int64_t k = t.get_int("k", 5);
    if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
    const std::string dist = t.get_choice("distance", "euclidean");

    Model model;
    model.family = LearnerFamily::knn;
    model.task = data.task;
    model.k = static_cast<std::size_t>(k);
    model.distance = dist == "manhattan" ? Distance::manhattan : Distance::euclidean;
    if (dist != "euclidean" && dist != "manhattan")
        throw std::invalid_argument("knn: unknown distance " + dist);
    model.train_features = data.features;
    model.train_labels = data.labels;
    return model;
}

Model train_stumps(const TunableReader& t, const TimeSeriesDataset& data) {
    const std::int64_t n_estimators = t.get_int("n_estimators", 50);
    const double learning_rate = t.get_double("learning_rate", 0.1);
    const std::int64_t min_leaf = t.get_int("min_samples_leaf", 1);
    if (n_estimators < 0) throw std::invalid_argument("boosted_stumps: n_estimators must be >= 0");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
        throw std::invalid_argument("boosted_stumps: learning_rate must be in (0,1]");
    if (min_leaf < 1) throw std::invalid_argument("boosted_stumps: min_samples_leaf must be >= 1");

    const std::size_t n = data.size();
    Model model;
    model.family = LearnerFamily::boosted_stumps;
    model.task = data.task;
    model.learning_rate = learning_rate;

    const double label_mean = kernels::sum(data.labels) / static_cast<double>(n);
    const bool classify = data.task == Task::binary_classification;
    model.base_score = classify ? std::log(clamp_prob(label_mean) / (1.0 - clamp_prob(label_mean)))
                                : label_mean;

    std::vector<double> raw(n, model.base_score);
    std::vector<double> residual(n);
    for (std::int64_t stage = 0; stage < n_estimators; ++stage) {
        for (std::size_t i = 0; i < n; ++i) {
            const double pred = classify ? clamp_prob(sigmoid(raw[i])) : raw[i];
            residual[i] = data.labels[i] - pred;
        }
        StumpSplit split = kernels::best_split(data.features, residual,
                                               static_cast<std::size_t>(min_leaf));
        Stump stump;
        if (split.valid) {
            stump.feature = split.feature;
            stump.threshold = split.threshold;
            stump.left_value = split.left_value;
            stump.right_value = split.right_value;
        } else {
            // No admissible split: constant stump on the mean residual.
            const double m = kernels::sum(residual) / static_cast<double>(n);
            stump.feature = 0;
            stump.threshold = -std::numeric_limits<double>::infinity();
            stump.left_value = m;
            stump.right_value = m;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double v = data.features(i, stump.feature) < stump.threshold
                                 ? stump.left_value
                                 : stump.right_value;
            raw[i] += learning_rate * v;
        }
        model.stumps.push_back(stump);
    }
    return model;
}

}  // namespace

LearnerFamily learner_family_from_string(const std::string& s) {
    if (s == "ridge") return LearnerFamily::ridge;
    if (s == "knn") return LearnerFamily::knn;
    if (s == "boosted_stumps") return LearnerFamily::boosted_stumps;
    throw std::invalid_argument("unknown learner family: " + s);
}

LossMetric loss_metric_from_string(const std::string& s) {
    if (s == "mse") return LossMetric::mse;
    if (s == "rmse") return LossMetric::rmse;
    if (s == "zero_one") return LossMetric::zero_one;
    throw std::invalid_argument("unknown loss metric: " + s);
}

std::vector<double> ridge_normal_solve(const Matrix& x, std::span<const double> y,
                                       double lambda, bool first_col_is_intercept) {
    if (x.rows == 0 || x.rows != y.size())
        throw std::invalid_argument("ridge_normal_solve: shape mismatch");
    Matrix a = kernels::gram(x);
    for (std::size_t c = 0; c < x.cols; ++c) {
        if (first_col_is_intercept && c == 0) continue;
        a(c, c) += lambda;
    }
    const std::vector<double> b = kernels::mat_t_vec(x, y);
    return kernels::solve_spd(a, b);
}

Model train(const LearnerSpec& spec, const SearchSpace& space, const Configuration& config,
            const TimeSeriesDataset& data) {
    if (data.empty()) throw std::invalid_argument("train: empty dataset");
    validate(space, config);
    g_training_runs.fetch_add(1, std::memory_order_relaxed);
    const TunableReader reader(spec, space, config);
    switch (spec.family) {
        case LearnerFamily::ridge:
            return train_ridge(reader, data);
        case LearnerFamily::knn:
            return train_knn(reader, data);
        case LearnerFamily::boosted_stumps:
            return train_stumps(reader, data);
    }
    throw std::logic_error("train: unreachable");
}

double predict(const Model& model, std::span<const double> features) {
    switch (model.family) {
        case LearnerFamily::ridge: {
            const std::size_t base_dim = model.weights.size() / model.degree;
            if (features.size() != base_dim)
                throw std::invalid_argument("predict: feature dimension mismatch");
            double acc = model.intercept;
            for (std::size_t c = 0; c < base_dim; ++c) {
                double p = features[c];
                for (std::size_t d = 0; d < model.degree; ++d) {
                    acc += model.weights[c * model.degree + d] * p;
                    p *= features[c];
                }
            }
            return acc;
        }
        case LearnerFamily::knn: {
            if (features.size() != model.train_features.cols)
                throw std::invalid_argument("predict: feature dimension mismatch");
            Matrix q(1, features.size());
            std::copy(features.begin(), features.end(), q.data.begin());
            return kernels::serial::knn_scores(model.train_features, model.train_labels, q,
                                               model.k, model.distance)[0];
        }
        case LearnerFamily::boosted_stumps: {
            double raw = model.base_score;
            for (const Stump& s : model.stumps) {
                if (s.feature >= features.size())
                    throw std::invalid_argument("predict: feature dimension mismatch");
                raw += model.learning_rate *
                       (features[s.feature] < s.threshold ? s.left_value : s.right_value);
            }
            return model.task == Task::binary_classification ? sigmoid(raw) : raw;
        }
    }
    throw std::logic_error("predict: unreachable");
}

std::vector<double> predict_batch(const Model& model, const Matrix& features) {
    if (model.family == LearnerFamily::knn)
        return kernels::knn_scores(model.train_features, model.train_labels, features, model.k,
                                   model.distance);
    std::vector<double> out(features.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(features.rows); ++r)
        out[static_cast<std::size_t>(r)] =
            predict(model, features.row(static_cast<std::size_t>(r)));
    return out;
}

double loss(const Model& model, const TimeSeriesDataset& data, LossMetric metric) {
    if (data.empty()) throw std::invalid_argument("loss: empty dataset");
    const std::vector<double> pred = predict_batch(model, data.features);
    const std::size_t n = data.size();
    switch (metric) {
        case LossMetric::mse:
            return kernels::sum_sq_diff(pred, data.labels) / static_cast<double>(n);
        case LossMetric::rmse:
            return std::sqrt(kernels::sum_sq_diff(pred, data.labels) / static_cast<double>(n));
        case LossMetric::zero_one: {
            std::size_t wrong = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool predicted = pred[i] >= 0.5;
                const bool actual = data.labels[i] >= 0.5;
                if (predicted != actual) ++wrong;
            }
            return static_cast<double>(wrong) / static_cast<double>(n);
        }
    }
    throw std::logic_error("loss: unreachable");
}

std::uint64_t training_run_count() { return g_training_runs.load(std::memory_order_relaxed); }
void reset_training_run_count() { g_training_runs.store(0, std::memory_order_relaxed); }

}  // namespace lexitune
