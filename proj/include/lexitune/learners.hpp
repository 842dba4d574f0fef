#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lexitune/dataset.hpp"
#include "lexitune/kernels.hpp"
#include "lexitune/search_space.hpp"

namespace lexitune {

enum class LearnerFamily { ridge, knn, boosted_stumps };
enum class LossMetric { mse, rmse, zero_one };

LearnerFamily learner_family_from_string(const std::string& s);
LossMetric loss_metric_from_string(const std::string& s);

// Learner family plus fixed hyperparameter overrides. A tunable named in the
// search space is read from the configuration; otherwise the fixed override
// applies; otherwise the family default.
//
// Tunables per family:
//   ridge:          lambda >= 0, degree in {1,2,3} (per-feature powers)
//   knn:            k >= 1, distance in {euclidean, manhattan}
//   boosted_stumps: n_estimators >= 1, learning_rate in (0,1],
//                   min_samples_leaf >= 1
struct LearnerSpec {
    LearnerFamily family = LearnerFamily::ridge;
    std::map<std::string, ParamValue> fixed;
};

struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;
};

// Trained model. Exactly one family's fields are meaningful; predict is a
// pure function of (model, features).
struct Model {
    LearnerFamily family = LearnerFamily::ridge;
    Task task = Task::regression;

    // ridge: raw-space weights over degree-expanded features, plus intercept
    std::size_t degree = 1;
    std::vector<double> weights;
    double intercept = 0.0;

    // knn
    std::size_t k = 1;
    Distance distance = Distance::euclidean;
    Matrix train_features;
    std::vector<double> train_labels;

    // boosted stumps
    double base_score = 0.0;  // raw mean (regression) or log-odds (classification)
    double learning_rate = 0.1;
    std::vector<Stump> stumps;
};

Model train(const LearnerSpec& spec, const SearchSpace& space, const Configuration& config,
            const TimeSeriesDataset& data);

// Regression: predicted value. Classification: score in [0,1]; the zero_one
// metric thresholds it at 0.5.
double predict(const Model& model, std::span<const double> features);
std::vector<double> predict_batch(const Model& model, const Matrix& features);

double loss(const Model& model, const TimeSeriesDataset& data, LossMetric metric);

// Core ridge normal-equation solve on an explicit design matrix:
// (XᵀX + lambda * P) w = Xᵀy where P is the identity, except P(0,0) = 0 when
// first_col_is_intercept so the intercept stays unpenalized. Falls back to a
// pseudo-inverse least-squares solution when the system is singular.
std::vector<double> ridge_normal_solve(const Matrix& x, std::span<const double> y,
                                       double lambda, bool first_col_is_intercept);

// Count of train() calls since the last reset; used by tests asserting the
// holdout-vs-cv training cost contract.
std::uint64_t training_run_count();
void reset_training_run_count();

}  // namespace lexitune
