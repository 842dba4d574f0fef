#pragma once

#include <string>
#include <vector>

#include "lexitune/chrono_folds.hpp"
#include "lexitune/learners.hpp"

namespace lexitune {

// Per-fold validation losses L_1..L_K of one configuration. All entries must
// be finite and non-negative.
using FoldLosses = std::vector<double>;

// Ordered objective list; index 0 carries the highest priority.
using ObjectiveVector = std::vector<double>;

enum class ObjectiveModeKind {
    lexi_avg_then_worst,   // [mean, max]
    lexi_worst_then_avg,   // [max, mean]
    single_avg,            // [mean]
    single_worst,          // [max]
    weighted               // [(1-lambda)*mean + lambda*max]
};

struct ObjectiveMode {
    ObjectiveModeKind kind = ObjectiveModeKind::lexi_avg_then_worst;
    double weight_lambda = 0.01;  // weighted mode only

    std::size_t objective_count() const {
        return (kind == ObjectiveModeKind::lexi_avg_then_worst ||
                kind == ObjectiveModeKind::lexi_worst_then_avg)
                   ? 2
                   : 1;
    }
};

// Collapses fold losses into the mode's objective vector. Rejects empty,
// non-finite, or negative inputs.
ObjectiveVector aggregate(const FoldLosses& fold_losses, const ObjectiveMode& mode);

// Evaluates a configuration under a fold plan. cv trains one model per fold
// (folds may train concurrently; output is assembled in fold order); holdout
// trains a single model and scores it on each validation tail.
FoldLosses evaluate_config(const Configuration& config, const TimeSeriesDataset& dataset,
                           const FoldPlan& plan, const LearnerSpec& learner,
                           const SearchSpace& space, LossMetric metric);

}  // namespace lexitune
