#include "lexitune/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

namespace lexitune {

namespace {

void check_losses(const FoldLosses& losses) {
    if (losses.empty()) throw std::invalid_argument("aggregate: empty fold losses");
    for (double v : losses) {
        if (!std::isfinite(v))
            throw std::runtime_error("fold loss is not finite; aborting trial");
        if (v < 0.0)
            throw std::runtime_error("fold loss is negative; objectives require losses >= 0");
    }
}

}  // namespace

ObjectiveVector aggregate(const FoldLosses& fold_losses, const ObjectiveMode& mode) {
    check_losses(fold_losses);
    double sum = 0.0;
    double worst = 0.0;
    for (double v : fold_losses) {
        sum += v;
        worst = std::max(worst, v);
    }
    const double avg = sum / static_cast<double>(fold_losses.size());
    switch (mode.kind) {
        case ObjectiveModeKind::lexi_avg_then_worst:
            return {avg, worst};
        case ObjectiveModeKind::lexi_worst_then_avg:
            return {worst, avg};
        case ObjectiveModeKind::single_avg:
            return {avg};
        case ObjectiveModeKind::single_worst:
            return {worst};
        case ObjectiveModeKind::weighted:
            return {(1.0 - mode.weight_lambda) * avg + mode.weight_lambda * worst};
    }
    throw std::logic_error("aggregate: unreachable");
}

FoldLosses evaluate_config(const Configuration& config, const TimeSeriesDataset& dataset,
                           const FoldPlan& plan, const LearnerSpec& learner,
                           const SearchSpace& space, LossMetric metric) {
    if (plan.n_rows != dataset.size())
        throw std::invalid_argument("evaluate_config: plan was built for a different dataset");

    FoldLosses losses(plan.k, 0.0);
    if (plan.strategy == FoldStrategy::holdout) {
        const FoldSplit split = holdout_split(plan);
        const TimeSeriesDataset train_ds = dataset.subset(split.train_indices);
        const Model model = train(learner, space, config, train_ds);
        for (std::size_t f = 0; f < plan.k; ++f) {
            const TimeSeriesDataset val_ds = dataset.subset(split.val_indices[f]);
            losses[f] = loss(model, val_ds, metric);
        }
    } else {
        std::vector<std::exception_ptr> errors(plan.k);
#pragma omp parallel for schedule(static)
        for (std::int64_t f = 0; f < static_cast<std::int64_t>(plan.k); ++f) {
            const auto fi = static_cast<std::size_t>(f);
            try {
                const FoldSplit split = cv_split(plan, fi + 1);
                const TimeSeriesDataset train_ds = dataset.subset(split.train_indices);
                const TimeSeriesDataset val_ds = dataset.subset(split.val_indices[0]);
                const Model model = train(learner, space, config, train_ds);
                losses[fi] = loss(model, val_ds, metric);
            } catch (...) {
                errors[fi] = std::current_exception();
            }
        }
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }

    check_losses(losses);
    return losses;
}

}  // namespace lexitune
