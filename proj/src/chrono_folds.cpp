#include "lexitune/chrono_folds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lexitune/rng.hpp"

namespace lexitune {

namespace {

std::size_t val_tail_size(std::size_t segment_size, double fraction) {
    return static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(segment_size) - 1e-12));
}

}  // namespace

FoldPlan plan_folds(const TimeSeriesDataset& dataset, std::size_t k, FoldStrategy strategy,
                    double holdout_fraction, Chronology chronology, std::uint64_t shuffle_seed,
                    const std::optional<std::vector<double>>& boundaries) {
    const std::size_t n = dataset.size();
    if (k < 2) throw std::invalid_argument("plan_folds: K must be >= 2");
    if (n < 2 * k)
        throw std::invalid_argument("plan_folds: need at least 2K rows, got " +
                                    std::to_string(n));
    if (strategy == FoldStrategy::holdout &&
        !(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw std::invalid_argument("plan_folds: holdout_fraction must be in (0,1)");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (chronology == Chronology::shuffled) {
        SeededRng rng(shuffle_seed);
        for (std::size_t i = n; i > 1; --i) {
            const auto j = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(order[i - 1], order[j]);
        }
    }

    FoldPlan plan;
    plan.strategy = strategy;
    plan.k = k;
    plan.chronology = chronology;
    plan.holdout_fraction = holdout_fraction;
    plan.n_rows = n;
    plan.segments.resize(k);

    if (boundaries) {
        if (chronology == Chronology::shuffled)
            throw std::invalid_argument("plan_folds: explicit boundaries require chronological order");
        if (boundaries->size() != k - 1)
            throw std::invalid_argument("plan_folds: expected K-1 interior boundaries");
        for (std::size_t i = 1; i < boundaries->size(); ++i)
            if (!((*boundaries)[i - 1] < (*boundaries)[i]))
                throw std::invalid_argument("plan_folds: boundaries must be strictly increasing");
        for (std::size_t i = 0; i < n; ++i) {
            const double t = dataset.timestamps[i];
            std::size_t seg = 0;
            while (seg < k - 1 && t >= (*boundaries)[seg]) ++seg;
            plan.segments[seg].push_back(i);
        }
    } else {
        const std::size_t base = n / k;
        const std::size_t extra = n % k;
        std::size_t pos = 0;
        for (std::size_t s = 0; s < k; ++s) {
            const std::size_t len = base + (s < extra ? 1 : 0);
            plan.segments[s].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                    order.begin() + static_cast<std::ptrdiff_t>(pos + len));
            pos += len;
        }
    }

    for (std::size_t s = 0; s < k; ++s) {
        if (plan.segments[s].empty())
            throw std::invalid_argument("plan_folds: segment " + std::to_string(s + 1) +
                                        " is empty");
        if (strategy == FoldStrategy::holdout) {
            const std::size_t v = val_tail_size(plan.segments[s].size(), holdout_fraction);
            if (v == 0 || v >= plan.segments[s].size())
                throw std::invalid_argument(
                    "plan_folds: segment " + std::to_string(s + 1) +
                    " cannot keep both train and validation rows at this holdout fraction");
        }
    }

    if (chronology == Chronology::chronological) {
        plan.boundaries.reserve(k + 1);
        plan.boundaries.push_back(dataset.timestamps[plan.segments.front().front()]);
        for (std::size_t s = 1; s < k; ++s)
            plan.boundaries.push_back(dataset.timestamps[plan.segments[s].front()]);
        plan.boundaries.push_back(dataset.timestamps[plan.segments.back().back()]);
    }
    return plan;
}

FoldSplit cv_split(const FoldPlan& plan, std::size_t k) {
    if (plan.strategy != FoldStrategy::cv)
        throw std::invalid_argument("cv_split: plan strategy is not cv");
    if (k < 1 || k > plan.k) throw std::invalid_argument("cv_split: fold index out of range");

    FoldSplit split;
    split.val_indices.resize(1);
    split.val_indices[0] = plan.segments[k - 1];
    std::sort(split.val_indices[0].begin(), split.val_indices[0].end());
    for (std::size_t s = 0; s < plan.k; ++s) {
        if (s == k - 1) continue;
        split.train_indices.insert(split.train_indices.end(), plan.segments[s].begin(),
                                   plan.segments[s].end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    return split;
}

FoldSplit holdout_split(const FoldPlan& plan) {
    if (plan.strategy != FoldStrategy::holdout)
        throw std::invalid_argument("holdout_split: plan strategy is not holdout");

    FoldSplit split;
    split.val_indices.resize(plan.k);
    for (std::size_t s = 0; s < plan.k; ++s) {
        const std::vector<std::size_t>& seg = plan.segments[s];
        const std::size_t v = val_tail_size(seg.size(), plan.holdout_fraction);
        if (v == 0 || v >= seg.size())
            throw std::invalid_argument("holdout_split: validation tail would swallow segment " +
                                        std::to_string(s + 1));
        const std::size_t head = seg.size() - v;
        split.train_indices.insert(split.train_indices.end(), seg.begin(),
                                   seg.begin() + static_cast<std::ptrdiff_t>(head));
        split.val_indices[s].assign(seg.begin() + static_cast<std::ptrdiff_t>(head), seg.end());
        std::sort(split.val_indices[s].begin(), split.val_indices[s].end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    return split;
}

}  // namespace lexitune
