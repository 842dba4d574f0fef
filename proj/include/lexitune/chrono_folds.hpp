#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lexitune/dataset.hpp"

namespace lexitune {

enum class FoldStrategy { cv, holdout };
enum class Chronology { chronological, shuffled };

// Segmentation of a dataset into K validation folds. Segments are stored as
// row-index lists; in chronological mode the `boundaries` vector additionally
// records the K+1 time points t_0 < t_1 < ... < t_K delimiting them.
struct FoldPlan {
    FoldStrategy strategy = FoldStrategy::cv;
    std::size_t k = 2;
    Chronology chronology = Chronology::chronological;
    double holdout_fraction = 0.3;
    std::size_t n_rows = 0;
    std::vector<std::vector<std::size_t>> segments;  // K index lists
    std::vector<double> boundaries;                  // chronological mode only
};

// Train/validation view. Under cv this is the per-iteration view for one
// fold; under holdout the K validation tails share one training set.
struct FoldSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::vector<std::size_t>> val_indices;
};

// Splits the dataset into K segments of equal row count (+-1). With
// chronology = shuffled the rows are permuted by the seeded RNG before
// segmentation (ablation mode). An explicit interior boundary list
// (t_1..t_{K-1}) overrides equal-count segmentation; every segment must stay
// non-empty.
FoldPlan plan_folds(const TimeSeriesDataset& dataset, std::size_t k, FoldStrategy strategy,
                    double holdout_fraction, Chronology chronology,
                    std::uint64_t shuffle_seed = 0,
                    const std::optional<std::vector<double>>& boundaries = std::nullopt);

// Cross-validation view for fold k (1-based): val = segment k, train = all
// other rows.
FoldSplit cv_split(const FoldPlan& plan, std::size_t k);

// Holdout view: within each segment the chronologically last
// ceil(fraction * segment_size) rows are that fold's validation set; the
// remaining rows of all segments form the single training set.
FoldSplit holdout_split(const FoldPlan& plan);

}  // namespace lexitune
