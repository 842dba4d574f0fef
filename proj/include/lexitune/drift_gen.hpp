#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexitune/dataset.hpp"

namespace lexitune {

enum class DriftKind { piecewise, linear_interp };

// Generative parameters of one time segment. For regression the label is
// weights . x + N(0, noise_sigma); for binary classification the label is
// 1 when weights . x + N(0, noise_sigma) > 0.
struct DriftSegment {
    double fraction = 1.0;          // share of n_rows, fractions sum to 1
    std::vector<double> weights;    // length feature_dim
    double noise_sigma = 0.0;
};

struct DriftScenario {
    Task task = Task::regression;
    std::size_t n_rows = 1000;
    std::size_t feature_dim = 1;
    DriftKind drift_kind = DriftKind::piecewise;
    std::uint64_t seed = 0;
    std::vector<DriftSegment> segments;
};

void validate(const DriftScenario& scenario);

// Timestamps 0..n_rows-1, features i.i.d. uniform on [-1,1]^dim, labels from
// the segment active at each row (piecewise) or from parameters interpolated
// between segment midpoints (linear_interp). Deterministic per seed.
TimeSeriesDataset generate(const DriftScenario& scenario);

// Chronological split: the last round(test_fraction * n) rows form the test
// period, partitioned into n_test_folds consecutive folds of equal size
// (+-1); everything earlier is the training period.
struct TrainTestSplit {
    TimeSeriesDataset train;
    std::vector<TimeSeriesDataset> test_folds;
};

TrainTestSplit split_train_test(const TimeSeriesDataset& dataset, double test_fraction,
                                std::size_t n_test_folds);

DriftScenario load_scenario(const std::string& path);
void save_scenario(const DriftScenario& scenario, const std::string& path);

}  // namespace lexitune
