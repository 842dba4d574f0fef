#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lexitune/kernels.hpp"

namespace lexitune {

enum class Task { regression, binary_classification };

// Time-indexed supervised dataset. Rows are kept sorted non-decreasing by
// timestamp (stable on the original row order). `origin` carries each row's
// position in the dataset it was first loaded or generated in, so pipeline
// stages can assert that tuning never touches test rows.
struct TimeSeriesDataset {
    Task task = Task::regression;
    std::size_t feature_dim = 0;
    std::vector<double> timestamps;
    Matrix features;              // n x feature_dim
    std::vector<double> labels;
    std::vector<std::size_t> origin;

    std::size_t size() const { return timestamps.size(); }
    bool empty() const { return timestamps.empty(); }

    // New dataset containing the given rows, in the given order.
    TimeSeriesDataset subset(const std::vector<std::size_t>& indices) const;
};

// Sorts rows by timestamp (stable) and fills origin. Call after building a
// dataset by hand; load_csv and the generators do it themselves.
void finalize_rows(TimeSeriesDataset& ds);

// CSV with a header line. Column `timestamp` is required and numeric; the
// label column (default "label") is required; every remaining column is a
// real feature, in header order. A malformed row is a hard error reporting
// its 1-based line number.
TimeSeriesDataset load_csv(const std::string& path, Task task,
                           const std::string& label_column = "label");

void write_csv(const TimeSeriesDataset& ds, const std::string& path);

}  // namespace lexitune
