#include "lexitune/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lexitune {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, std::size_t line_no, const std::string& col) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw std::runtime_error("CSV line " + std::to_string(line_no) + ": column '" + col +
                                 "': cannot parse '" + s + "' as a number");
    return v;
}

}  // namespace

TimeSeriesDataset TimeSeriesDataset::subset(const std::vector<std::size_t>& indices) const {
    TimeSeriesDataset out;
    out.task = task;
    out.feature_dim = feature_dim;
    out.timestamps.reserve(indices.size());
    out.labels.reserve(indices.size());
    out.origin.reserve(indices.size());
    out.features = Matrix(indices.size(), feature_dim);
    std::size_t r = 0;
    for (std::size_t idx : indices) {
        out.timestamps.push_back(timestamps[idx]);
        out.labels.push_back(labels[idx]);
        out.origin.push_back(origin[idx]);
        for (std::size_t c = 0; c < feature_dim; ++c) out.features(r, c) = features(idx, c);
        ++r;
    }
    return out;
}

void finalize_rows(TimeSeriesDataset& ds) {
    const std::size_t n = ds.size();
    if (n == 0) throw std::runtime_error("dataset is empty");
    if (ds.features.rows != n || ds.labels.size() != n)
        throw std::runtime_error("dataset: inconsistent row counts");
    if (ds.origin.size() != n) {
        ds.origin.resize(n);
        std::iota(ds.origin.begin(), ds.origin.end(), std::size_t{0});
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ds.timestamps[a] < ds.timestamps[b];
    });
    const bool already_sorted = std::is_sorted(order.begin(), order.end());
    if (!already_sorted) ds = ds.subset(order);
}

TimeSeriesDataset load_csv(const std::string& path, Task task, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = split_csv_line(line);

    std::ptrdiff_t ts_col = -1, label_col = -1;
    std::vector<std::size_t> feature_cols;
    std::vector<std::string> feature_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "timestamp") {
            ts_col = static_cast<std::ptrdiff_t>(i);
        } else if (header[i] == label_column) {
            label_col = static_cast<std::ptrdiff_t>(i);
        } else {
            feature_cols.push_back(i);
            feature_names.push_back(header[i]);
        }
    }
    if (ts_col < 0) throw std::runtime_error(path + ": missing required column 'timestamp'");
    if (label_col < 0)
        throw std::runtime_error(path + ": missing label column '" + label_column + "'");
    if (feature_cols.empty()) throw std::runtime_error(path + ": no feature columns");

    std::vector<double> ts, labels, feat;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " cells, got " +
                                     std::to_string(cells.size()));
        ts.push_back(parse_double(cells[static_cast<std::size_t>(ts_col)], line_no, "timestamp"));
        labels.push_back(
            parse_double(cells[static_cast<std::size_t>(label_col)], line_no, label_column));
        for (std::size_t j = 0; j < feature_cols.size(); ++j)
            feat.push_back(parse_double(cells[feature_cols[j]], line_no, feature_names[j]));
    }
    if (ts.empty()) throw std::runtime_error(path + ": no data rows");

    TimeSeriesDataset ds;
    ds.task = task;
    ds.feature_dim = feature_cols.size();
    ds.timestamps = std::move(ts);
    ds.labels = std::move(labels);
    ds.features = Matrix(ds.timestamps.size(), ds.feature_dim);
    ds.features.data = std::move(feat);

    if (task == Task::binary_classification) {
        for (std::size_t i = 0; i < ds.labels.size(); ++i)
            if (ds.labels[i] != 0.0 && ds.labels[i] != 1.0)
                throw std::runtime_error(path + ": classification label must be 0 or 1 (row " +
                                         std::to_string(i + 2) + ")");
    }
    finalize_rows(ds);
    return ds;
}

void write_csv(const TimeSeriesDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    out << "timestamp";
    for (std::size_t c = 0; c < ds.feature_dim; ++c) out << ",f" << c;
    out << ",label\n";
    char buf[64];
    for (std::size_t r = 0; r < ds.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%.17g", ds.timestamps[r]);
        out << buf;
        for (std::size_t c = 0; c < ds.feature_dim; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.features(r, c));
            out << ',' << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.17g", ds.labels[r]);
        out << ',' << buf << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace lexitune
