#include <doctest.h>

#include <cmath>
#include <fstream>

#include "lexitune/drift_gen.hpp"

using namespace lexitune;

namespace {

DriftScenario three_segment_regression(double sigma, std::uint64_t seed) {
    DriftScenario sc;
    sc.task = Task::regression;
    sc.n_rows = 3000;
    sc.feature_dim = 1;
    sc.drift_kind = DriftKind::piecewise;
    sc.seed = seed;
    sc.segments = {{1.0 / 3.0, {1.0}, sigma},
                   {1.0 / 3.0, {2.0}, sigma},
                   {1.0 / 3.0, {4.0}, sigma}};
    return sc;
}

// No-intercept least squares slope over rows [lo, hi).
double ols_slope(const TimeSeriesDataset& ds, std::size_t lo, std::size_t hi) {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sxy += ds.features(i, 0) * ds.labels[i];
        sxx += ds.features(i, 0) * ds.features(i, 0);
    }
    return sxy / sxx;
}

double segment_fit_mse(const TimeSeriesDataset& ds, std::size_t lo, std::size_t hi,
                       double slope) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double e = ds.labels[i] - slope * ds.features(i, 0);
        acc += e * e;
    }
    return acc / static_cast<double>(hi - lo);
}

}  // namespace

TEST_CASE("noiseless single-segment labels are exactly linear") {
    DriftScenario sc;
    sc.n_rows = 200;
    sc.feature_dim = 1;
    sc.seed = 4;
    sc.segments = {{1.0, {1.0}, 0.0}};
    const TimeSeriesDataset ds = generate(sc);
    REQUIRE(ds.size() == 200);
    for (std::size_t i = 0; i < ds.size(); ++i)
        CHECK(ds.labels[i] == doctest::Approx(ds.features(i, 0)).epsilon(1e-12));
    const double slope = ols_slope(ds, 0, ds.size());
    CHECK(segment_fit_mse(ds, 0, ds.size(), slope) < 1e-20);
}

TEST_CASE("per-segment least squares recovers the drifting weights") {
    const TimeSeriesDataset ds = generate(three_segment_regression(0.1, 9));
    const double expected[] = {1.0, 2.0, 4.0};
    for (int s = 0; s < 3; ++s) {
        const std::size_t lo = 1000 * s, hi = 1000 * (s + 1);
        CHECK(std::fabs(ols_slope(ds, lo, hi) - expected[s]) < 0.05);
    }
}

TEST_CASE("generated datasets are deterministic and time-ordered") {
    const DriftScenario sc = three_segment_regression(0.2, 12);
    const TimeSeriesDataset a = generate(sc);
    const TimeSeriesDataset b = generate(sc);
    CHECK(a.labels == b.labels);
    CHECK(a.features.data == b.features.data);
    CHECK(a.size() == sc.n_rows);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.timestamps[i] > a.timestamps[i - 1]);

    DriftScenario other = sc;
    other.seed = 13;
    const TimeSeriesDataset c = generate(other);
    CHECK(a.labels != c.labels);
}

TEST_CASE("a global fit is worse than per-segment fits under piecewise drift") {
    const TimeSeriesDataset ds = generate(three_segment_regression(0.05, 21));
    const double global = ols_slope(ds, 0, ds.size());
    const double global_mse = segment_fit_mse(ds, 0, ds.size(), global);
    double per_segment_mse = 0.0;
    for (int s = 0; s < 3; ++s) {
        const std::size_t lo = 1000 * s, hi = 1000 * (s + 1);
        per_segment_mse += segment_fit_mse(ds, lo, hi, ols_slope(ds, lo, hi)) / 3.0;
    }
    CHECK(global_mse > per_segment_mse);
}

TEST_CASE("linear_interp drifts the slope gradually between segment anchors") {
    DriftScenario sc;
    sc.n_rows = 4000;
    sc.feature_dim = 1;
    sc.drift_kind = DriftKind::linear_interp;
    sc.seed = 5;
    sc.segments = {{0.5, {0.0}, 0.01}, {0.5, {2.0}, 0.01}};
    const TimeSeriesDataset ds = generate(sc);
    // Quarter slopes should increase monotonically from ~0 to ~2.
    double prev = -1.0;
    for (int q = 0; q < 4; ++q) {
        const double slope = ols_slope(ds, 1000 * q, 1000 * (q + 1));
        CHECK(slope > prev);
        prev = slope;
    }
    CHECK(ols_slope(ds, 0, 500) == doctest::Approx(0.0).epsilon(0.05));
    CHECK(ols_slope(ds, 3500, 4000) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("classification scenarios emit 0/1 labels around the drifting boundary") {
    DriftScenario sc;
    sc.task = Task::binary_classification;
    sc.n_rows = 500;
    sc.feature_dim = 2;
    sc.seed = 6;
    sc.segments = {{1.0, {1.0, -1.0}, 0.05}};
    const TimeSeriesDataset ds = generate(sc);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK((ds.labels[i] == 0.0 || ds.labels[i] == 1.0));
        ones += ds.labels[i] == 1.0;
        // With small margin noise, labels mostly follow the boundary sign.
        const double margin = ds.features(i, 0) - ds.features(i, 1);
        if (std::fabs(margin) > 0.3) CHECK(ds.labels[i] == (margin > 0.0 ? 1.0 : 0.0));
    }
    CHECK(ones > 100);
    CHECK(ones < 400);
}

TEST_CASE("scenario validation rejects malformed inputs") {
    DriftScenario sc = three_segment_regression(0.1, 0);
    sc.segments[0].fraction = 0.5;  // fractions no longer sum to 1
    CHECK_THROWS(generate(sc));

    sc = three_segment_regression(0.1, 0);
    sc.segments[1].noise_sigma = -0.1;
    CHECK_THROWS(generate(sc));

    sc = three_segment_regression(0.1, 0);
    sc.n_rows = 20;  // under 10 rows per segment
    CHECK_THROWS(generate(sc));

    sc = three_segment_regression(0.1, 0);
    sc.segments[2].weights = {1.0, 2.0};  // wrong dimension
    CHECK_THROWS(generate(sc));
}

TEST_CASE("split_train_test partitions the tail into chronological folds") {
    DriftScenario sc;
    sc.n_rows = 100;
    sc.feature_dim = 1;
    sc.seed = 7;
    sc.segments = {{1.0, {1.0}, 0.1}};
    const TimeSeriesDataset ds = generate(sc);

    const TrainTestSplit split = split_train_test(ds, 0.3, 3);
    CHECK(split.train.size() == 70);
    REQUIRE(split.test_folds.size() == 3);
    double max_train_ts = 0.0;
    for (double t : split.train.timestamps) max_train_ts = std::max(max_train_ts, t);
    double prev_max = max_train_ts;
    for (const TimeSeriesDataset& fold : split.test_folds) {
        CHECK(fold.size() == 10);
        for (double t : fold.timestamps) CHECK(t > max_train_ts);
        CHECK(fold.timestamps.front() > prev_max);
        prev_max = fold.timestamps.back();
    }
    CHECK(split.train.timestamps.back() == doctest::Approx(69.0));
    CHECK(split.test_folds[0].timestamps.front() == doctest::Approx(70.0));
    CHECK(split.test_folds[2].timestamps.back() == doctest::Approx(99.0));

    CHECK_THROWS(split_train_test(ds, 0.01, 3));  // folds would be empty
    CHECK_THROWS(split_train_test(ds, 0.3, 0));
    CHECK_THROWS(split_train_test(ds, 1.5, 3));
}

TEST_CASE("scenario JSON round-trips") {
    const DriftScenario sc = three_segment_regression(0.25, 99);
    const std::string path = "/tmp/lexitune_scenario.json";
    save_scenario(sc, path);
    const DriftScenario back = load_scenario(path);
    CHECK(back.n_rows == sc.n_rows);
    CHECK(back.feature_dim == sc.feature_dim);
    CHECK(back.seed == sc.seed);
    REQUIRE(back.segments.size() == sc.segments.size());
    for (std::size_t i = 0; i < sc.segments.size(); ++i) {
        CHECK(back.segments[i].fraction == doctest::Approx(sc.segments[i].fraction));
        CHECK(back.segments[i].weights == sc.segments[i].weights);
        CHECK(back.segments[i].noise_sigma == doctest::Approx(sc.segments[i].noise_sigma));
    }
    // Generating from the reloaded scenario gives the same dataset.
    CHECK(generate(back).labels == generate(sc).labels);

    const std::string bad = "/tmp/lexitune_bad_scenario.json";
    {
        std::ofstream out(bad);
        out << "{\"n_rows\": 100}";
    }
    CHECK_THROWS(load_scenario(bad));
}
