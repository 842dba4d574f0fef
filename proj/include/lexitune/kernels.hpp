#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lexitune {

// Dense row-major matrix. Small helper type shared by the learner kernels;
// not a general linear-algebra library.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data.data() + r * cols, cols);
    }
};

enum class Distance { euclidean, manhattan };

// Result of a single-feature threshold search for a regression stump.
struct StumpSplit {
    bool valid = false;          // false when no admissible split exists
    std::size_t feature = 0;
    double threshold = 0.0;      // rows with x[feature] < threshold go left
    double left_value = 0.0;     // mean target of the left partition
    double right_value = 0.0;
    double sse = 0.0;            // sum of squared errors after the split
};

namespace kernels {

// Fixed chunk length for reduction kernels. Sums are accumulated per chunk
// and the chunk partials are combined in index order, so the result is
// bit-identical for any thread count, including one.
inline constexpr std::size_t kReduceChunk = 2048;

// Serial reference implementations. Arithmetic is identical to the parallel
// kernels below; only the loop scheduling differs. Tests assert bitwise
// equality between the two families.
namespace serial {

Matrix gram(const Matrix& x);                                        // XᵀX
std::vector<double> mat_t_vec(const Matrix& x, std::span<const double> y);  // Xᵀy
std::vector<double> mat_vec(const Matrix& x, std::span<const double> w);    // Xw
double sum(std::span<const double> v);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

// Mean label of the k nearest training rows for every query row. Distance
// ties are broken by lower training-row index.
std::vector<double> knn_scores(const Matrix& train_x, std::span<const double> train_y,
                               const Matrix& queries, std::size_t k, Distance dist);

// Best least-squares stump over all features. Thresholds are midpoints
// between consecutive distinct sorted values; both sides must keep at least
// min_leaf rows. Ties resolve to the lower feature index, then the lower
// threshold.
StumpSplit best_split(const Matrix& x, std::span<const double> target, std::size_t min_leaf);

}  // namespace serial

// OpenMP-parallel kernels (fall back to the same arithmetic serially when
// built without OpenMP).
Matrix gram(const Matrix& x);
std::vector<double> mat_t_vec(const Matrix& x, std::span<const double> y);
std::vector<double> mat_vec(const Matrix& x, std::span<const double> w);
double sum(std::span<const double> v);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);
std::vector<double> knn_scores(const Matrix& train_x, std::span<const double> train_y,
                               const Matrix& queries, std::size_t k, Distance dist);
StumpSplit best_split(const Matrix& x, std::span<const double> target, std::size_t min_leaf);

// Solves the symmetric positive (semi-)definite system A w = b.
// Tries Cholesky first; on a non-positive pivot falls back to an
// eigen-decomposition pseudo-inverse (Jacobi rotations), which yields the
// minimum-norm least-squares solution for singular systems.
std::vector<double> solve_spd(const Matrix& a, std::span<const double> b);

}  // namespace kernels
}  // namespace lexitune
