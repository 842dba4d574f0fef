#include "lexitune/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lexitune::kernels {

namespace {

// Chunked accumulation shared by both kernel families. Each chunk is summed
// left to right, then the chunk partials are summed left to right, so the
// float rounding sequence does not depend on how chunks were scheduled.
template <typename ChunkSum>
double chunked_reduce(std::size_t n, ChunkSum&& chunk_sum, bool parallel) {
    if (n == 0) return 0.0;
    const std::size_t n_chunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(n_chunks);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(n_chunks); ++ci) {
            const std::size_t lo = static_cast<std::size_t>(ci) * kReduceChunk;
            const std::size_t hi = std::min(lo + kReduceChunk, n);
            partial[static_cast<std::size_t>(ci)] = chunk_sum(lo, hi);
        }
    } else {
        for (std::size_t ci = 0; ci < n_chunks; ++ci) {
            const std::size_t lo = ci * kReduceChunk;
            const std::size_t hi = std::min(lo + kReduceChunk, n);
            partial[ci] = chunk_sum(lo, hi);
        }
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double gram_entry(const Matrix& x, std::size_t j, std::size_t k) {
    double acc = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) acc += x(r, j) * x(r, k);
    return acc;
}

double column_dot(const Matrix& x, std::size_t j, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) acc += x(r, j) * y[r];
    return acc;
}

double row_dot(const Matrix& x, std::size_t r, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t c = 0; c < x.cols; ++c) acc += x(r, c) * w[c];
    return acc;
}

double knn_one_query(const Matrix& train_x, std::span<const double> train_y,
                     std::span<const double> q, std::size_t k, Distance dist) {
    const std::size_t n = train_x.rows;
    const std::size_t kk = std::min(k, n);
    std::vector<std::pair<double, std::size_t>> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        if (dist == Distance::euclidean) {
            for (std::size_t c = 0; c < train_x.cols; ++c) {
                const double diff = train_x(i, c) - q[c];
                acc += diff * diff;
            }
        } else {
            for (std::size_t c = 0; c < train_x.cols; ++c)
                acc += std::fabs(train_x(i, c) - q[c]);
        }
        d[i] = {acc, i};
    }
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
    double mean = 0.0;
    for (std::size_t i = 0; i < kk; ++i) mean += train_y[d[i].second];
    return mean / static_cast<double>(kk);
}

// Best split of one feature; rows sorted by feature value, ties by index.
StumpSplit split_one_feature(const Matrix& x, std::span<const double> t,
                             std::size_t f, std::size_t min_leaf) {
    const std::size_t n = x.rows;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x(a, f), vb = x(b, f);
        if (va != vb) return va < vb;
        return a < b;
    });

    std::vector<double> ps(n + 1, 0.0), pss(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        ps[i + 1] = ps[i] + t[order[i]];
        pss[i + 1] = pss[i] + t[order[i]] * t[order[i]];
    }

    StumpSplit best;
    best.feature = f;
    best.sse = std::numeric_limits<double>::infinity();
    for (std::size_t p = min_leaf; p + min_leaf <= n; ++p) {
        const double vl = x(order[p - 1], f);
        const double vr = x(order[p], f);
        if (!(vl < vr)) continue;  // no distinct boundary here
        const double nl = static_cast<double>(p);
        const double nr = static_cast<double>(n - p);
        const double sl = ps[p], sr = ps[n] - ps[p];
        const double sse = (pss[p] - sl * sl / nl) + (pss[n] - pss[p] - sr * sr / nr);
        if (sse < best.sse) {
            best.valid = true;
            best.sse = sse;
            best.threshold = 0.5 * (vl + vr);
            best.left_value = sl / nl;
            best.right_value = sr / nr;
        }
    }
    return best;
}

StumpSplit pick_best(const std::vector<StumpSplit>& per_feature) {
    StumpSplit best;
    best.sse = std::numeric_limits<double>::infinity();
    for (const StumpSplit& s : per_feature) {
        if (!s.valid) continue;
        if (!best.valid || s.sse < best.sse ||
            (s.sse == best.sse && s.feature < best.feature)) {
            best = s;
        }
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// serial reference family
// ---------------------------------------------------------------------------

namespace serial {

Matrix gram(const Matrix& x) {
    Matrix g(x.cols, x.cols);
    for (std::size_t j = 0; j < x.cols; ++j)
        for (std::size_t k = j; k < x.cols; ++k) {
            const double v = gram_entry(x, j, k);
            g(j, k) = v;
            g(k, j) = v;
        }
    return g;
}

std::vector<double> mat_t_vec(const Matrix& x, std::span<const double> y) {
    if (y.size() != x.rows) throw std::invalid_argument("mat_t_vec: size mismatch");
    std::vector<double> out(x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) out[j] = column_dot(x, j, y);
    return out;
}

std::vector<double> mat_vec(const Matrix& x, std::span<const double> w) {
    if (w.size() != x.cols) throw std::invalid_argument("mat_vec: size mismatch");
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = row_dot(x, r, w);
    return out;
}

double sum(std::span<const double> v) {
    return chunked_reduce(
        v.size(),
        [&](std::size_t lo, std::size_t hi) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += v[i];
            return acc;
        },
        false);
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("sum_sq_diff: size mismatch");
    return chunked_reduce(
        a.size(),
        [&](std::size_t lo, std::size_t hi) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const double d = a[i] - b[i];
                acc += d * d;
            }
            return acc;
        },
        false);
}

std::vector<double> knn_scores(const Matrix& train_x, std::span<const double> train_y,
                               const Matrix& queries, std::size_t k, Distance dist) {
    if (train_x.rows == 0 || k == 0) throw std::invalid_argument("knn_scores: empty input");
    std::vector<double> out(queries.rows);
    for (std::size_t q = 0; q < queries.rows; ++q)
        out[q] = knn_one_query(train_x, train_y, queries.row(q), k, dist);
    return out;
}

StumpSplit best_split(const Matrix& x, std::span<const double> target, std::size_t min_leaf) {
    std::vector<StumpSplit> per_feature(x.cols);
    for (std::size_t f = 0; f < x.cols; ++f)
        per_feature[f] = split_one_feature(x, target, f, min_leaf);
    return pick_best(per_feature);
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP family: identical arithmetic, parallel scheduling over independent
// output elements (or fixed chunks for reductions)
// ---------------------------------------------------------------------------

Matrix gram(const Matrix& x) {
    Matrix g(x.cols, x.cols);
    const std::int64_t cols = static_cast<std::int64_t>(x.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < cols; ++j)
        for (std::int64_t k = j; k < cols; ++k) {
            const double v = gram_entry(x, static_cast<std::size_t>(j),
                                        static_cast<std::size_t>(k));
            g(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = v;
            g(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) = v;
        }
    return g;
}

std::vector<double> mat_t_vec(const Matrix& x, std::span<const double> y) {
    if (y.size() != x.rows) throw std::invalid_argument("mat_t_vec: size mismatch");
    std::vector<double> out(x.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(x.cols); ++j)
        out[static_cast<std::size_t>(j)] = column_dot(x, static_cast<std::size_t>(j), y);
    return out;
}

std::vector<double> mat_vec(const Matrix& x, std::span<const double> w) {
    if (w.size() != x.cols) throw std::invalid_argument("mat_vec: size mismatch");
    std::vector<double> out(x.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(x.rows); ++r)
        out[static_cast<std::size_t>(r)] = row_dot(x, static_cast<std::size_t>(r), w);
    return out;
}

double sum(std::span<const double> v) {
    return chunked_reduce(
        v.size(),
        [&](std::size_t lo, std::size_t hi) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += v[i];
            return acc;
        },
        true);
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("sum_sq_diff: size mismatch");
    return chunked_reduce(
        a.size(),
        [&](std::size_t lo, std::size_t hi) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const double d = a[i] - b[i];
                acc += d * d;
            }
            return acc;
        },
        true);
}

std::vector<double> knn_scores(const Matrix& train_x, std::span<const double> train_y,
                               const Matrix& queries, std::size_t k, Distance dist) {
    if (train_x.rows == 0 || k == 0) throw std::invalid_argument("knn_scores: empty input");
    std::vector<double> out(queries.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t q = 0; q < static_cast<std::int64_t>(queries.rows); ++q)
        out[static_cast<std::size_t>(q)] =
            knn_one_query(train_x, train_y, queries.row(static_cast<std::size_t>(q)), k, dist);
    return out;
}

StumpSplit best_split(const Matrix& x, std::span<const double> target, std::size_t min_leaf) {
    std::vector<StumpSplit> per_feature(x.cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t f = 0; f < static_cast<std::int64_t>(x.cols); ++f)
        per_feature[static_cast<std::size_t>(f)] =
            split_one_feature(x, target, static_cast<std::size_t>(f), min_leaf);
    return pick_best(per_feature);
}

// ---------------------------------------------------------------------------
// SPD solver
// ---------------------------------------------------------------------------

namespace {

bool cholesky_solve(const Matrix& a, std::span<const double> b, std::vector<double>& out) {
    const std::size_t n = a.rows;
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    out.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * out[k];
        out[ii] = s / l(ii, ii);
    }
    return true;
}

// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Good enough for
// the small systems the ridge learner produces.
void jacobi_eigen(Matrix a, std::vector<double>& eigvals, Matrix& eigvecs) {
    const std::size_t n = a.rows;
    eigvecs = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) eigvecs(i, i) = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = eigvecs(k, p), vkq = eigvecs(k, q);
                    eigvecs(k, p) = c * vkp - s * vkq;
                    eigvecs(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    eigvals.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigvals[i] = a(i, i);
}

}  // namespace

std::vector<double> solve_spd(const Matrix& a, std::span<const double> b) {
    if (a.rows != a.cols || b.size() != a.rows)
        throw std::invalid_argument("solve_spd: shape mismatch");
    std::vector<double> w;
    if (cholesky_solve(a, b, w)) return w;

    // Pseudo-inverse least-squares fallback for singular systems.
    std::vector<double> eig;
    Matrix v;
    jacobi_eigen(a, eig, v);
    double max_eig = 0.0;
    for (double e : eig) max_eig = std::max(max_eig, std::fabs(e));
    const double tol = max_eig * static_cast<double>(a.rows) * 1e-14;
    const std::size_t n = a.rows;
    std::vector<double> vtb(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) vtb[j] += v(i, j) * b[i];
    for (std::size_t j = 0; j < n; ++j)
        vtb[j] = (std::fabs(eig[j]) > tol) ? vtb[j] / eig[j] : 0.0;
    w.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i] += v(i, j) * vtb[j];
    return w;
}

}  // namespace lexitune::kernels
