#include "lexitune/theory_bounds.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lexitune/rng.hpp"

namespace lexitune {

double hoeffding_term(double beta, double epsilon, std::size_t n_val) {
    if (!(beta > 0.0)) throw std::invalid_argument("hoeffding_term: beta must be > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("hoeffding_term: epsilon must be in (0,1)");
    if (n_val == 0) throw std::invalid_argument("hoeffding_term: n_val must be >= 1");
    return std::sqrt(beta * std::log(2.0 / epsilon) / (2.0 * static_cast<double>(n_val)));
}

double kappa_threshold(double l_avg_at_ckstar, double l_avg_star) {
    if (!(l_avg_star > 0.0))
        throw std::invalid_argument("kappa_threshold: best average loss must be > 0");
    return l_avg_at_ckstar / l_avg_star - 1.0;
}

double test_loss_bound(const BoundInputs& in) {
    if (in.l_avg_at_ckstar < 0.0 || in.l_worst_at_ckstar < 0.0 || in.kappa < 0.0)
        throw std::invalid_argument("test_loss_bound: inputs must be non-negative");
    const double tail = hoeffding_term(in.beta, in.epsilon, in.n_val);
    if (in.case_flag) return (1.0 + in.kappa) * in.l_avg_at_ckstar + tail;
    const double needed = kappa_threshold(in.l_avg_at_ckstar, in.l_avg_star);
    if (in.kappa < needed)
        throw std::invalid_argument(
            "test_loss_bound: second case requires kappa >= " + std::to_string(needed) +
            ", got " + std::to_string(in.kappa));
    return in.l_worst_at_ckstar + tail;
}

double empirical_coverage(const LossSampler& sampler, std::size_t n_val, double epsilon,
                          double beta, std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("empirical_coverage: trials must be >= 1");
    const double tail = hoeffding_term(beta, epsilon, n_val);

    std::int64_t violations = 0;
    bool out_of_range = false;
#pragma omp parallel for schedule(static) reduction(+ : violations) reduction(|| : out_of_range)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
        const std::vector<double> losses = sampler.draw_set(static_cast<std::uint64_t>(t), n_val);
        double acc = 0.0;
        for (double v : losses) {
            if (v < 0.0 || v > beta) out_of_range = true;
            acc += v;
        }
        const double mean = acc / static_cast<double>(n_val);
        if (std::fabs(mean - sampler.true_mean) > tail) violations += 1;
    }
    if (out_of_range)
        throw std::runtime_error("empirical_coverage: sampled loss outside [0, beta]");
    return 1.0 - static_cast<double>(violations) / static_cast<double>(trials);
}

LossSampler bernoulli_sampler(double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bernoulli_sampler: p must be in [0,1]");
    LossSampler s;
    s.true_mean = p;
    s.draw_set = [p, seed](std::uint64_t trial, std::size_t n) {
        SeededRng rng(derive_seed(seed, trial));
        std::vector<double> out(n);
        for (double& v : out) v = rng.uniform01() < p ? 1.0 : 0.0;
        return out;
    };
    return s;
}

}  // namespace lexitune
