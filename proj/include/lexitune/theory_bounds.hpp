#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace lexitune {

// Inputs of the two-case expected-test-loss bound. case_flag records whether
// the selected configuration's loss on the test-like fold is at most its
// average validation loss (the first case of the bound).
struct BoundInputs {
    double beta = 1.0;            // upper bound on any per-instance loss
    double epsilon = 0.05;        // failure probability, in (0,1)
    std::size_t n_val = 1;        // validation set size
    double l_avg_at_ckstar = 0.0; // L_avg of the best config on the test-like fold
    double l_avg_star = 0.0;      // best achievable L_avg
    double l_worst_at_ckstar = 0.0;
    double kappa = 0.0;
    bool case_flag = true;
};

// sqrt(beta * ln(2/epsilon) / (2 * n_val)): the high-probability deviation
// between the empirical validation loss and the expected test loss for
// losses bounded in [0, beta].
double hoeffding_term(double beta, double epsilon, std::size_t n_val);

// Smallest tolerance for which the second bound case applies:
// L_avg(c*_{k*}) / L*_avg - 1.
double kappa_threshold(double l_avg_at_ckstar, double l_avg_star);

// (1+kappa) * L_avg(c*_{k*}) + hoeffding term when case_flag, otherwise
// L_worst(c*_{k*}) + hoeffding term. The second case requires
// kappa >= kappa_threshold; a violation is reported, not silently computed.
double test_loss_bound(const BoundInputs& inputs);

// Per-instance loss sampler. draw_set produces the n per-instance losses of
// one validation draw; each trial index yields an independent, reproducible
// draw, so trials can run on any schedule.
struct LossSampler {
    std::function<std::vector<double>(std::uint64_t trial, std::size_t n)> draw_set;
    double true_mean = 0.0;
};

// Monte-Carlo check of the concentration bound: fraction of `trials`
// size-n_val validation sets whose empirical mean stays within
// hoeffding_term of the true mean. Trials run independently with derived
// seeds; a sampled loss outside [0, beta] is an error.
double empirical_coverage(const LossSampler& sampler, std::size_t n_val, double epsilon,
                          double beta, std::size_t trials);

// Standard Bernoulli(p) per-instance loss sampler (deterministic per seed).
LossSampler bernoulli_sampler(double p, std::uint64_t seed);

}  // namespace lexitune
