#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "lexitune/lexi_compare.hpp"
#include "lexitune/search_space.hpp"

namespace lexitune {

using Evaluator = std::function<FoldLosses(const Configuration&)>;

struct OptimizerParams {
    double delta_init = 0.25;
    double delta_lower = 0.0009765625;  // 2^-10
    double delta_restart_step = -1.0;   // < 0 means 0.1 * delta_init
    std::size_t budget = 100;
    Tolerance kappa;                    // defaults to (1%, 0%, ...) when empty
    std::uint64_t seed = 0;
    ObjectiveMode mode;
    // When set, the evaluator's loss vector is the objective vector itself
    // (one entry per objective, priority order); kappa must then be given
    // explicitly and fixes the objective count. The mode is ignored.
    bool raw_objectives = false;

    double restart_step() const {
        return delta_restart_step >= 0.0 ? delta_restart_step : 0.1 * delta_init;
    }
};

enum class TraceEvent {
    incumbent_update,  // evaluation accepted and promoted to incumbent
    accepted_plus,     // +delta*u probe accepted as the new current point
    accepted_minus,    // -delta*u probe accepted
    rejected,
    restart            // evaluation of a random-restart point
};

const char* trace_event_name(TraceEvent e);

// One record per evaluator call.
struct TraceEntry {
    std::size_t iteration = 0;  // evaluation index, strictly increasing
    Configuration config;
    FoldLosses fold_losses;
    ObjectiveVector objectives;
    TraceEvent event = TraceEvent::rejected;
    double delta = 0.0;
    std::vector<double> targets;  // snapshot after this evaluation
};

using Trace = std::vector<TraceEntry>;

// Loop state of the randomized direct search.
struct OptimizerState {
    Configuration current;
    ObjectiveVector current_objectives;
    Configuration incumbent;
    ObjectiveVector incumbent_objectives;
    double delta = 0.25;
    std::size_t t = 0;        // iteration counter
    std::size_t t_prime = 0;  // iteration of the last accepted move
    std::size_t s = 0;        // consecutive probe failures
    std::size_t r = 0;        // restart counter
    History history;
    Targets targets;
};

struct OptimizerResult {
    Configuration best;
    ObjectiveVector best_objectives;
    Trace trace;
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
};

// Acceptance rule of the direct search: accept iff the candidate is
// strictly better than the current point under the targeted comparison, or
// targeted-equal and strictly better under the plain lexicographic order.
// promote_incumbent applies the same test against the incumbent and is only
// meaningful when accept is true.
struct UpdateDecision {
    bool accept = false;
    bool promote_incumbent = false;
};

UpdateDecision update_procedure(const ObjectiveVector& candidate, const ObjectiveVector& current,
                                const ObjectiveVector& incumbent, const Targets& targets);

// Steppable direct search: +-probe iterations with targeted acceptance,
// step decay by sqrt((t'+1)/(t+1)) after 2^(d-1) consecutive failures, and
// Gaussian restarts around the initial point once delta underflows
// delta_lower. Every evaluated point is appended to the history and the
// targets are recomputed before the acceptance test.
class LexiFlow {
public:
    LexiFlow(const SearchSpace& space, Evaluator evaluator, const OptimizerParams& params,
             const std::optional<Configuration>& initial = std::nullopt);

    // One loop iteration (up to two probe evaluations plus a possible
    // restart evaluation). Returns false once the budget is exhausted.
    bool step();

    const OptimizerState& state() const { return state_; }
    OptimizerState& mutable_state() { return state_; }
    const Trace& trace() const { return trace_; }
    std::size_t evaluations() const { return evaluations_; }

    OptimizerResult finish() &&;

private:
    bool budget_left() const { return evaluations_ < params_.budget; }
    const ObjectiveVector& evaluate(const Configuration& config, TraceEvent event);

    const SearchSpace& space_;
    Evaluator evaluator_;
    OptimizerParams params_;
    Tolerance kappa_;
    SeededRng rng_;
    UnitVector start_encoded_;
    std::size_t failure_threshold_;
    OptimizerState state_;
    Trace trace_;
    std::size_t evaluations_ = 0;
};

// Runs the search to budget exhaustion and returns the incumbent.
OptimizerResult run_lexiflow(const SearchSpace& space, const Evaluator& evaluator,
                             const OptimizerParams& params,
                             const std::optional<Configuration>& initial = std::nullopt);

// Baseline: budget uniform samples, best under lexi_compare on the mode's
// objective vector.
OptimizerResult random_search(const SearchSpace& space, const Evaluator& evaluator,
                              const OptimizerParams& params);

// Fills in the default tolerance (1% on the first objective, 0 on the rest)
// when params.kappa is empty, and validates the length otherwise.
Tolerance resolve_kappa(const OptimizerParams& params);

}  // namespace lexitune
