#include "lexitune/lexiflow.hpp"

#include <cmath>
#include <stdexcept>

namespace lexitune {

namespace {

bool passes_update(const ObjectiveVector& candidate, const ObjectiveVector& reference,
                   const Targets& targets) {
    const Ordering targeted = targeted_compare(candidate, reference, targets);
    if (targeted == Ordering::strictly_better) return true;
    return targeted == Ordering::equal &&
           lexi_compare(candidate, reference) == Ordering::strictly_better;
}

}  // namespace

const char* trace_event_name(TraceEvent e) {
    switch (e) {
        case TraceEvent::incumbent_update: return "incumbent_update";
        case TraceEvent::accepted_plus: return "accepted_plus";
        case TraceEvent::accepted_minus: return "accepted_minus";
        case TraceEvent::rejected: return "rejected";
        case TraceEvent::restart: return "restart";
    }
    return "unknown";
}

Tolerance resolve_kappa(const OptimizerParams& params) {
    if (params.raw_objectives) {
        if (params.kappa.kappa.empty())
            throw std::invalid_argument("raw objectives require an explicit kappa vector");
        return params.kappa;
    }
    const std::size_t levels = params.mode.objective_count();
    if (params.kappa.kappa.empty()) {
        Tolerance t;
        t.kappa.assign(levels, 0.0);
        if (levels > 1) t.kappa[0] = 0.01;
        return t;
    }
    if (params.kappa.kappa.size() != levels)
        throw std::invalid_argument("kappa length does not match the objective count");
    return params.kappa;
}

UpdateDecision update_procedure(const ObjectiveVector& candidate, const ObjectiveVector& current,
                                const ObjectiveVector& incumbent, const Targets& targets) {
    UpdateDecision d;
    d.accept = passes_update(candidate, current, targets);
    d.promote_incumbent = passes_update(candidate, incumbent, targets);
    return d;
}

LexiFlow::LexiFlow(const SearchSpace& space, Evaluator evaluator, const OptimizerParams& params,
                   const std::optional<Configuration>& initial)
    : space_(space),
      evaluator_(std::move(evaluator)),
      params_(params),
      kappa_(resolve_kappa(params)),
      rng_(params.seed) {
    if (params_.budget < 1) throw std::invalid_argument("LexiFlow: budget must be >= 1");
    if (!(params_.delta_init > 0.0) || !(params_.delta_lower > 0.0) ||
        params_.delta_lower >= params_.delta_init)
        throw std::invalid_argument("LexiFlow: need 0 < delta_lower < delta_init");

    const std::size_t d = space_.dimension();
    failure_threshold_ = d >= 64 ? (std::size_t{1} << 63) : (std::size_t{1} << (d - 1));

    Configuration start = initial ? *initial : midpoint_configuration(space_);
    validate(space_, start);
    start_encoded_ = encode(space_, start);

    state_.delta = params_.delta_init;
    state_.current = start;
    state_.current_objectives = evaluate(start, TraceEvent::incumbent_update);
    state_.incumbent = state_.current;
    state_.incumbent_objectives = state_.current_objectives;
}

namespace {

ObjectiveVector raw_objective_vector(const FoldLosses& losses, std::size_t expected) {
    if (losses.size() != expected)
        throw std::runtime_error("raw objective vector length does not match kappa");
    for (double v : losses)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::runtime_error("objective value must be finite and non-negative");
    return losses;
}

}  // namespace

const ObjectiveVector& LexiFlow::evaluate(const Configuration& config, TraceEvent event) {
    FoldLosses losses;
    try {
        losses = evaluator_(config);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("evaluator failed: ") + e.what());
    }
    ObjectiveVector objectives = params_.raw_objectives
                                     ? raw_objective_vector(losses, kappa_.kappa.size())
                                     : aggregate(losses, params_.mode);
    state_.history.append(config, objectives);
    state_.targets = compute_targets(state_.history, kappa_);
    TraceEntry entry;
    entry.iteration = evaluations_;
    entry.config = config;
    entry.fold_losses = std::move(losses);
    entry.objectives = std::move(objectives);
    entry.event = event;
    entry.delta = state_.delta;
    entry.targets = state_.targets.z;
    trace_.push_back(std::move(entry));
    ++evaluations_;
    return state_.history.entries.back().objectives;
}

bool LexiFlow::step() {
    if (!budget_left()) return false;

    const UnitVector u = sample_unit_sphere(space_.dimension(), rng_);
    bool moved = false;

    for (int sign : {+1, -1}) {
        if (!budget_left()) break;
        UnitVector direction = u;
        if (sign < 0)
            for (double& v : direction) v = -v;
        const Configuration candidate = perturb(space_, state_.current, direction, state_.delta);
        const TraceEvent base_event =
            sign > 0 ? TraceEvent::accepted_plus : TraceEvent::accepted_minus;
        const ObjectiveVector& cand_obj = evaluate(candidate, base_event);
        const UpdateDecision decision = update_procedure(
            cand_obj, state_.current_objectives, state_.incumbent_objectives, state_.targets);
        if (decision.accept) {
            state_.current = candidate;
            state_.current_objectives = cand_obj;
            state_.t_prime = state_.t;
            state_.s = 0;
            if (decision.promote_incumbent) {
                state_.incumbent = candidate;
                state_.incumbent_objectives = cand_obj;
                trace_.back().event = TraceEvent::incumbent_update;
            }
            moved = true;
            break;
        }
        trace_.back().event = TraceEvent::rejected;
    }

    if (!moved) {
        state_.s += 1;
        if (state_.s >= failure_threshold_) {
            state_.s = 0;
            state_.delta *= std::sqrt(static_cast<double>(state_.t_prime + 1) /
                                      static_cast<double>(state_.t + 1));
        }
    }

    if (state_.delta < params_.delta_lower) {
        state_.r += 1;
        state_.delta =
            params_.delta_init + static_cast<double>(state_.r) * params_.restart_step();
        UnitVector jump(space_.dimension());
        for (std::size_t i = 0; i < jump.size(); ++i) {
            const double v = rng_.normal(start_encoded_[i], 0.25);
            jump[i] = std::min(1.0, std::max(0.0, v));
        }
        if (budget_left()) {
            const Configuration restart_point = decode(space_, jump);
            state_.current = restart_point;
            state_.current_objectives = evaluate(restart_point, TraceEvent::restart);
        }
    }

    state_.t += 1;
    return budget_left();
}

OptimizerResult LexiFlow::finish() && {
    OptimizerResult result;
    result.best = state_.incumbent;
    result.best_objectives = state_.incumbent_objectives;
    result.trace = std::move(trace_);
    result.evaluations = evaluations_;
    result.restarts = state_.r;
    return result;
}

OptimizerResult run_lexiflow(const SearchSpace& space, const Evaluator& evaluator,
                             const OptimizerParams& params,
                             const std::optional<Configuration>& initial) {
    LexiFlow run(space, evaluator, params, initial);
    while (run.step()) {
    }
    return std::move(run).finish();
}

OptimizerResult random_search(const SearchSpace& space, const Evaluator& evaluator,
                              const OptimizerParams& params) {
    if (params.budget < 1) throw std::invalid_argument("random_search: budget must be >= 1");
    SeededRng rng(params.seed);

    OptimizerResult result;
    const Tolerance kappa = resolve_kappa(params);
    bool have_best = false;
    for (std::size_t i = 0; i < params.budget; ++i) {
        const Configuration config = sample_uniform(space, rng);
        FoldLosses losses = evaluator(config);
        ObjectiveVector objectives = params.raw_objectives
                                         ? raw_objective_vector(losses, kappa.kappa.size())
                                         : aggregate(losses, params.mode);

        TraceEntry entry;
        entry.iteration = i;
        entry.config = config;
        entry.fold_losses = std::move(losses);
        entry.delta = 0.0;
        const bool better =
            !have_best ||
            lexi_compare(objectives, result.best_objectives) == Ordering::strictly_better;
        entry.event = better ? TraceEvent::incumbent_update : TraceEvent::rejected;
        entry.objectives = objectives;
        result.trace.push_back(std::move(entry));
        if (better) {
            result.best = config;
            result.best_objectives = std::move(objectives);
            have_best = true;
        }
    }
    result.evaluations = params.budget;
    return result;
}

}  // namespace lexitune
