#pragma once

#include <vector>

#include "lexitune/objectives.hpp"

namespace lexitune {

// Relative per-objective slack, as fractions (1% -> 0.01). Entry i widens
// the tie band of objective i.
struct Tolerance {
    std::vector<double> kappa;
};

enum class Ordering { strictly_better, equal, strictly_worse };

// Archive of evaluated trials in evaluation order.
struct HistoryEntry {
    Configuration config;
    ObjectiveVector objectives;
};

struct History {
    std::vector<HistoryEntry> entries;

    void append(Configuration config, ObjectiveVector objectives) {
        entries.push_back({std::move(config), std::move(objectives)});
    }
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

// Per-objective target vector derived from the history: at each level,
// z_i = (1 + kappa_i) * (minimum of objective i over the entries surviving
// the previous levels' filters), and the filter keeps entries with
// objective i <= z_i.
struct Targets {
    std::vector<double> z;
};

// Plain lexicographic comparison: vectors are equal iff component-wise
// equal; otherwise the first differing index decides.
Ordering lexi_compare(const ObjectiveVector& a, const ObjectiveVector& b);

Targets compute_targets(const History& history, const Tolerance& kappa);

// Targeted comparison against the target vector: a level ties when the two
// values are equal or both are at or below that level's target; the first
// non-tied level decides.
Ordering targeted_compare(const ObjectiveVector& a, const ObjectiveVector& b,
                          const Targets& targets);

// Recursive tolerance filtering over a finite point set, then the minimizers
// of the last objective within the final tier. Returns indices into
// `points`, in input order.
std::vector<std::size_t> lexi_optimal_set(
    const std::vector<std::pair<Configuration, ObjectiveVector>>& points,
    const Tolerance& kappa);

}  // namespace lexitune
