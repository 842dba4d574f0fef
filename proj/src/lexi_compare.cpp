#include "lexitune/lexi_compare.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lexitune {

Ordering lexi_compare(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("lexi_compare: objective length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return Ordering::strictly_better;
        if (a[i] > b[i]) return Ordering::strictly_worse;
    }
    return Ordering::equal;
}

Targets compute_targets(const History& history, const Tolerance& kappa) {
    if (history.empty()) throw std::invalid_argument("compute_targets: history is empty");
    const std::size_t levels = history.entries.front().objectives.size();
    if (kappa.kappa.size() != levels)
        throw std::invalid_argument("compute_targets: kappa length mismatch");
    for (double k : kappa.kappa)
        if (k < 0.0) throw std::invalid_argument("compute_targets: kappa must be >= 0");

    std::vector<const HistoryEntry*> tier;
    tier.reserve(history.size());
    for (const HistoryEntry& e : history.entries) {
        if (e.objectives.size() != levels)
            throw std::invalid_argument("compute_targets: inconsistent objective lengths");
        tier.push_back(&e);
    }

    Targets targets;
    targets.z.resize(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const HistoryEntry* e : tier) best = std::min(best, e->objectives[i]);
        const double z = best * (1.0 + kappa.kappa[i]);
        targets.z[i] = z;
        std::vector<const HistoryEntry*> next;
        next.reserve(tier.size());
        for (const HistoryEntry* e : tier)
            if (e->objectives[i] <= z) next.push_back(e);
        tier = std::move(next);
    }
    return targets;
}

Ordering targeted_compare(const ObjectiveVector& a, const ObjectiveVector& b,
                          const Targets& targets) {
    if (a.size() != b.size() || a.size() != targets.z.size())
        throw std::invalid_argument("targeted_compare: length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool tied = a[i] == b[i] || (a[i] <= targets.z[i] && b[i] <= targets.z[i]);
        if (tied) continue;
        return a[i] < b[i] ? Ordering::strictly_better : Ordering::strictly_worse;
    }
    return Ordering::equal;
}

std::vector<std::size_t> lexi_optimal_set(
    const std::vector<std::pair<Configuration, ObjectiveVector>>& points,
    const Tolerance& kappa) {
    if (points.empty()) throw std::invalid_argument("lexi_optimal_set: empty input");
    const std::size_t levels = points.front().second.size();
    if (kappa.kappa.size() != levels)
        throw std::invalid_argument("lexi_optimal_set: kappa length mismatch");

    std::vector<std::size_t> tier(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].second.size() != levels)
            throw std::invalid_argument("lexi_optimal_set: inconsistent objective lengths");
        tier[i] = i;
    }

    for (std::size_t level = 0; level < levels; ++level) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t idx : tier) best = std::min(best, points[idx].second[level]);
        const double z = best * (1.0 + kappa.kappa[level]);
        std::vector<std::size_t> next;
        next.reserve(tier.size());
        for (std::size_t idx : tier)
            if (points[idx].second[level] <= z) next.push_back(idx);
        tier = std::move(next);
    }

    // Final tie-break: minimizers of the last objective within the last tier.
    double best_last = std::numeric_limits<double>::infinity();
    for (std::size_t idx : tier)
        best_last = std::min(best_last, points[idx].second[levels - 1]);
    std::vector<std::size_t> out;
    for (std::size_t idx : tier)
        if (points[idx].second[levels - 1] == best_last) out.push_back(idx);
    return out;
}

}  // namespace lexitune
