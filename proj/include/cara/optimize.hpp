#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cara/policies.hpp"

namespace cara {

enum class PolicyFamily { cara_t, cara_ct, cara_p };

namespace detail {

inline bool all_staleness_zero(const CostMatrix& c) {
    for (BatchIndex tp = c.start(); tp <= c.end(); ++tp)
        for (BatchIndex t = tp + 1; t <= c.end(); ++t)
            if (c(tp, t) != 0.0) return false;
    return true;
}

template <class MakePolicy>
double replay_cost(const CostMatrix& c, MakePolicy&& make, double threshold) {
    return strategy_cost(replay_on_matrix(make(threshold), c), c);
}

/// Two-stage search over a piecewise-constant objective in one threshold.
/// Stage 1 scores `candidates` (sorted, distinct, finite) plus the -inf/+inf sentinels; stage 2
/// scores 64 evenly spaced points strictly between the neighbours of the stage-1 winner.
/// Ties go to the smallest threshold, except that +inf (never retrain) wins any tie it is part of.
template <class MakePolicy>
double search_threshold(const CostMatrix& c, const std::vector<double>& candidates, MakePolicy&& make) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> grid;
    grid.reserve(candidates.size() + 2);
    grid.push_back(-inf);
    grid.insert(grid.end(), candidates.begin(), candidates.end());
    grid.push_back(inf);

    std::vector<double> costs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) costs[i] = replay_cost(c, make, grid[i]);

    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        if (costs[i] < costs[best]) best = i;
    if (!(costs.back() > costs[best])) return inf;
    if (best == 0) return -inf;

    double best_tau = grid[best];
    double best_cost = costs[best];

    // stage 2: refine between the finite neighbours of the winner
    double span = candidates.size() > 1 ? candidates.back() - candidates.front() : 0.0;
    if (!(span > 0.0)) span = std::max(1.0, std::abs(best_tau));
    const double lo = std::isfinite(grid[best - 1]) ? grid[best - 1] : best_tau - span;
    const double hi = std::isfinite(grid[best + 1]) ? grid[best + 1] : best_tau + span;
    constexpr int kRefinements = 64;
    for (int i = 1; i <= kRefinements; ++i) {
        const double tau = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kRefinements + 1);
        const double cost = replay_cost(c, make, tau);
        if (cost < best_cost || (cost == best_cost && tau < best_tau)) {
            best_cost = cost;
            best_tau = tau;
        }
    }
    return best_tau;
}

inline std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace detail

/// Best threshold tau for the single-threshold rule on an offline matrix.
inline CaraTPolicy optimize_cara_t(const CostMatrix& c) {
    if (detail::all_staleness_zero(c)) return {std::numeric_limits<double>::infinity()};
    std::vector<double> values;
    for (BatchIndex tp = c.start(); tp <= c.end(); ++tp)
        for (BatchIndex t = tp + 1; t <= c.end(); ++t) values.push_back(c(tp, t));
    const double tau = detail::search_threshold(c, detail::sorted_unique(std::move(values)),
                                                [](double x) -> Policy { return CaraTPolicy{x}; });
    return {tau};
}

/// Best cumulative threshold on an offline matrix. Candidates are all realized running sums
/// of a matrix row starting after its diagonal. The replay is path-dependent, so this is a
/// search heuristic rather than an exact optimum.
inline CaraCTPolicy optimize_cara_ct(const CostMatrix& c) {
    if (detail::all_staleness_zero(c)) return {std::numeric_limits<double>::infinity()};
    std::vector<double> sums;
    for (BatchIndex tp = c.start(); tp <= c.end(); ++tp) {
        double acc = 0.0;
        for (BatchIndex t = tp + 1; t <= c.end(); ++t) {
            acc += c(tp, t);
            sums.push_back(acc);
        }
    }
    const double tau = detail::search_threshold(c, detail::sorted_unique(std::move(sums)),
                                                [](double x) -> Policy { return CaraCTPolicy{x}; });
    return {tau};
}

/// Exhaustive search over period phi in [1, T] and offset a in [0, phi), where T is the
/// number of batches after the range start, plus the never-retrain period.
/// Ties go to the largest phi (never-retrain counts as largest), then the smallest offset.
inline CaraPPolicy optimize_cara_p(const CostMatrix& c) {
    CaraPPolicy best{std::nullopt, 0};
    double best_cost = strategy_cost(replay_on_matrix(best, c), c);
    const std::size_t max_phi = c.end() - c.start();
    for (std::size_t phi = max_phi; phi >= 1; --phi) {
        for (std::size_t a = 0; a < phi; ++a) {
            const CaraPPolicy cand{phi, a};
            const double cost = strategy_cost(replay_on_matrix(cand, c), c);
            if (cost < best_cost) {
                best_cost = cost;
                best = cand;
            }
        }
    }
    return best;
}

inline Policy optimize_offline(PolicyFamily family, const CostMatrix& offline) {
    switch (family) {
    case PolicyFamily::cara_t: return optimize_cara_t(offline);
    case PolicyFamily::cara_ct: return optimize_cara_ct(offline);
    case PolicyFamily::cara_p: return optimize_cara_p(offline);
    }
    throw InvalidInput("unknown policy family");
}

} // namespace cara
