#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cara/cara.hpp"

namespace cara_test {

using namespace cara;

/// Random matrix over [start, start+n-1]: staleness ~ U[lo, hi], constant kappa.
inline CostMatrix random_matrix(std::mt19937_64& rng, BatchIndex start, std::size_t n, double kappa, double lo = -1.0,
                                double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    CostMatrix c(start, std::vector<double>(n, kappa));
    for (BatchIndex tp = start; tp < start + n; ++tp)
        for (BatchIndex t = tp + 1; t < start + n; ++t) c.set_staleness(tp, t, u(rng));
    return c;
}

/// Strategy from a bitmask of retrain decisions at start+1..end (bit i-1 for batch start+i).
inline Strategy strategy_from_mask(BatchIndex start, std::size_t n, unsigned long mask) {
    Strategy s{start, {start}};
    for (std::size_t i = 1; i < n; ++i) s.served_by.push_back((mask >> (i - 1)) & 1UL ? start + i : s.served_by.back());
    return s;
}

/// Cost by reading each matrix cell directly, written independently of strategy_cost.
inline double naive_cost(const std::vector<BatchIndex>& served_by, BatchIndex start, const CostMatrix& c) {
    double total = 0.0;
    for (std::size_t i = 0; i < served_by.size(); ++i) total = total + c(served_by[i], start + i);
    return total;
}

/// Exhaustive minimum over every reachable strategy (all 2^(n-1) retrain subsets).
inline double brute_force_min_cost(const CostMatrix& c) {
    const std::size_t n = c.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned long mask = 0; mask < (1UL << (n - 1)); ++mask)
        best = std::min(best, naive_cost(strategy_from_mask(c.start(), n, mask).served_by, c.start(), c));
    return best;
}

/// A model that predicts `label` everywhere.
inline Classifier constant_model(Label label, std::size_t dim, BatchIndex trained_at) {
    return {LogisticModel::from_parameters(std::vector<double>(dim, 0.0), label ? 1.0 : -1.0), trained_at, dim};
}

inline DataBatch make_batch(BatchIndex t, std::vector<std::vector<double>> pts, std::vector<Label> labels) {
    DataBatch b{t, Points(pts.empty() ? 1 : pts.front().size()), std::move(labels)};
    for (auto& p : pts) b.points.push_back(p);
    return b;
}

inline QueryBatch make_queries(BatchIndex t, std::vector<std::vector<double>> pts) {
    QueryBatch q{t, Points(pts.empty() ? 1 : pts.front().size()), std::nullopt};
    for (auto& p : pts) q.queries.push_back(p);
    return q;
}

/// Small seeded generator stream used by end-to-end tests.
inline StreamSpec small_spec(Dataset d, std::size_t n_batches = 12, std::size_t batch_size = 120,
                             std::size_t queries = 12) {
    StreamSpec s;
    s.dataset = d;
    s.n_batches = n_batches;
    s.batch_size = batch_size;
    s.queries_per_batch = queries;
    return s;
}

inline ForestConfig small_forest() {
    ForestConfig f;
    f.n_trees = 5;
    f.max_depth = 5;
    return f;
}

} // namespace cara_test
