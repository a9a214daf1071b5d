#pragma once

#include <algorithm>
#include <ostream>
#include <set>
#include <vector>

#include "cara/cost_matrix.hpp"

namespace cara {

/// Memoized DP table over a cost matrix's range. values(t, p) is the cost of the best
/// strategy through batch t whose current model was trained at batch p (+inf for p > t).
/// Indices are relative to `start`.
class DPTable {
public:
    DPTable(BatchIndex start, std::size_t n) : start_(start), n_(n), values_(n * n, kInfinity) {}

    BatchIndex start() const noexcept { return start_; }
    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t t, std::size_t p) { return values_[t * n_ + p]; }
    double operator()(std::size_t t, std::size_t p) const { return values_[t * n_ + p]; }

    /// argmin over p of values(t, p); ties go to the smallest p.
    std::size_t argmin_row(std::size_t t) const {
        std::size_t best = 0;
        for (std::size_t p = 1; p < n_; ++p)
            if (values_[t * n_ + p] < values_[t * n_ + best]) best = p;
        return best;
    }
    double min_row(std::size_t t) const { return (*this)(t, argmin_row(t)); }

    /// Optimal total cost over the whole range.
    double optimal_cost() const { return min_row(n_ - 1); }

private:
    BatchIndex start_;
    std::size_t n_;
    std::vector<double> values_;
};

inline DPTable memoize_dp(const CostMatrix& c) {
    const std::size_t n = c.size();
    const BatchIndex s = c.start();
    DPTable v(s, n);

    double prefix = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        prefix += c(s, s + t);
        v(t, 0) = prefix;
    }
    for (std::size_t t = 1; t < n; ++t) {
        for (std::size_t p = 1; p <= t; ++p) {
            if (p == t)
                v(t, p) = c(s + t, s + t) + v.min_row(t - 1);
            else
                v(t, p) = c(s + p, s + t) + v(t - 1, p);
        }
    }
    return v;
}

/// Batches at which the optimal strategy retrains (always contains the range start).
struct OracleRetrains {
    std::set<BatchIndex> batches;
};

/// Backward argmin walk through the DP table; stops once the range start is included.
inline OracleRetrains oracle_retrains(const DPTable& v) {
    OracleRetrains o;
    std::size_t p = v.argmin_row(v.size() - 1);
    o.batches.insert(v.start() + p);
    while (p > 0) {
        p = v.argmin_row(p - 1);
        o.batches.insert(v.start() + p);
    }
    return o;
}

/// s_t = latest retrain batch <= t.
inline Strategy expand_to_strategy(const OracleRetrains& o, BatchIndex start, BatchIndex end) {
    if (o.batches.empty() || *o.batches.begin() != start)
        throw ContractViolation("oracle retrain set must contain the range start");
    if (*o.batches.rbegin() > end) throw ContractViolation("oracle retrain set exceeds the range");
    Strategy s{start, {}};
    BatchIndex current = start;
    for (BatchIndex t = start; t <= end; ++t) {
        if (o.batches.count(t)) current = t;
        s.served_by.push_back(current);
    }
    return s;
}

/// Optimal strategy for a cost matrix.
inline Strategy oracle_strategy(const CostMatrix& c) {
    return expand_to_strategy(oracle_retrains(memoize_dp(c)), c.start(), c.end());
}

/// CSV with header `t,p,value` (absolute batch indices).
inline void write_dp_table_csv(std::ostream& os, const DPTable& v) {
    os << "t,p,value\n";
    for (std::size_t t = 0; t < v.size(); ++t)
        for (std::size_t p = 0; p < v.size(); ++p)
            os << v.start() + t << ',' << v.start() + p << ',' << detail::format_double(v(t, p)) << '\n';
}

} // namespace cara
