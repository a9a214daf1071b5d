#pragma once

#include <vector>

#include "cara/classifier.hpp"
#include "cara/types.hpp"

namespace cara {

/// Small 2D four-batch streams that show how query placement changes staleness.
struct ScenarioSpec {
    std::size_t grid = 20;                                  // data points per axis
    std::vector<double> boundaries{0.5, 0.6, 0.7, 0.8};     // label 1 iff x0 > boundary
    std::vector<double> query_x0{0.65};                     // query x0 per batch (last value repeats)
    std::size_t queries_per_batch = 20;
    double query_spread = 0.2;                              // queries span x1 in [0.5 -/+ spread]
    double gamma = 50.0;
};

namespace detail {

inline Points unit_grid(std::size_t n) {
    Points p(2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p.push_back(std::vector<double>{(static_cast<double>(i) + 0.5) / static_cast<double>(n),
                                            (static_cast<double>(j) + 0.5) / static_cast<double>(n)});
    return p;
}

inline Points query_column(double x0, std::size_t n, double spread) {
    Points q(2);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = n == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(n - 1);
        q.push_back(std::vector<double>{x0, 0.5 - spread + 2.0 * spread * f});
    }
    return q;
}

inline Stream threshold_stream(const ScenarioSpec& s) {
    if (s.boundaries.empty() || s.query_x0.empty()) throw InvalidInput("scenario needs boundaries and query positions");
    const Points grid = unit_grid(s.grid);
    Stream out;
    for (BatchIndex t = 0; t < s.boundaries.size(); ++t) {
        DataBatch d{t, grid, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) d.labels.push_back(grid[i][0] > s.boundaries[t] ? 1 : 0);
        const double qx = s.query_x0[std::min<std::size_t>(t, s.query_x0.size() - 1)];
        QueryBatch q{t, query_column(qx, s.queries_per_batch, s.query_spread), std::vector<Label>{}};
        for (std::size_t i = 0; i < q.size(); ++i) q.eval_labels->push_back(q.queries[i][0] > s.boundaries[t] ? 1 : 0);
        out.data.push_back(std::move(d));
        out.queries.push_back(std::move(q));
    }
    out.validate();
    return out;
}

} // namespace detail

/// Linear concept drift: the class boundary moves right each batch. With far queries the
/// misclassified band never comes near the queries; with near queries it sweeps over them.
inline ScenarioSpec linear_drift_scenario(bool near_queries) {
    ScenarioSpec s;
    s.query_x0 = {near_queries ? 0.65 : 0.05};
    return s;
}

/// Static data and labels; only the queries move toward the boundary.
inline ScenarioSpec static_data_scenario() {
    ScenarioSpec s;
    s.boundaries = {0.5, 0.5, 0.5, 0.5};
    s.query_x0 = {0.1, 0.25, 0.4, 0.5};
    return s;
}

inline Stream make_scenario_stream(const ScenarioSpec& s) { return detail::threshold_stream(s); }

/// Model used by the scenarios: a linear classifier.
inline ModelConfig scenario_model() {
    LogisticConfig c;
    c.learning_rate = 1.0;
    c.epochs = 2000;
    return c;
}

} // namespace cara
