#pragma once

#include <cmath>

#include "cara/cost_matrix.hpp"
#include "cara/model_bank.hpp"

namespace cara {

/// Test-then-train query accuracy of a strategy.
///
/// Queries of batch t are answered by the model that served batch t-1 (a model retrained at
/// t only becomes available after its queries were answered). The first batch of the range
/// is answered by the model trained at the range start. Returns the mean of the per-batch
/// accuracies.
inline double evaluate_prequential(const Strategy& s, ModelBank& bank) {
    if (auto err = validate_strategy(s)) throw ContractViolation("evaluate_prequential: " + *err);
    const auto& stream = bank.stream();
    if (s.start < stream.first() || s.end() > stream.last())
        throw InvalidInput("evaluate_prequential: strategy range not covered by the stream");
    double sum = 0.0;
    for (BatchIndex t = s.start; t <= s.end(); ++t) {
        const auto& q = stream.queries_at(t);
        if (!q.eval_labels) throw InvalidInput("evaluate_prequential: query batch " + std::to_string(t) + " has no labels");
        const BatchIndex serving = t == s.start ? s.start : s.at(t - 1);
        const auto& model = bank.model(serving);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < q.size(); ++i) correct += model.predict(q.queries[i]) == (*q.eval_labels)[i];
        sum += static_cast<double>(correct) / static_cast<double>(q.size());
    }
    return sum / static_cast<double>(s.size());
}

inline double evaluate_prequential(const Strategy& s, const Stream& stream, const ModelConfig& model_cfg) {
    ModelBank bank(stream, model_cfg);
    return evaluate_prequential(s, bank);
}

/// Strategy-cost percentage error 100 * |policy - oracle| / |oracle|.
inline double scpe(double policy_cost, double oracle_cost) {
    if (oracle_cost == 0.0) throw UndefinedMetric("SCPE is undefined for a zero oracle cost");
    return 100.0 * std::abs(policy_cost - oracle_cost) / std::abs(oracle_cost);
}

} // namespace cara
