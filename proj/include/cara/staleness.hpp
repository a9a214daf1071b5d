#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cara/classifier.hpp"
#include "cara/types.hpp"

namespace cara {

/// RBF kernel sim(q, x) = exp(-gamma * |q - x|^2).
struct KernelConfig {
    double gamma = 1.0;

    void validate() const {
        if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("kernel gamma must be a positive finite number");
    }

    /// gamma = 1/d
    static KernelConfig for_dimension(std::size_t d) {
        if (d == 0) throw InvalidInput("kernel dimension must be >= 1");
        return {1.0 / static_cast<double>(d)};
    }
};

inline double rbf_similarity(PointView q, PointView x, const KernelConfig& k) {
    if (q.size() != x.size()) throw InvalidInput("rbf_similarity: dimension mismatch");
    double dist2 = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double diff = q[j] - x[j];
        dist2 += diff * diff;
    }
    return std::exp(-k.gamma * dist2);
}

inline Label zero_one_loss(const Classifier& model, PointView x, Label y) {
    return model.predict(x) != y ? 1 : 0;
}

/// Per-point 0-1 losses of `model` on `batch`, in batch order.
inline std::vector<Label> batch_losses(const Classifier& model, const DataBatch& batch) {
    std::vector<Label> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) out[i] = zero_one_loss(model, batch.points[i], batch.labels[i]);
    return out;
}

namespace detail {

// (1/|D|) * sum_x sim(q, x) * loss(x). Zero-loss terms contribute an exact +0.0 and are skipped.
inline double psi_from_losses(PointView q, const Points& data, std::span<const Label> losses, const KernelConfig& k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i)
        if (losses[i]) sum += rbf_similarity(q, data[i], k);
    return sum / static_cast<double>(losses.size());
}

} // namespace detail

/// Kernel-weighted expected loss of a single query against labeled data; in [0, 1].
inline double psi_single(PointView q, const DataBatch& data, const Classifier& model, const KernelConfig& k) {
    if (data.size() == 0) throw InvalidInput("psi_single: empty data batch");
    k.validate();
    if (q.size() != data.dim()) throw InvalidInput("psi_single: query dimension mismatch");
    const auto losses = batch_losses(model, data);
    return detail::psi_from_losses(q, data.points, losses, k);
}

/// Sum of psi over all queries given precomputed losses of the model on `data`.
inline double staleness_from_losses(const QueryBatch& queries, const DataBatch& data, std::span<const Label> losses,
                                    const KernelConfig& k) {
    if (queries.size() == 0) throw InvalidInput("staleness: empty query batch");
    if (data.size() == 0) throw InvalidInput("staleness: empty data batch");
    if (losses.size() != data.size()) throw InvalidInput("staleness: loss vector does not match data batch");
    if (queries.queries.dim() != data.dim()) throw InvalidInput("staleness: query/data dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i)
        total += detail::psi_from_losses(queries.queries[i], data.points, losses, k);
    return total;
}

/// Absolute staleness of a batch of queries, in [0, B_Q].
inline double staleness_total(const QueryBatch& queries, const DataBatch& data, const Classifier& model,
                              const KernelConfig& k) {
    k.validate();
    if (data.size() == 0) throw InvalidInput("staleness_total: empty data batch");
    const auto losses = batch_losses(model, data);
    return staleness_from_losses(queries, data, losses, k);
}

/// Increase in staleness of `model` (trained on `d_train`) for queries `q_t` when moving
/// from its training data to the current data `d_t`. May be negative.
inline double relative_staleness(const QueryBatch& q_t, const DataBatch& d_t, const DataBatch& d_train,
                                 const Classifier& model, const KernelConfig& k) {
    if (model.trained_at() != d_train.t)
        throw ContractViolation("relative_staleness: model trained at batch " + std::to_string(model.trained_at()) +
                                " paired with training batch " + std::to_string(d_train.t));
    if (d_train.t > d_t.t) throw ContractViolation("relative_staleness: training batch is later than current batch");
    return staleness_total(q_t, d_t, model, k) - staleness_total(q_t, d_train, model, k);
}

} // namespace cara
