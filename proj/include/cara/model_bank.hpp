#pragma once

#include <memory>
#include <vector>

#include "cara/classifier.hpp"
#include "cara/staleness.hpp"
#include "cara/types.hpp"

namespace cara {

/// Lazily fitted per-batch models M_t over a stream, with cached per-point losses.
///
/// Model t is always fitted on D_t with the same config, so every consumer (cost matrix,
/// policy runner, prequential evaluation) sees the identical model for a given batch.
/// Not thread-safe; the stream must outlive the bank.
class ModelBank {
public:
    ModelBank(const Stream& stream, ModelConfig cfg) : stream_(&stream), cfg_(std::move(cfg)) {
        stream.validate();
        models_.resize(stream.size());
        losses_.resize(stream.size());
    }

    const Stream& stream() const noexcept { return *stream_; }
    const ModelConfig& config() const noexcept { return cfg_; }

    const Classifier& model(BatchIndex t) {
        auto& slot = models_.at(offset(t));
        if (!slot) slot = std::make_unique<Classifier>(fit_model(stream_->data_at(t), cfg_));
        return *slot;
    }

    /// 0-1 losses of M_{model_t} on D_{data_t}.
    const std::vector<Label>& losses(BatchIndex model_t, BatchIndex data_t) {
        auto& row = losses_.at(offset(model_t));
        if (row.empty()) row.resize(stream_->size());
        auto& cell = row.at(offset(data_t));
        if (!cell) cell = std::make_unique<std::vector<Label>>(batch_losses(model(model_t), stream_->data_at(data_t)));
        return *cell;
    }

    /// Relative staleness of M_{t_prime} at batch t, computed from cached losses.
    double relative_staleness(BatchIndex t, BatchIndex t_prime, const KernelConfig& k) {
        if (t_prime > t) throw ContractViolation("relative staleness requested for a model from the future");
        const auto& q = stream_->queries_at(t);
        const double now = staleness_from_losses(q, stream_->data_at(t), losses(t_prime, t), k);
        const double then = staleness_from_losses(q, stream_->data_at(t_prime), losses(t_prime, t_prime), k);
        return now - then;
    }

private:
    std::size_t offset(BatchIndex t) const {
        if (t < stream_->first() || t > stream_->last())
            throw InvalidInput("batch " + std::to_string(t) + " is outside the stream");
        return t - stream_->first();
    }

    const Stream* stream_;
    ModelConfig cfg_;
    std::vector<std::unique_ptr<Classifier>> models_;
    std::vector<std::vector<std::unique_ptr<std::vector<Label>>>> losses_;
};

} // namespace cara
