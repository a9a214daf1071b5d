#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "cara/forest.hpp"
#include "cara/logistic.hpp"
#include "cara/types.hpp"

namespace cara {

enum class ModelKind { logistic, forest };

inline std::string_view to_string(ModelKind k) { return k == ModelKind::logistic ? "logistic" : "forest"; }

using ModelConfig = std::variant<LogisticConfig, ForestConfig>;

inline ModelKind kind_of(const ModelConfig& cfg) {
    return std::holds_alternative<LogisticConfig>(cfg) ? ModelKind::logistic : ModelKind::forest;
}

/// A trained binary model M_t' together with the batch index it was fitted on.
/// Immutable after construction.
class Classifier {
public:
    Classifier(LogisticModel m, BatchIndex trained_at, std::size_t dim)
        : model_(std::move(m)), trained_at_(trained_at), dim_(dim) {}
    Classifier(ForestModel m, BatchIndex trained_at, std::size_t dim)
        : model_(std::move(m)), trained_at_(trained_at), dim_(dim) {}

    ModelKind kind() const noexcept {
        return std::holds_alternative<LogisticModel>(model_) ? ModelKind::logistic : ModelKind::forest;
    }
    BatchIndex trained_at() const noexcept { return trained_at_; }
    std::size_t dim() const noexcept { return dim_; }

    Label predict(PointView x) const {
        if (x.size() != dim_)
            throw InvalidInput("predict: point has dimension " + std::to_string(x.size()) + ", model expects " +
                               std::to_string(dim_));
        return std::visit([&](const auto& m) { return m.predict(x); }, model_);
    }

    const LogisticModel* logistic() const noexcept { return std::get_if<LogisticModel>(&model_); }
    const ForestModel* forest() const noexcept { return std::get_if<ForestModel>(&model_); }

private:
    std::variant<LogisticModel, ForestModel> model_;
    BatchIndex trained_at_;
    std::size_t dim_;
};

inline Classifier fit_logistic(const DataBatch& batch, const LogisticConfig& cfg) {
    return {LogisticModel::fit(batch, cfg), batch.t, batch.dim()};
}

inline Classifier fit_forest(const DataBatch& batch, const ForestConfig& cfg) {
    return {ForestModel::fit(batch, cfg), batch.t, batch.dim()};
}

inline Classifier fit_model(const DataBatch& batch, const ModelConfig& cfg) {
    return std::visit(
        [&](const auto& c) -> Classifier {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, LogisticConfig>)
                return fit_logistic(batch, c);
            else
                return fit_forest(batch, c);
        },
        cfg);
}

inline Label predict(const Classifier& model, PointView x) { return model.predict(x); }

} // namespace cara
