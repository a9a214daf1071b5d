#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cara/types.hpp"

namespace cara {

struct LogisticConfig {
    double learning_rate = 0.5;
    int epochs = 200;
    double l2 = 0.0;
    // Full-batch descent from a zero start is seed-free; kept so every model config carries one.
    std::uint64_t seed = 0;

    void validate() const {
        if (!(learning_rate > 0.0)) throw InvalidInput("logistic learning_rate must be > 0");
        if (epochs < 1) throw InvalidInput("logistic epochs must be >= 1");
        if (!(l2 >= 0.0)) throw InvalidInput("logistic l2 must be >= 0");
    }
};

/// Binary logistic regression. A single-class training batch yields a constant model.
class LogisticModel {
public:
    LogisticModel() = default;

    static LogisticModel fit(const DataBatch& batch, const LogisticConfig& cfg) {
        cfg.validate();
        batch.validate();
        const std::size_t n = batch.size();
        const std::size_t d = batch.dim();

        LogisticModel m;
        m.weights_.assign(d, 0.0);

        std::size_t ones = 0;
        for (Label y : batch.labels) ones += y;
        if (ones == 0 || ones == n) {
            m.constant_ = static_cast<Label>(ones == n ? 1 : 0);
            return m;
        }

        std::vector<double> grad(d);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double grad_b = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto x = batch.points[i];
                const double r = sigmoid(m.margin(x)) - static_cast<double>(batch.labels[i]);
                for (std::size_t j = 0; j < d; ++j) grad[j] += r * x[j];
                grad_b += r;
            }
            for (std::size_t j = 0; j < d; ++j)
                m.weights_[j] -= cfg.learning_rate * (grad[j] * inv_n + cfg.l2 * m.weights_[j]);
            m.bias_ -= cfg.learning_rate * grad_b * inv_n;
        }
        return m;
    }

    /// Builds a model from explicit parameters.
    static LogisticModel from_parameters(std::vector<double> weights, double bias) {
        LogisticModel m;
        m.weights_ = std::move(weights);
        m.bias_ = bias;
        return m;
    }

    double margin(PointView x) const {
        double z = bias_;
        for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * x[j];
        return z;
    }

    double probability(PointView x) const {
        if (constant_) return static_cast<double>(*constant_);
        return sigmoid(margin(x));
    }

    // p = 0.5 maps to label 0.
    Label predict(PointView x) const {
        if (constant_) return *constant_;
        return margin(x) > 0.0 ? 1 : 0;
    }

    std::size_t dim() const noexcept { return weights_.size(); }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }

private:
    static double sigmoid(double z) {
        return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    }

    std::vector<double> weights_;
    double bias_ = 0.0;
    std::optional<Label> constant_;
};

} // namespace cara
