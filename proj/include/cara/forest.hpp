#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cara/random.hpp"
#include "cara/types.hpp"

namespace cara {

struct ForestConfig {
    int n_trees = 20;
    int max_depth = 8;
    double feature_fraction = 1.0;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_trees < 1) throw InvalidInput("forest n_trees must be >= 1");
        if (max_depth < 1) throw InvalidInput("forest max_depth must be >= 1");
        if (!(feature_fraction > 0.0 && feature_fraction <= 1.0))
            throw InvalidInput("forest feature_fraction must be in (0, 1]");
    }
};

/// Binary CART tree grown greedily on Gini impurity.
///
/// Thresholds are midpoints between consecutive distinct sorted values; a point goes
/// left when x[feature] <= threshold. Among equally good splits the lowest feature index
/// wins, then the smallest threshold. Leaves predict the majority label, ties -> 0.
class DecisionTree {
public:
    struct Node {
        std::int32_t feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        Label label = 0;
    };

    /// Grows a tree on `sample` (indices into `batch`, repeats allowed).
    /// `features_per_split` < d draws a fresh feature subset at every node from `rng`.
    static DecisionTree grow(const DataBatch& batch, std::vector<std::size_t> sample, int max_depth,
                             std::size_t features_per_split, Rng& rng) {
        DecisionTree tree;
        tree.dim_ = batch.dim();
        Builder b{batch, tree.nodes_, max_depth, std::min(features_per_split, batch.dim()), rng, {}};
        b.build(sample, 0);
        return tree;
    }

    /// Deterministic single-tree fit on the full batch with all features.
    static DecisionTree fit(const DataBatch& batch, int max_depth) {
        batch.validate();
        std::vector<std::size_t> all(batch.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        Rng unused(0);
        return grow(batch, std::move(all), max_depth, batch.dim(), unused);
    }

    Label predict(PointView x) const {
        std::int32_t i = 0;
        while (nodes_[i].feature >= 0) {
            const Node& n = nodes_[i];
            i = x[n.feature] <= n.threshold ? n.left : n.right;
        }
        return nodes_[i].label;
    }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t depth() const {
        std::size_t best = 0;
        std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
        while (!stack.empty()) {
            auto [i, dep] = stack.back();
            stack.pop_back();
            best = std::max(best, dep);
            if (nodes_[i].feature >= 0) {
                stack.push_back({nodes_[i].left, dep + 1});
                stack.push_back({nodes_[i].right, dep + 1});
            }
        }
        return best;
    }

private:
    struct Builder {
        const DataBatch& batch;
        std::vector<Node>& nodes;
        int max_depth;
        std::size_t features_per_split;
        Rng& rng;
        std::vector<std::pair<double, Label>> scratch;

        std::int32_t build(std::vector<std::size_t>& idx, int depth) {
            const auto self = static_cast<std::int32_t>(nodes.size());
            nodes.push_back({});

            std::size_t ones = 0;
            for (auto i : idx) ones += batch.labels[i];
            const std::size_t n = idx.size();
            nodes[self].label = (2 * ones > n) ? 1 : 0;
            if (depth >= max_depth || ones == 0 || ones == n || n < 2) return self;

            const auto features = pick_features();
            const double total_pos = static_cast<double>(ones);
            const double total = static_cast<double>(n);

            bool found = false;
            double best_score = 0.0;
            std::size_t best_feature = 0;
            double best_threshold = 0.0;

            for (std::size_t f : features) {
                scratch.clear();
                for (auto i : idx) scratch.emplace_back(batch.points[i][f], batch.labels[i]);
                std::sort(scratch.begin(), scratch.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                double left_n = 0.0, left_pos = 0.0;
                for (std::size_t k = 0; k + 1 < scratch.size(); ++k) {
                    left_n += 1.0;
                    left_pos += scratch[k].second;
                    if (scratch[k].first == scratch[k + 1].first) continue;
                    const double right_n = total - left_n;
                    const double right_pos = total_pos - left_pos;
                    // weighted Gini, scaled by n: sum over children of n_c * (1 - p^2 - q^2)
                    const double score = gini_mass(left_pos, left_n) + gini_mass(right_pos, right_n);
                    const double threshold = scratch[k].first + (scratch[k + 1].first - scratch[k].first) / 2.0;
                    // Features are scanned ascending and thresholds ascending, so strict < keeps the
                    // lowest feature / smallest threshold among ties.
                    if (!found || score < best_score) {
                        found = true;
                        best_score = score;
                        best_feature = f;
                        best_threshold = threshold;
                    }
                }
            }
            if (!found) return self;

            std::vector<std::size_t> left, right;
            left.reserve(n);
            right.reserve(n);
            for (auto i : idx) (batch.points[i][best_feature] <= best_threshold ? left : right).push_back(i);
            idx.clear();
            idx.shrink_to_fit();

            nodes[self].feature = static_cast<std::int32_t>(best_feature);
            nodes[self].threshold = best_threshold;
            const auto l = build(left, depth + 1);
            nodes[self].left = l;
            const auto r = build(right, depth + 1);
            nodes[self].right = r;
            return self;
        }

        static double gini_mass(double pos, double n) {
            if (n <= 0.0) return 0.0;
            const double p = pos / n;
            return n * (2.0 * p * (1.0 - p));
        }

        std::vector<std::size_t> pick_features() {
            const std::size_t d = batch.dim();
            std::vector<std::size_t> all(d);
            std::iota(all.begin(), all.end(), std::size_t{0});
            if (features_per_split >= d) return all;
            // partial Fisher-Yates, then restore ascending order for the tie rule
            for (std::size_t i = 0; i < features_per_split; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, d - 1);
                std::swap(all[i], all[pick(rng)]);
            }
            all.resize(features_per_split);
            std::sort(all.begin(), all.end());
            return all;
        }
    };

    std::vector<Node> nodes_;
    std::size_t dim_ = 0;
};

/// Bagged CART ensemble; prediction is the majority vote with ties -> 0.
class ForestModel {
public:
    ForestModel() = default;

    static ForestModel fit(const DataBatch& batch, const ForestConfig& cfg) {
        cfg.validate();
        batch.validate();
        const std::size_t n = batch.size();
        const std::size_t d = batch.dim();
        const auto per_split = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(cfg.feature_fraction * static_cast<double>(d))));

        ForestModel m;
        m.dim_ = d;
        m.trees_.reserve(static_cast<std::size_t>(cfg.n_trees));
        for (int k = 0; k < cfg.n_trees; ++k) {
            Rng rng(derive_seed(cfg.seed, {seed_tag::model, batch.t, static_cast<std::uint64_t>(k)}));
            std::vector<std::size_t> sample(n);
            if (cfg.bootstrap) {
                std::uniform_int_distribution<std::size_t> draw(0, n - 1);
                for (auto& s : sample) s = draw(rng);
            } else {
                std::iota(sample.begin(), sample.end(), std::size_t{0});
            }
            m.trees_.push_back(DecisionTree::grow(batch, std::move(sample), cfg.max_depth, per_split, rng));
        }
        return m;
    }

    Label predict(PointView x) const {
        std::size_t votes = 0;
        for (const auto& t : trees_) votes += t.predict(x);
        return 2 * votes > trees_.size() ? 1 : 0;
    }

    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
    std::size_t dim() const noexcept { return dim_; }

private:
    std::vector<DecisionTree> trees_;
    std::size_t dim_ = 0;
};

} // namespace cara
