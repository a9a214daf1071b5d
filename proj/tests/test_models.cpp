#include <gtest/gtest.h>

#include <random>

#include "cara/classifier.hpp"
#include "support.hpp"

using namespace cara;

namespace {

DataBatch two_clusters() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    DataBatch b{0, Points(2), {}};
    for (int i = 0; i < 10; ++i) {
        b.points.push_back(std::vector<double>{jitter(rng), jitter(rng)});
        b.labels.push_back(0);
        b.points.push_back(std::vector<double>{1.0 + jitter(rng), 1.0 + jitter(rng)});
        b.labels.push_back(1);
    }
    return b;
}

DataBatch xor_clusters() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    DataBatch b{0, Points(2), {}};
    const double corners[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < 25; ++i) {
            b.points.push_back(std::vector<double>{corners[c][0] + jitter(rng), corners[c][1] + jitter(rng)});
            b.labels.push_back(c < 2 ? 0 : 1);
        }
    return b;
}

double training_accuracy(const Classifier& m, const DataBatch& b) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < b.size(); ++i) ok += m.predict(b.points[i]) == b.labels[i];
    return static_cast<double>(ok) / static_cast<double>(b.size());
}

std::vector<std::vector<double>> probe_grid() {
    std::vector<std::vector<double>> g;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) g.push_back({i / 10.0 * 1.4 - 0.2, j / 10.0 * 1.4 - 0.2});
    return g;
}

} // namespace

TEST(Logistic, SeparatesTwoClusters) {
    const auto b = two_clusters();
    LogisticConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 200;
    const auto m = fit_logistic(b, cfg);
    EXPECT_DOUBLE_EQ(training_accuracy(m, b), 1.0);
    EXPECT_EQ(m.predict(std::vector<double>{1.0, 1.0}), 1);
    EXPECT_EQ(m.predict(std::vector<double>{0.0, 0.0}), 0);
}

TEST(Logistic, SingleClassIsConstant) {
    auto b = cara_test::make_batch(0, {{0.0, 0.0}, {5.0, -3.0}}, {1, 1});
    const auto m = fit_logistic(b, {});
    for (const auto& p : probe_grid()) EXPECT_EQ(m.predict(p), 1);
    b.labels = {0, 0};
    const auto z = fit_logistic(b, {});
    for (const auto& p : probe_grid()) EXPECT_EQ(z.predict(p), 0);
}

TEST(Logistic, DeterministicRefit) {
    const auto b = two_clusters();
    const auto a = fit_logistic(b, {});
    const auto c = fit_logistic(b, {});
    for (const auto& p : probe_grid()) EXPECT_EQ(a.predict(p), c.predict(p));
    EXPECT_EQ(a.logistic()->weights(), c.logistic()->weights());
}

TEST(Logistic, HalfProbabilityMapsToZero) {
    const auto m = LogisticModel::from_parameters({0.0, 0.0}, 0.0);
    EXPECT_DOUBLE_EQ(m.probability(std::vector<double>{3.0, 4.0}), 0.5);
    EXPECT_EQ(m.predict(std::vector<double>{3.0, 4.0}), 0);
}

TEST(Logistic, RejectsBadConfig) {
    const auto b = two_clusters();
    LogisticConfig cfg;
    cfg.learning_rate = 0.0;
    EXPECT_THROW(fit_logistic(b, cfg), InvalidInput);
    cfg = {};
    cfg.epochs = 0;
    EXPECT_THROW(fit_logistic(b, cfg), InvalidInput);
}

TEST(Forest, FitsXorClusters) {
    const auto b = xor_clusters();
    ForestConfig cfg;
    cfg.n_trees = 25;
    cfg.max_depth = 4;
    const auto m = fit_forest(b, cfg);
    EXPECT_GE(training_accuracy(m, b), 0.95);
}

TEST(Forest, SingleClassIsConstant) {
    const auto b = cara_test::make_batch(0, {{0.0, 0.0}, {1.0, 1.0}, {0.3, 0.9}}, {1, 1, 1});
    const auto m = fit_forest(b, cara_test::small_forest());
    for (const auto& p : probe_grid()) EXPECT_EQ(m.predict(p), 1);
}

TEST(Forest, OneUnbaggedTreeEqualsDeterministicTree) {
    const auto b = xor_clusters();
    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    cfg.max_depth = 30;
    const auto forest = fit_forest(b, cfg);
    const auto tree = DecisionTree::fit(b, 30);
    for (const auto& p : probe_grid()) EXPECT_EQ(forest.predict(p), tree.predict(p));
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(tree.predict(b.points[i]), b.labels[i]);
}

TEST(Forest, SameSeedSamePredictions) {
    const auto b = xor_clusters();
    auto cfg = cara_test::small_forest();
    cfg.seed = 3;
    const auto a = fit_forest(b, cfg);
    const auto c = fit_forest(b, cfg);
    for (const auto& p : probe_grid()) EXPECT_EQ(a.predict(p), c.predict(p));
}

TEST(Forest, RespectsMaxDepth) {
    const auto b = xor_clusters();
    ForestConfig cfg;
    cfg.n_trees = 3;
    cfg.max_depth = 2;
    const auto m = fit_forest(b, cfg);
    for (const auto& t : m.forest()->trees()) EXPECT_LE(t.depth(), 2u);
}

TEST(Classifier, PredictChecksDimension) {
    const auto m = cara_test::constant_model(1, 2, 0);
    EXPECT_THROW(m.predict(std::vector<double>{1.0}), InvalidInput);
    EXPECT_EQ(m.predict(std::vector<double>{1.0, 2.0}), 1);
    EXPECT_EQ(m.trained_at(), 0u);
}

TEST(Classifier, FitModelDispatchesOnConfig) {
    const auto b = two_clusters();
    EXPECT_EQ(fit_model(b, LogisticConfig{}).kind(), ModelKind::logistic);
    EXPECT_EQ(fit_model(b, cara_test::small_forest()).kind(), ModelKind::forest);
}
