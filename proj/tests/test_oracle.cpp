#include <gtest/gtest.h>

#include <sstream>

#include "cara/oracle.hpp"
#include "cara/scenarios.hpp"
#include "support.hpp"

using namespace cara;

TEST(MemoizeDp, SingleBatchMustTrain) {
    const CostMatrix c(7, {2.5});
    const auto v = memoize_dp(c);
    EXPECT_EQ(v(0, 0), 2.5);
    EXPECT_EQ(v.optimal_cost(), 2.5);
    EXPECT_EQ(oracle_retrains(v).batches, (std::set<BatchIndex>{7}));
}

TEST(MemoizeDp, TwoBatchHandEnumeration) {
    CostMatrix c(0, {1.0, 1.0});
    c.set_staleness(0, 1, 5.0);
    const auto v = memoize_dp(c);
    EXPECT_EQ(v(1, 0), 6.0); // keep: 1 + 5
    EXPECT_EQ(v(1, 1), 2.0); // retrain: 1 + 1
    EXPECT_EQ(oracle_retrains(v).batches, (std::set<BatchIndex>{0, 1}));

    c.set_staleness(0, 1, 0.5);
    EXPECT_EQ(oracle_retrains(memoize_dp(c)).batches, (std::set<BatchIndex>{0}));
}

TEST(MemoizeDp, MatchesBruteForceOnRandomMatrices) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const double kappa = std::vector<double>{0.0, 0.5, 2.0}[trial % 3];
        const auto c = cara_test::random_matrix(rng, trial % 4, 10, kappa);
        EXPECT_NEAR(memoize_dp(c).optimal_cost(), cara_test::brute_force_min_cost(c), 1e-9);
    }
}

TEST(MemoizeDp, CellsAreBestCostsEndingWithModelP) {
    std::mt19937_64 rng(5);
    const auto c = cara_test::random_matrix(rng, 0, 7, 0.8);
    const auto v = memoize_dp(c);
    // brute force: best cost through t among strategies with s_t = p
    for (std::size_t t = 0; t < 7; ++t) {
        for (std::size_t p = 0; p <= t; ++p) {
            double best = kInfinity;
            for (unsigned long mask = 0; mask < (1UL << t); ++mask) {
                const auto s = cara_test::strategy_from_mask(0, t + 1, mask);
                if (s.served_by.back() == p) best = std::min(best, cara_test::naive_cost(s.served_by, 0, c));
            }
            EXPECT_NEAR(v(t, p), best, 1e-12) << "t=" << t << " p=" << p;
        }
        for (std::size_t p = t + 1; p < 7; ++p) EXPECT_EQ(v(t, p), kInfinity);
    }
}

TEST(OracleRetrains, ZeroStalenessKeepsInitialModel) {
    const CostMatrix c(0, std::vector<double>(6, 1.0));
    EXPECT_EQ(oracle_retrains(memoize_dp(c)).batches, (std::set<BatchIndex>{0}));
}

TEST(OracleRetrains, FreeRetrainingAndCostlyKeepRetrainsEverywhere) {
    std::mt19937_64 rng(6);
    const auto c = cara_test::random_matrix(rng, 3, 6, 0.0, 0.1, 1.0);
    EXPECT_EQ(oracle_retrains(memoize_dp(c)).batches, (std::set<BatchIndex>{3, 4, 5, 6, 7, 8}));
}

TEST(OracleRetrains, NearQueryScenarioRetrainsAtTwo) {
    const auto spec = linear_drift_scenario(true);
    const auto s = make_scenario_stream(spec);
    ModelBank bank(s, scenario_model());
    const auto c = build_cost_matrix(bank, 0, 3, std::vector<double>(4, 1.0), KernelConfig{spec.gamma});
    EXPECT_EQ(oracle_retrains(memoize_dp(c)).batches, (std::set<BatchIndex>{0, 2}));
}

TEST(OracleRetrains, FarQueryScenarioKeepsInitialModel) {
    const auto spec = linear_drift_scenario(false);
    const auto s = make_scenario_stream(spec);
    ModelBank bank(s, scenario_model());
    const auto c = build_cost_matrix(bank, 0, 3, std::vector<double>(4, 1.0), KernelConfig{spec.gamma});
    EXPECT_EQ(oracle_retrains(memoize_dp(c)).batches, (std::set<BatchIndex>{0}));
}

TEST(ExpandToStrategy, Examples) {
    EXPECT_EQ(expand_to_strategy({{0}}, 0, 3).served_by, (std::vector<BatchIndex>{0, 0, 0, 0}));
    EXPECT_EQ(expand_to_strategy({{0, 2}}, 0, 3).served_by, (std::vector<BatchIndex>{0, 0, 2, 2}));
    EXPECT_THROW(expand_to_strategy({{1, 2}}, 0, 3), ContractViolation);
    EXPECT_THROW(expand_to_strategy({{0, 4}}, 0, 3), ContractViolation);
}

TEST(OracleStrategy, CostEqualsDpOptimumAndIsValid) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const auto c = cara_test::random_matrix(rng, 10, n, 0.5 * (trial % 4));
        const auto s = oracle_strategy(c);
        EXPECT_FALSE(validate_strategy(s));
        EXPECT_NEAR(strategy_cost(s, c), memoize_dp(c).optimal_cost(), 1e-12);
    }
}

TEST(OracleStrategy, TiesPreferEarlierModels) {
    // keeping and retraining cost the same at batch 1; the smallest index wins
    CostMatrix c(0, {1.0, 1.0, 1.0});
    c.set_staleness(0, 1, 1.0);
    EXPECT_EQ(oracle_retrains(memoize_dp(c)).batches, (std::set<BatchIndex>{0}));
}

TEST(OracleStrategy, NeverWorseThanAnyStrategy) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = cara_test::random_matrix(rng, 0, 8, 1.0);
        const double best = strategy_cost(oracle_strategy(c), c);
        for (int k = 0; k < 20; ++k)
            EXPECT_LE(best, strategy_cost(cara_test::strategy_from_mask(0, 8, rng() % 128), c) + 1e-12);
    }
}

TEST(DpTableCsv, HasHeaderAndOneRowPerCell) {
    CostMatrix c(4, {1.0, 1.0});
    c.set_staleness(4, 5, 0.25);
    std::stringstream ss;
    write_dp_table_csv(ss, memoize_dp(c));
    EXPECT_EQ(ss.str(), "t,p,value\n4,4,1\n4,5,inf\n5,4,1.25\n5,5,2\n");
}
