#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cara/detectors.hpp"

using namespace cara;

namespace {

std::vector<int> bernoulli(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution b(p);
    std::vector<int> out(n);
    for (auto& x : out) x = b(rng) ? 1 : 0;
    return out;
}

/// Positions at which drift fires, recomputing the statistics from prefix counts since the last reset.
std::vector<std::size_t> reference_ddm(const std::vector<int>& xs, std::size_t min_samples, double drift_sigma) {
    std::vector<std::size_t> fired;
    std::size_t begin = 0;
    double p_min = INFINITY, s_min = INFINITY;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::size_t n = i - begin + 1, errs = 0;
        for (std::size_t j = begin; j <= i; ++j) errs += xs[j];
        const double p = static_cast<double>(errs) / static_cast<double>(n);
        const double s = std::sqrt(p * (1 - p) / static_cast<double>(n));
        if (n < min_samples) continue;
        if (p + s <= p_min + s_min) {
            p_min = p;
            s_min = s;
        }
        if (p + s > p_min + drift_sigma * s_min) {
            fired.push_back(i);
            begin = i + 1;
            p_min = s_min = INFINITY;
        }
    }
    return fired;
}

/// First index at which some split of the full window [0, i] violates the ADWIN bound.
std::optional<std::size_t> first_exact_cut(const std::vector<double>& xs, double delta, std::size_t min_sub) {
    std::vector<double> prefix{0.0};
    for (double x : xs) prefix.push_back(prefix.back() + x);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t w = i + 1;
        const double log_term = std::log(4.0 * static_cast<double>(w) / delta);
        for (std::size_t n0 = min_sub; n0 + min_sub <= w; ++n0) {
            const std::size_t n1 = w - n0;
            const double mu0 = prefix[n0] / static_cast<double>(n0);
            const double mu1 = (prefix[w] - prefix[n0]) / static_cast<double>(n1);
            const double m = 1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
            if (std::abs(mu0 - mu1) >= std::sqrt(log_term / (2.0 * m))) return i;
        }
    }
    return std::nullopt;
}

} // namespace

TEST(Ddm, ConstantZeroNeverDrifts) {
    Ddm d;
    for (int i = 0; i < 10000; ++i) EXPECT_FALSE(d.update(0));
}

TEST(Ddm, ConstantOneNeverDrifts) {
    Ddm d;
    for (int i = 0; i < 10000; ++i) EXPECT_FALSE(d.update(1));
}

TEST(Ddm, NothingBeforeMinSamples) {
    Ddm d(DdmParams{2.0, 3.0, 30});
    for (int i = 0; i < 29; ++i) EXPECT_FALSE(d.update(i < 5 ? 0 : 1));
}

TEST(Ddm, FlagsErrorRateIncreaseInsideHighSegment) {
    std::mt19937_64 rng(42);
    auto xs = bernoulli(rng, 500, 0.1);
    const auto high = bernoulli(rng, 500, 0.9);
    xs.insert(xs.end(), high.begin(), high.end());
    Ddm d;
    std::vector<std::size_t> fired;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (d.update(xs[i])) fired.push_back(i);
    ASSERT_FALSE(fired.empty());
    EXPECT_GE(fired.front(), 500u);
    EXPECT_EQ(fired, reference_ddm(xs, 30, 3.0));
}

TEST(Ddm, MatchesReferenceOnRandomStreams) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto xs = bernoulli(rng, 300, 0.05 + 0.02 * trial);
        const auto tail = bernoulli(rng, 300, 0.5 + 0.02 * trial);
        xs.insert(xs.end(), tail.begin(), tail.end());
        Ddm d;
        std::vector<std::size_t> fired;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (d.update(xs[i])) fired.push_back(i);
        EXPECT_EQ(fired, reference_ddm(xs, 30, 3.0)) << "trial " << trial;
    }
}

TEST(Ddm, ResetsAfterDrift) {
    Ddm d;
    for (int i = 0; i < 100; ++i) d.update(0);
    bool fired = false;
    for (int i = 0; i < 100 && !fired; ++i) fired = d.update(1);
    ASSERT_TRUE(fired);
    EXPECT_EQ(d.samples(), 0u);
}

TEST(Ddm, WarningPrecedesDrift) {
    std::mt19937_64 rng(3);
    const auto low = bernoulli(rng, 400, 0.1);
    const auto high = bernoulli(rng, 400, 0.5);
    Ddm d;
    bool warned = false;
    for (int x : low) warned = (d.update(x), warned || d.in_warning());
    for (int x : high) {
        if (d.update(x)) break;
        warned = warned || d.in_warning();
    }
    EXPECT_TRUE(warned);
}

TEST(Adwin, ConstantStreamsNeverDrift) {
    for (double v : {0.0, 1.0, 0.37}) {
        Adwin a;
        for (int i = 0; i < 10000; ++i) ASSERT_FALSE(a.update(v)) << "value " << v << " step " << i;
        EXPECT_EQ(a.width(), 10000u);
    }
}

TEST(Adwin, AlternatingStreamNeverDrifts) {
    Adwin a;
    for (int i = 0; i < 10000; ++i) ASSERT_FALSE(a.update(i % 2)) << "step " << i;
}

TEST(Adwin, DetectsMeanShiftAndShrinks) {
    std::vector<double> xs(1000, 0.0);
    xs.insert(xs.end(), 1000, 1.0);
    Adwin a;
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (a.update(xs[i]) && !first) first = i;
    ASSERT_TRUE(first);
    EXPECT_GE(*first, 1000u);
    EXPECT_LT(a.width(), 2000u);
    EXPECT_GT(a.mean(), 0.9);

    // bucket boundaries are a subset of all split points, so the exact check cannot fire later
    const auto exact = first_exact_cut(xs, 0.002, 5);
    ASSERT_TRUE(exact);
    EXPECT_LE(*exact, *first);
    EXPECT_LE(*first, *exact + 64);
}

TEST(Adwin, BucketCountIsLogarithmic) {
    Adwin a;
    for (int i = 0; i < 100000; ++i) a.update(0.5);
    EXPECT_LE(a.bucket_count(), 6u * 18u);
}

TEST(Adwin, RejectsBadParams) {
    EXPECT_THROW(Adwin(AdwinParams{0.0}), InvalidInput);
    EXPECT_THROW(Adwin(AdwinParams{1.0}), InvalidInput);
    EXPECT_THROW(Adwin(AdwinParams{0.01, 1}), InvalidInput);
}
