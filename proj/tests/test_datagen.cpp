#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cara/datagen.hpp"
#include "support.hpp"

using namespace cara;

namespace {

std::vector<std::vector<double>> rows(const Points& p) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back(p[i].begin(), p[i].end());
    return out;
}

} // namespace

TEST(Gauss, CenterFormulaAndPeriod) {
    EXPECT_EQ(gauss_center(14), 0.0);
    EXPECT_DOUBLE_EQ(gauss_center(0), 1.0 / 30.0);
    for (BatchIndex t = 0; t < 60; ++t) EXPECT_EQ(gauss_center(t), gauss_center(t + 15));
}

TEST(Gauss, LabelIsParabolaBoundary) {
    EXPECT_EQ(gauss_label(std::vector<double>{0.5, 0.1}), 1);
    EXPECT_EQ(gauss_label(std::vector<double>{0.0, 0.5}), 0);
    EXPECT_EQ(gauss_label(std::vector<double>{0.0, 1.5}), 1);
}

TEST(Circle, LabelsInsideAndFarOutside) {
    const CircleConcept c{0.5, 0.5, 0.3, 0};
    EXPECT_EQ(circle_label(std::vector<double>{0.5, 0.5}, c), 0);
    StreamSpec spec;
    spec.dataset = Dataset::circle;
    for (const auto& concept_ : spec.effective_circle_schedule())
        EXPECT_EQ(circle_label(std::vector<double>{0.99, 0.99}, concept_), 1);
}

TEST(Circle, ScheduleBoundary) {
    StreamSpec spec;
    spec.dataset = Dataset::circle;
    const auto sched = spec.effective_circle_schedule();
    ASSERT_EQ(sched.size(), 4u);
    EXPECT_EQ(sched[1].from_batch, 25u);
    EXPECT_EQ(circle_concept_at(sched, 24).c1, sched[0].c1);
    EXPECT_EQ(circle_concept_at(sched, 25).c1, sched[1].c1);
    EXPECT_EQ(circle_concept_at(sched, 99).c1, sched[3].c1);
}

TEST(CovCon, MeanAndFlip) {
    EXPECT_EQ(covcon_mean(6), 0.0);
    EXPECT_DOUBLE_EQ(covcon_mean(0), 0.1);
    for (BatchIndex t = 0; t < 10; ++t) EXPECT_EQ(covcon_label(std::vector<double>{0.5, 0.5}, t, 1.0), 1);
    for (BatchIndex t = 10; t < 20; ++t) EXPECT_EQ(covcon_label(std::vector<double>{0.5, 0.5}, t, 1.0), 0);
    EXPECT_EQ(covcon_label(std::vector<double>{0.5, 0.5}, 20, 1.0), 1);
}

TEST(Generate, ShapesAndDeterminism) {
    for (auto d : {Dataset::gauss, Dataset::circle, Dataset::covcon}) {
        auto spec = cara_test::small_spec(d, 6, 50, 7);
        const auto a = generate_stream(spec);
        EXPECT_NO_THROW(a.validate());
        ASSERT_EQ(a.size(), 6u);
        for (std::size_t t = 0; t < 6; ++t) {
            EXPECT_EQ(a.data[t].size(), 50u);
            EXPECT_EQ(a.queries[t].size(), 7u);
            EXPECT_EQ(a.data[t].dim(), 2u);
        }
        EXPECT_EQ(a, generate_stream(spec));
        spec.seed = 1;
        EXPECT_NE(a.data[0].points, generate_stream(spec).data[0].points);
    }
}

TEST(Generate, LabelsFollowTheConcept) {
    for (auto d : {Dataset::gauss, Dataset::circle, Dataset::covcon}) {
        const auto spec = cara_test::small_spec(d, 30, 40, 4);
        const auto s = generate_stream(spec);
        for (const auto& b : s.data)
            for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.labels[i], concept_label(spec, b.points[i], b.t));
    }
}

TEST(Generate, BatchesAreIndependentOfStreamLength) {
    const auto short_s = generate_stream(cara_test::small_spec(Dataset::covcon, 5, 30, 3));
    const auto long_s = generate_stream(cara_test::small_spec(Dataset::covcon, 9, 30, 3));
    for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(short_s.data[t], long_s.data[t]);
}

TEST(Queries, ModeDSamplesDistinctDataPoints) {
    const auto spec = cara_test::small_spec(Dataset::gauss, 4, 60, 20);
    const auto s = generate_stream(spec);
    for (std::size_t t = 0; t < 4; ++t) {
        const auto data = rows(s.data[t].points);
        std::set<std::vector<double>> seen;
        for (std::size_t i = 0; i < s.queries[t].size(); ++i) {
            const std::vector<double> q(s.queries[t].queries[i].begin(), s.queries[t].queries[i].end());
            const auto it = std::find(data.begin(), data.end(), q);
            ASSERT_NE(it, data.end());
            EXPECT_EQ((*s.queries[t].eval_labels)[i], s.data[t].labels[static_cast<std::size_t>(it - data.begin())]);
            seen.insert(q);
        }
        EXPECT_EQ(seen.size(), s.queries[t].size());
    }
}

TEST(Queries, ModeDFullSampleIsPermutation) {
    const auto s = generate_stream(cara_test::small_spec(Dataset::circle, 2, 25, 25));
    auto a = rows(s.data[1].points);
    auto b = rows(s.queries[1].queries);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
}

TEST(Queries, ModeSLabelsFlipWithConcept) {
    auto spec = cara_test::small_spec(Dataset::covcon, 20, 30, 50);
    spec.query_mode = QueryMode::static_gaussian;
    const auto s = generate_stream(spec);
    for (BatchIndex t : {3u, 13u}) {
        const auto& q = s.queries[t];
        for (std::size_t i = 0; i < q.size(); ++i) {
            const Label unflipped = covcon_label(q.queries[i], 0, 1.0);
            EXPECT_EQ((*q.eval_labels)[i], t < 10 ? unflipped : 1 - unflipped);
        }
    }
}

TEST(Queries, SampleWithoutReplacementChecksCount) {
    Rng rng(1);
    EXPECT_THROW(sample_without_replacement(3, 4, rng), InvalidInput);
    const auto idx = sample_without_replacement(10, 10, rng);
    EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 10u);
}

TEST(StreamSpecChecks, RejectsBadSpecs) {
    StreamSpec s;
    s.batch_size = 10;
    s.queries_per_batch = 11;
    EXPECT_THROW(s.validate(), InvalidInput);
    s.query_mode = QueryMode::static_gaussian;
    EXPECT_NO_THROW(s.validate());
    s.n_batches = 0;
    EXPECT_THROW(s.validate(), InvalidInput);
    EXPECT_THROW(gen_batch(5, cara_test::small_spec(Dataset::gauss, 5, 10, 2)), InvalidInput);
}

TEST(Names, ParseAndPrint) {
    EXPECT_EQ(parse_dataset("covcon"), Dataset::covcon);
    EXPECT_EQ(parse_query_mode("S"), QueryMode::static_gaussian);
    EXPECT_THROW(parse_dataset("sea"), InvalidInput);
    StreamSpec s;
    s.dataset = Dataset::gauss;
    s.query_mode = QueryMode::static_gaussian;
    EXPECT_EQ(s.name(), "gauss-S");
}
