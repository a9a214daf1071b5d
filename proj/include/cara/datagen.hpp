#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "cara/random.hpp"
#include "cara/types.hpp"

namespace cara {

enum class Dataset { gauss, circle, covcon };
enum class QueryMode { data, static_gaussian };

inline std::string_view to_string(Dataset d) {
    switch (d) {
    case Dataset::gauss: return "gauss";
    case Dataset::circle: return "circle";
    case Dataset::covcon: return "covcon";
    }
    return "?";
}
inline std::string_view to_string(QueryMode m) { return m == QueryMode::data ? "D" : "S"; }

inline Dataset parse_dataset(std::string_view s) {
    if (s == "gauss") return Dataset::gauss;
    if (s == "circle") return Dataset::circle;
    if (s == "covcon") return Dataset::covcon;
    throw InvalidInput("unknown dataset '" + std::string(s) + "'");
}
inline QueryMode parse_query_mode(std::string_view s) {
    if (s == "D" || s == "d") return QueryMode::data;
    if (s == "S" || s == "s") return QueryMode::static_gaussian;
    throw InvalidInput("unknown query mode '" + std::string(s) + "' (expected D or S)");
}

/// One circle concept: label 1 iff (x1-c1)^2 + (x2-c2)^2 - r^2 > 0, active from `from_batch` on.
struct CircleConcept {
    double c1, c2, r;
    BatchIndex from_batch;
};

struct StreamSpec {
    Dataset dataset = Dataset::covcon;
    std::size_t n_batches = 100;
    std::size_t batch_size = 1000;
    std::size_t queries_per_batch = 100;
    QueryMode query_mode = QueryMode::data;
    std::uint64_t seed = 0;

    double covcon_alpha = 1.0;
    double gauss_sigma = 0.1;
    // Empty means four concepts switched at equal quarters of the stream.
    std::vector<CircleConcept> circle_schedule;

    double static_query_center = 0.5;
    double static_query_sigma = 0.015;

    void validate() const {
        if (n_batches < 1) throw InvalidInput("n_batches must be >= 1");
        if (batch_size < 1) throw InvalidInput("batch_size must be >= 1");
        if (queries_per_batch < 1) throw InvalidInput("queries_per_batch must be >= 1");
        if (query_mode == QueryMode::data && queries_per_batch > batch_size)
            throw InvalidInput("queries_per_batch exceeds batch_size in data-sampled query mode");
        if (!(gauss_sigma > 0.0)) throw InvalidInput("gauss_sigma must be > 0");
    }

    std::vector<CircleConcept> effective_circle_schedule() const {
        if (!circle_schedule.empty()) return circle_schedule;
        const std::size_t q = n_batches / 4;
        return {{0.2, 0.5, 0.15, 0}, {0.4, 0.5, 0.2, q}, {0.6, 0.5, 0.25, 2 * q}, {0.8, 0.5, 0.3, 3 * q}};
    }

    std::string name() const { return std::string(to_string(dataset)) + "-" + std::string(to_string(query_mode)); }
};

// ---- concepts -----------------------------------------------------------------------

inline double gauss_center(BatchIndex t) { return static_cast<double>((t + 1) % 15) / 30.0; }

inline Label gauss_label(PointView x) { return x[1] > 4.0 * (x[0] - 0.5) * (x[0] - 0.5) ? 1 : 0; }

inline const CircleConcept& circle_concept_at(const std::vector<CircleConcept>& schedule, BatchIndex t) {
    if (schedule.empty()) throw InvalidInput("circle schedule is empty");
    const CircleConcept* active = &schedule.front();
    for (const auto& c : schedule)
        if (c.from_batch <= t) active = &c;
    return *active;
}

inline Label circle_label(PointView x, const CircleConcept& c) {
    const double dx = x[0] - c.c1, dy = x[1] - c.c2;
    return dx * dx + dy * dy - c.r * c.r > 0.0 ? 1 : 0;
}

inline double covcon_mean(BatchIndex t) { return static_cast<double>((t + 1) % 7) / 10.0; }

inline bool covcon_flipped(BatchIndex t) { return (t / 10) % 2 == 1; }

inline Label covcon_label(PointView x, BatchIndex t, double alpha) {
    const bool above = alpha * std::sin(std::numbers::pi * x[0]) > x[1];
    return (above != covcon_flipped(t)) ? 1 : 0;
}

/// Ground-truth label of `x` under the concept active at batch t.
inline Label concept_label(const StreamSpec& spec, PointView x, BatchIndex t) {
    switch (spec.dataset) {
    case Dataset::gauss: return gauss_label(x);
    case Dataset::circle: return circle_label(x, circle_concept_at(spec.effective_circle_schedule(), t));
    case Dataset::covcon: return covcon_label(x, t, spec.covcon_alpha);
    }
    return 0;
}

// ---- generators ---------------------------------------------------------------------

namespace detail {

inline void check_batch(const StreamSpec& spec, BatchIndex t) {
    spec.validate();
    if (t >= spec.n_batches) throw InvalidInput("batch index beyond n_batches");
}

template <class Sample>
DataBatch make_batch(const StreamSpec& spec, BatchIndex t, Sample&& sample) {
    Rng rng(derive_seed(spec.seed, {seed_tag::data, static_cast<std::uint64_t>(spec.dataset), t}));
    DataBatch b{t, Points(2), {}};
    b.labels.reserve(spec.batch_size);
    std::vector<double> p(2);
    for (std::size_t i = 0; i < spec.batch_size; ++i) {
        sample(rng, p);
        b.points.push_back(p);
        b.labels.push_back(concept_label(spec, p, t));
    }
    return b;
}

} // namespace detail

inline DataBatch gen_gauss(BatchIndex t, const StreamSpec& spec) {
    detail::check_batch(spec, t);
    const double c = gauss_center(t);
    std::normal_distribution<double> n1(c, spec.gauss_sigma), n2(0.5 - c, spec.gauss_sigma);
    return detail::make_batch(spec, t, [&](Rng& rng, std::vector<double>& p) {
        p[0] = n1(rng);
        p[1] = n2(rng);
    });
}

inline DataBatch gen_circle(BatchIndex t, const StreamSpec& spec) {
    detail::check_batch(spec, t);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return detail::make_batch(spec, t, [&](Rng& rng, std::vector<double>& p) {
        p[0] = u(rng);
        p[1] = u(rng);
    });
}

inline DataBatch gen_covcon(BatchIndex t, const StreamSpec& spec) {
    detail::check_batch(spec, t);
    std::normal_distribution<double> n(covcon_mean(t), 0.1);
    return detail::make_batch(spec, t, [&](Rng& rng, std::vector<double>& p) {
        p[0] = n(rng);
        p[1] = n(rng);
    });
}

inline DataBatch gen_batch(BatchIndex t, const StreamSpec& spec) {
    switch (spec.dataset) {
    case Dataset::gauss: return gen_gauss(t, spec);
    case Dataset::circle: return gen_circle(t, spec);
    case Dataset::covcon: return gen_covcon(t, spec);
    }
    throw InvalidInput("unknown dataset");
}

/// Draws `count` distinct indices from [0, n) with a seeded partial shuffle.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng) {
    if (count > n) throw InvalidInput("cannot sample more entries than exist");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    return idx;
}

/// Queries for batch t: sampled from the data batch (mode D, labels copied) or drawn from the
/// static Gaussian (mode S, labels from the concept active at t).
inline QueryBatch make_queries(BatchIndex t, const DataBatch& data, const StreamSpec& spec) {
    data.validate();
    Rng rng(derive_seed(spec.seed, {seed_tag::queries, static_cast<std::uint64_t>(spec.dataset), t}));
    QueryBatch q{t, Points(data.dim()), std::vector<Label>{}};
    if (spec.query_mode == QueryMode::data) {
        if (spec.queries_per_batch > data.size())
            throw InvalidInput("queries_per_batch exceeds the data batch size");
        for (auto i : sample_without_replacement(data.size(), spec.queries_per_batch, rng)) {
            q.queries.push_back(data.points[i]);
            q.eval_labels->push_back(data.labels[i]);
        }
    } else {
        std::normal_distribution<double> n(spec.static_query_center, spec.static_query_sigma);
        std::vector<double> p(2);
        for (std::size_t i = 0; i < spec.queries_per_batch; ++i) {
            p[0] = n(rng);
            p[1] = n(rng);
            q.queries.push_back(p);
            q.eval_labels->push_back(concept_label(spec, p, t));
        }
    }
    return q;
}

inline Stream generate_stream(const StreamSpec& spec) {
    spec.validate();
    Stream s;
    s.data.reserve(spec.n_batches);
    s.queries.reserve(spec.n_batches);
    for (BatchIndex t = 0; t < spec.n_batches; ++t) {
        s.data.push_back(gen_batch(t, spec));
        s.queries.push_back(make_queries(t, s.data.back(), spec));
    }
    return s;
}

} // namespace cara
