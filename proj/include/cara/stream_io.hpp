#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cara/cost_matrix.hpp"
#include "cara/datagen.hpp"
#include "cara/types.hpp"

namespace cara {

// Stream CSV: header `t,f0,...,f{d-1},label,is_query`; one row per data point (is_query = 0)
// and per query (is_query = 1, label = evaluation label).

inline void write_stream_csv(std::ostream& os, const Stream& s) {
    s.validate();
    const std::size_t d = s.dim();
    os << 't';
    for (std::size_t j = 0; j < d; ++j) os << ",f" << j;
    os << ",label,is_query\n";
    auto row = [&](BatchIndex t, PointView p, int label, int is_query) {
        os << t;
        for (double v : p) os << ',' << detail::format_double(v);
        os << ',' << label << ',' << is_query << '\n';
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& db = s.data[i];
        for (std::size_t k = 0; k < db.size(); ++k) row(db.t, db.points[k], db.labels[k], 0);
        const auto& qb = s.queries[i];
        for (std::size_t k = 0; k < qb.size(); ++k) row(qb.t, qb.queries[k], qb.eval_labels ? (*qb.eval_labels)[k] : 0, 1);
    }
}

namespace detail {

struct CsvRow {
    std::size_t line;
    std::optional<BatchIndex> t;
    std::vector<double> features;
    Label label;
    bool is_query;
};

inline Label parse_label(const std::string& s, std::size_t row) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    // tolerate numeric spellings like 1.0
    const double v = parse_double(s, row);
    if (v == 0.0) return 0;
    if (v == 1.0) return 1;
    throw ParseError("label must be 0 or 1, got '" + s + "'", row);
}

/// Reads a numeric CSV whose header names `label` (required), and optionally `t` and `is_query`;
/// all other columns are features, in header order.
inline std::vector<CsvRow> read_numeric_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty stream file", 1);
    const auto header = split_csv_line(line);
    std::optional<std::size_t> t_col, label_col, query_col;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "t") t_col = c;
        else if (header[c] == "label") label_col = c;
        else if (header[c] == "is_query") query_col = c;
        else feature_cols.push_back(c);
    }
    if (!label_col) throw ParseError("header has no 'label' column", 1);
    if (feature_cols.empty()) throw ParseError("header has no feature columns", 1);

    std::vector<CsvRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " columns, found " + std::to_string(f.size()),
                             lineno);
        CsvRow r{lineno, std::nullopt, {}, 0, false};
        if (t_col) {
            const double tv = parse_double(f[*t_col], lineno);
            if (!(tv >= 0.0) || tv != std::floor(tv)) throw ParseError("t must be a non-negative integer", lineno);
            r.t = static_cast<BatchIndex>(tv);
        }
        r.features.reserve(feature_cols.size());
        for (auto c : feature_cols) {
            const double v = parse_double(f[c], lineno);
            if (!std::isfinite(v)) throw ParseError("feature values must be finite", lineno);
            r.features.push_back(v);
        }
        r.label = parse_label(f[*label_col], lineno);
        if (query_col) {
            const auto q = parse_label(f[*query_col], lineno);
            r.is_query = q == 1;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace detail

/// Reads a stream written by write_stream_csv, keeping its batches and queries exactly.
inline Stream read_stream_csv(std::istream& is) {
    const auto rows = detail::read_numeric_csv(is);
    if (rows.empty()) throw ParseError("stream file has no rows");
    std::map<BatchIndex, std::pair<DataBatch, QueryBatch>> batches;
    const std::size_t d = rows.front().features.size();
    for (const auto& r : rows) {
        if (!r.t) throw ParseError("stream file needs a 't' column", 1);
        auto [it, inserted] = batches.try_emplace(*r.t);
        auto& [db, qb] = it->second;
        if (inserted) {
            db = DataBatch{*r.t, Points(d), {}};
            qb = QueryBatch{*r.t, Points(d), std::vector<Label>{}};
        }
        if (r.is_query) {
            qb.queries.push_back(r.features);
            qb.eval_labels->push_back(r.label);
        } else {
            db.points.push_back(r.features);
            db.labels.push_back(r.label);
        }
    }
    Stream s;
    for (auto& [t, pair] : batches) {
        s.data.push_back(std::move(pair.first));
        s.queries.push_back(std::move(pair.second));
    }
    s.validate();
    return s;
}

/// Re-batches a numeric CSV (real-world data) in row order into `n_batches` equal batches,
/// dropping the remainder rows from the end. Rows flagged is_query = 1 are ignored. In each
/// batch `query_fraction` of the entries (at least one) are sampled as queries, seeded by `seed`.
inline Stream load_csv_stream(std::istream& is, std::size_t n_batches, std::uint64_t seed,
                              double query_fraction = 0.1) {
    if (n_batches < 1) throw InvalidInput("n_batches must be >= 1");
    auto rows = detail::read_numeric_csv(is);
    std::erase_if(rows, [](const detail::CsvRow& r) { return r.is_query; });
    if (rows.size() < n_batches)
        throw InvalidInput("stream has " + std::to_string(rows.size()) + " rows, fewer than " +
                           std::to_string(n_batches) + " batches");
    const std::size_t per = rows.size() / n_batches;
    const std::size_t d = rows.front().features.size();
    const auto n_queries =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(query_fraction * static_cast<double>(per))));

    Stream s;
    for (BatchIndex t = 0; t < n_batches; ++t) {
        DataBatch db{t, Points(d), {}};
        for (std::size_t i = t * per; i < (t + 1) * per; ++i) {
            db.points.push_back(rows[i].features);
            db.labels.push_back(rows[i].label);
        }
        Rng rng(derive_seed(seed, {seed_tag::sampling, t}));
        QueryBatch qb{t, Points(d), std::vector<Label>{}};
        for (auto i : sample_without_replacement(db.size(), std::min(n_queries, db.size()), rng)) {
            qb.queries.push_back(db.points[i]);
            qb.eval_labels->push_back(db.labels[i]);
        }
        s.data.push_back(std::move(db));
        s.queries.push_back(std::move(qb));
    }
    s.validate();
    return s;
}

inline Stream read_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open stream file '" + path + "'");
    return read_stream_csv(in);
}

inline Stream load_csv_stream(const std::string& path, std::size_t n_batches, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open stream file '" + path + "'");
    return load_csv_stream(in, n_batches, seed);
}

} // namespace cara
