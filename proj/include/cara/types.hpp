#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cara/errors.hpp"

namespace cara {

using Label = std::uint8_t;
using BatchIndex = std::size_t;
using PointView = std::span<const double>;

/// Row-major block of d-dimensional points.
class Points {
public:
    Points() = default;
    explicit Points(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw InvalidInput("points must have dimension >= 1");
    }
    Points(std::size_t dim, std::vector<double> values) : dim_(dim), values_(std::move(values)) {
        if (dim == 0) throw InvalidInput("points must have dimension >= 1");
        if (values_.size() % dim != 0) throw InvalidInput("coordinate count is not a multiple of the dimension");
        for (double v : values_)
            if (!std::isfinite(v)) throw InvalidInput("point coordinates must be finite");
    }
    Points(std::initializer_list<std::vector<double>> rows) {
        for (const auto& r : rows) push_back(r);
    }

    void push_back(PointView p) {
        if (dim_ == 0) {
            if (p.empty()) throw InvalidInput("points must have dimension >= 1");
            dim_ = p.size();
        }
        if (p.size() != dim_) throw InvalidInput("point dimension mismatch");
        for (double v : p)
            if (!std::isfinite(v)) throw InvalidInput("point coordinates must be finite");
        values_.insert(values_.end(), p.begin(), p.end());
    }
    void push_back(const std::vector<double>& p) { push_back(PointView(p)); }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ ? values_.size() / dim_ : 0; }
    bool empty() const noexcept { return values_.empty(); }
    PointView operator[](std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const Points&, const Points&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/// One time step of labeled data D_t.
struct DataBatch {
    BatchIndex t = 0;
    Points points;
    std::vector<Label> labels;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dim() const noexcept { return points.dim(); }

    void validate() const {
        if (labels.empty()) throw InvalidInput("data batch " + std::to_string(t) + " is empty");
        if (points.size() != labels.size())
            throw InvalidInput("data batch " + std::to_string(t) + ": point/label count mismatch");
        for (Label y : labels)
            if (y > 1) throw InvalidInput("data batch " + std::to_string(t) + ": labels must be 0 or 1");
    }

    friend bool operator==(const DataBatch&, const DataBatch&) = default;
};

/// One time step of queries Q_t. `eval_labels` is for reporting only.
struct QueryBatch {
    BatchIndex t = 0;
    Points queries;
    std::optional<std::vector<Label>> eval_labels;

    std::size_t size() const noexcept { return queries.size(); }

    void validate() const {
        if (queries.empty()) throw InvalidInput("query batch " + std::to_string(t) + " is empty");
        if (eval_labels && eval_labels->size() != queries.size())
            throw InvalidInput("query batch " + std::to_string(t) + ": eval label count mismatch");
    }

    friend bool operator==(const QueryBatch&, const QueryBatch&) = default;
};

/// Aligned data and query batches covering a contiguous index range.
struct Stream {
    std::vector<DataBatch> data;
    std::vector<QueryBatch> queries;

    std::size_t size() const noexcept { return data.size(); }
    std::size_t dim() const noexcept { return data.empty() ? 0 : data.front().dim(); }
    BatchIndex first() const noexcept { return data.empty() ? 0 : data.front().t; }
    BatchIndex last() const noexcept { return data.empty() ? 0 : data.back().t; }

    const DataBatch& data_at(BatchIndex t) const { return data.at(t - first()); }
    const QueryBatch& queries_at(BatchIndex t) const { return queries.at(t - first()); }

    /// Checks contiguity, alignment and uniform dimensionality.
    void validate() const {
        if (data.empty()) throw InvalidInput("stream has no batches");
        if (data.size() != queries.size()) throw InvalidInput("data and query streams differ in length");
        const std::size_t d = data.front().dim();
        for (std::size_t i = 0; i < data.size(); ++i) {
            data[i].validate();
            queries[i].validate();
            if (data[i].t != data.front().t + i) throw InvalidInput("gap in data stream at position " + std::to_string(i));
            if (queries[i].t != data[i].t) throw InvalidInput("query batch index does not match data batch index");
            if (data[i].dim() != d || queries[i].queries.dim() != d)
                throw InvalidInput("dimensionality is not uniform within the stream");
        }
    }

    friend bool operator==(const Stream&, const Stream&) = default;
};

} // namespace cara
