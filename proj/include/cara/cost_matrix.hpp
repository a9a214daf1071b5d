#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cara/model_bank.hpp"
#include "cara/staleness.hpp"

namespace cara {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Upper-triangular cost matrix over batches [start, end]:
///   C[t', t] = relative staleness of M_t' at t   for t' < t
///   C[t, t]  = kappa_t
///   C[t', t] = +inf                              for t' > t
/// Indexing is by absolute batch index.
class CostMatrix {
public:
    CostMatrix() = default;

    /// Matrix with the given retraining costs and all staleness cells zero.
    CostMatrix(BatchIndex start, std::vector<double> kappa) : start_(start), n_(kappa.size()) {
        if (n_ == 0) throw InvalidInput("cost matrix must cover at least one batch");
        entries_.assign(n_ * n_, 0.0);
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < r; ++c) entries_[r * n_ + c] = kInfinity;
        set_kappa(kappa);
    }

    BatchIndex start() const noexcept { return start_; }
    BatchIndex end() const noexcept { return start_ + n_ - 1; }
    std::size_t size() const noexcept { return n_; }

    double operator()(BatchIndex t_prime, BatchIndex t) const { return entries_[index(t_prime, t)]; }

    /// Sets an above-diagonal staleness cell.
    void set_staleness(BatchIndex t_prime, BatchIndex t, double value) {
        if (!(t_prime < t)) throw InvalidInput("staleness cells require t' < t");
        if (!std::isfinite(value)) throw InvalidInput("staleness cells must be finite");
        entries_[index(t_prime, t)] = value;
    }

    double kappa(BatchIndex t) const { return (*this)(t, t); }
    std::vector<double> kappa() const {
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = entries_[i * n_ + i];
        return out;
    }

    void set_kappa(std::span<const double> kappa) {
        if (kappa.size() != n_) throw InvalidInput("kappa vector length does not match the matrix range");
        for (std::size_t i = 0; i < n_; ++i) {
            if (!std::isfinite(kappa[i])) throw InvalidInput("kappa must be finite");
            entries_[i * n_ + i] = kappa[i];
        }
    }

    /// Copy with the diagonal replaced; staleness cells are untouched.
    CostMatrix with_kappa(std::span<const double> kappa) const {
        CostMatrix out = *this;
        out.set_kappa(kappa);
        return out;
    }
    CostMatrix with_kappa(double kappa) const { return with_kappa(std::vector<double>(n_, kappa)); }

    /// Sum of all above-diagonal staleness entries (signed).
    double staleness_sum() const {
        double s = 0.0;
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = r + 1; c < n_; ++c) s += entries_[r * n_ + c];
        return s;
    }

    /// Sum of absolute values of all above-diagonal staleness entries.
    double staleness_abs_sum() const {
        double s = 0.0;
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = r + 1; c < n_; ++c) s += std::abs(entries_[r * n_ + c]);
        return s;
    }

    friend bool operator==(const CostMatrix& a, const CostMatrix& b) {
        if (a.start_ != b.start_ || a.n_ != b.n_) return false;
        for (std::size_t i = 0; i < a.entries_.size(); ++i) {
            const double x = a.entries_[i], y = b.entries_[i];
            if (!(x == y)) return false;
        }
        return true;
    }

private:
    std::size_t index(BatchIndex t_prime, BatchIndex t) const {
        if (t_prime < start_ || t < start_ || t_prime > end() || t > end())
            throw InvalidInput("cost matrix index (" + std::to_string(t_prime) + ", " + std::to_string(t) +
                               ") outside [" + std::to_string(start_) + ", " + std::to_string(end()) + "]");
        return (t_prime - start_) * n_ + (t - start_);
    }

    BatchIndex start_ = 0;
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

/// Which model served each batch: served_by[i] is s_{start+i}.
struct Strategy {
    BatchIndex start = 0;
    std::vector<BatchIndex> served_by;

    BatchIndex end() const noexcept { return start + served_by.size() - 1; }
    std::size_t size() const noexcept { return served_by.size(); }
    BatchIndex at(BatchIndex t) const { return served_by.at(t - start); }

    /// Batches at which a model was (re)trained, including the forced initial training.
    std::vector<BatchIndex> retrains() const {
        std::vector<BatchIndex> out;
        for (std::size_t i = 0; i < served_by.size(); ++i)
            if (served_by[i] == start + i) out.push_back(start + i);
        return out;
    }
    std::size_t n_retrains() const { return retrains().size(); }

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Returns a description of the first violated invariant, or nullopt when the strategy is valid.
inline std::optional<std::string> validate_strategy(const Strategy& s) {
    if (s.served_by.empty()) return "strategy is empty";
    if (s.served_by.front() != s.start)
        return "initial training missing: s_" + std::to_string(s.start) + " = " + std::to_string(s.served_by.front());
    for (std::size_t i = 1; i < s.served_by.size(); ++i) {
        const BatchIndex t = s.start + i;
        const BatchIndex v = s.served_by[i];
        if (v != s.served_by[i - 1] && v != t)
            return "s_" + std::to_string(t) + " = " + std::to_string(v) + " is neither s_" + std::to_string(t - 1) +
                   " nor " + std::to_string(t);
    }
    return std::nullopt;
}

/// Sum over t of C[s_t, t].
inline double strategy_cost(const Strategy& s, const CostMatrix& c) {
    if (auto err = validate_strategy(s)) throw ContractViolation("strategy_cost: " + *err);
    if (s.start != c.start() || s.end() != c.end()) throw ContractViolation("strategy_cost: range mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < s.served_by.size(); ++i) total += c(s.served_by[i], s.start + i);
    return total;
}

/// Running totals of the per-batch cost terms; the last element equals strategy_cost.
inline std::vector<double> cumulative_cost_trace(const Strategy& s, const CostMatrix& c) {
    if (auto err = validate_strategy(s)) throw ContractViolation("cumulative_cost_trace: " + *err);
    if (s.start != c.start() || s.end() != c.end()) throw ContractViolation("cumulative_cost_trace: range mismatch");
    std::vector<double> out;
    out.reserve(s.size());
    double total = 0.0;
    for (std::size_t i = 0; i < s.served_by.size(); ++i) {
        total += c(s.served_by[i], s.start + i);
        out.push_back(total);
    }
    return out;
}

/// Fills every staleness cell over [start, end] from the bank's models.
inline CostMatrix build_cost_matrix(ModelBank& bank, BatchIndex start, BatchIndex end, std::span<const double> kappa,
                                    const KernelConfig& k) {
    k.validate();
    const auto& stream = bank.stream();
    if (start > end || start < stream.first() || end > stream.last())
        throw InvalidInput("cost matrix range [" + std::to_string(start) + ", " + std::to_string(end) +
                           "] not covered by the stream");
    if (kappa.size() != end - start + 1) throw InvalidInput("kappa vector length does not match the range");
    CostMatrix c(start, std::vector<double>(kappa.begin(), kappa.end()));
    for (BatchIndex tp = start; tp <= end; ++tp)
        for (BatchIndex t = tp + 1; t <= end; ++t) c.set_staleness(tp, t, bank.relative_staleness(t, tp, k));
    return c;
}

/// Trains one model per batch of the given aligned batches and builds their matrix.
inline CostMatrix build_cost_matrix(std::vector<DataBatch> data, std::vector<QueryBatch> queries,
                                    std::span<const double> kappa, const ModelConfig& model_cfg,
                                    const KernelConfig& k) {
    Stream stream{std::move(data), std::move(queries)};
    stream.validate();
    ModelBank bank(stream, model_cfg);
    return build_cost_matrix(bank, stream.first(), stream.last(), kappa, k);
}

namespace detail {

inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s, std::size_t row) {
    if (s == "inf" || s == "+inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError("trailing characters in number '" + s + "'", row);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("not a number: '" + s + "'", row);
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

/// CSV with header `t_prime,t,value`, one row per cell, infinity written as `inf`.
inline void write_cost_matrix_csv(std::ostream& os, const CostMatrix& c) {
    os << "t_prime,t,value\n";
    for (BatchIndex tp = c.start(); tp <= c.end(); ++tp)
        for (BatchIndex t = c.start(); t <= c.end(); ++t)
            os << tp << ',' << t << ',' << detail::format_double(c(tp, t)) << '\n';
}

inline CostMatrix read_cost_matrix_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty cost matrix file", 1);
    if (detail::split_csv_line(line) != std::vector<std::string>{"t_prime", "t", "value"})
        throw ParseError("expected header t_prime,t,value", 1);
    struct Cell {
        BatchIndex tp, t;
        double v;
    };
    std::vector<Cell> cells;
    std::size_t row = 1;
    BatchIndex lo = std::numeric_limits<BatchIndex>::max(), hi = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 3) throw ParseError("expected 3 columns", row);
        Cell c{};
        try {
            c.tp = std::stoull(f[0]);
            c.t = std::stoull(f[1]);
        } catch (const std::logic_error&) {
            throw ParseError("bad batch index", row);
        }
        c.v = detail::parse_double(f[2], row);
        lo = std::min({lo, c.tp, c.t});
        hi = std::max({hi, c.tp, c.t});
        cells.push_back(c);
    }
    if (cells.empty()) throw ParseError("cost matrix file has no cells", row);
    const std::size_t n = hi - lo + 1;
    std::vector<double> kappa(n, std::numeric_limits<double>::quiet_NaN());
    for (const auto& c : cells)
        if (c.tp == c.t) kappa[c.t - lo] = c.v;
    for (double k : kappa)
        if (std::isnan(k)) throw ParseError("cost matrix file is missing a diagonal cell");
    CostMatrix m(lo, kappa);
    for (const auto& c : cells)
        if (c.tp < c.t) m.set_staleness(c.tp, c.t, c.v);
    return m;
}

} // namespace cara
