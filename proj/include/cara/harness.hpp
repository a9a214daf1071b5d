#pragma once

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cara/config.hpp"
#include "cara/evaluation.hpp"
#include "cara/oracle.hpp"
#include "cara/stream_io.hpp"

namespace cara {

/// Error raised inside a sweep cell, tagged with the policy, kappa and seed that failed.
class SweepError : public std::runtime_error {
public:
    SweepError(const std::string& policy, double kappa, std::uint64_t seed, const std::string& what)
        : std::runtime_error("[policy=" + policy + " kappa=" + detail::format_double(kappa) +
                             " seed=" + std::to_string(seed) + "] " + what) {}
};

inline constexpr std::string_view kOraclePolicyName = "oracle";

struct RunResult {
    std::string dataset;
    std::string policy;
    double kappa = 0.0;
    std::uint64_t seed = 0;
    double strategy_cost = 0.0;
    double oracle_cost = 0.0;
    std::optional<double> scpe; // missing when the oracle cost is zero
    std::size_t n_retrains = 0;
    double query_accuracy = 0.0;
    Strategy strategy;

    std::size_t additional_retrains() const { return n_retrains - 1; }

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Builds the stream for one seed of a config. Generator seeds and model seeds both come from `seed`.
inline Stream load_stream(const RunConfig& cfg, std::uint64_t seed) {
    if (const auto* spec = std::get_if<StreamSpec>(&cfg.source)) {
        StreamSpec s = *spec;
        s.seed = seed;
        return generate_stream(s);
    }
    const auto& csv = std::get<CsvSource>(cfg.source);
    if (csv.rebatch) return load_csv_stream(csv.path, csv.n_batches, seed);
    return read_stream_file(csv.path);
}

inline ModelConfig seeded_model(ModelConfig model, std::uint64_t seed) {
    std::visit([&](auto& m) { m.seed = seed; }, model);
    return model;
}

/// One seed of a run: the stream, its models, and the kappa-free staleness of the offline
/// range [first, t_offline] and the online range (t_offline, t_online].
class Experiment {
public:
    Experiment(const RunConfig& cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {
        cfg_.validate();
        stream_ = std::make_unique<Stream>(load_stream(cfg_, seed));
        if (cfg_.t_online > stream_->last() || cfg_.t_offline < stream_->first())
            throw InvalidInput("t_offline/t_online outside the stream's batches");
        bank_ = std::make_unique<ModelBank>(*stream_, seeded_model(cfg_.model, seed));
        kernel_ = cfg_.gamma ? KernelConfig{*cfg_.gamma} : KernelConfig::for_dimension(stream_->dim());
        const BatchIndex off_start = stream_->first();
        offline_ = build_cost_matrix(*bank_, off_start, cfg_.t_offline,
                                     std::vector<double>(cfg_.t_offline - off_start + 1, 0.0), kernel_);
        online_ = build_cost_matrix(*bank_, online_start(), cfg_.t_online,
                                    std::vector<double>(cfg_.t_online - cfg_.t_offline, 0.0), kernel_);
    }

    Experiment(const Experiment&) = delete;
    Experiment& operator=(const Experiment&) = delete;

    const RunConfig& config() const noexcept { return cfg_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const Stream& stream() const noexcept { return *stream_; }
    ModelBank& bank() noexcept { return *bank_; }
    const KernelConfig& kernel() const noexcept { return kernel_; }
    BatchIndex online_start() const noexcept { return cfg_.t_offline + 1; }
    std::size_t n_online() const noexcept { return cfg_.t_online - cfg_.t_offline; }

    /// Matrices with a static retraining cost on the diagonal.
    CostMatrix offline_matrix(double kappa) const { return offline_.with_kappa(kappa); }
    CostMatrix online_matrix(double kappa) const { return online_.with_kappa(kappa); }

    /// The policy actually run online: optimized entries are fitted on the offline matrix.
    Policy resolve(const PolicyEntry& e, const CostMatrix& offline) const {
        return e.optimize ? optimize_offline(*e.optimize, offline) : e.policy;
    }

    RunResult result_for(std::string policy_name, const Strategy& s, const CostMatrix& online, double oracle_cost,
                         double kappa) {
        RunResult r;
        r.dataset = cfg_.dataset_name();
        r.policy = std::move(policy_name);
        r.kappa = kappa;
        r.seed = seed_;
        r.strategy = s;
        r.strategy_cost = strategy_cost(s, online);
        r.oracle_cost = oracle_cost;
        if (oracle_cost != 0.0) r.scpe = scpe(r.strategy_cost, oracle_cost);
        r.n_retrains = s.n_retrains();
        r.query_accuracy = evaluate_prequential(s, *bank_);
        return r;
    }

    /// Runs one policy online at one kappa.
    RunResult run(const PolicyEntry& entry, double kappa) {
        try {
            const auto offline = offline_matrix(kappa);
            const auto online = online_matrix(kappa);
            const Policy policy = resolve(entry, offline);
            MatrixStaleness source(online);
            const auto kappas = online.kappa();
            const Strategy s = run_policy(policy, *bank_, source, kappas, online.start(), online.end());
            return result_for(entry.name(), s, online, memoize_dp(online).optimal_cost(), kappa);
        } catch (const SweepError&) {
            throw;
        } catch (const std::exception& e) {
            throw SweepError(entry.name(), kappa, seed_, e.what());
        }
    }

    /// The oracle row followed by one row per configured policy, at one kappa.
    std::vector<RunResult> run_all(double kappa) {
        std::vector<RunResult> out;
        double oracle_cost = 0.0;
        try {
            const auto online = online_matrix(kappa);
            const auto table = memoize_dp(online);
            oracle_cost = table.optimal_cost();
            const auto s = expand_to_strategy(oracle_retrains(table), online.start(), online.end());
            out.push_back(result_for(std::string(kOraclePolicyName), s, online, oracle_cost, kappa));
        } catch (const std::exception& e) {
            throw SweepError(std::string(kOraclePolicyName), kappa, seed_, e.what());
        }
        for (const auto& entry : cfg_.policies) out.push_back(run(entry, kappa));
        return out;
    }

private:
    RunConfig cfg_;
    std::uint64_t seed_;
    std::unique_ptr<Stream> stream_;
    std::unique_ptr<ModelBank> bank_;
    KernelConfig kernel_;
    CostMatrix offline_;
    CostMatrix online_;
};

using ProgressFn = std::function<void(const RunResult&)>;

/// Raw results of the full (seed, kappa, policy) grid. Staleness is computed once per seed
/// and shared across kappas.
inline std::vector<RunResult> run_sweep(const RunConfig& cfg, const ProgressFn& progress = {}) {
    cfg.validate();
    std::vector<RunResult> out;
    for (auto seed : cfg.seeds) {
        Experiment exp(cfg, seed);
        for (double kappa : cfg.kappas) {
            for (auto& r : exp.run_all(kappa)) {
                if (progress) progress(r);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

// ---- results CSV ---------------------------------------------------------------------

inline constexpr std::string_view kResultsHeader =
    "dataset,policy,kappa,seed,strategy_cost,oracle_cost,scpe,n_retrains,query_accuracy,strategy";

inline std::string join_strategy(const Strategy& s) {
    std::string out;
    for (std::size_t i = 0; i < s.served_by.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(s.served_by[i]);
    }
    return out;
}

inline void write_results_csv(std::ostream& os, const std::vector<RunResult>& results) {
    os << kResultsHeader << '\n';
    for (const auto& r : results) {
        os << r.dataset << ',' << r.policy << ',' << detail::format_double(r.kappa) << ',' << r.seed << ','
           << detail::format_double(r.strategy_cost) << ',' << detail::format_double(r.oracle_cost) << ','
           << (r.scpe ? detail::format_double(*r.scpe) : std::string{}) << ',' << r.n_retrains << ','
           << detail::format_double(r.query_accuracy) << ',' << join_strategy(r.strategy) << '\n';
    }
}

inline std::vector<RunResult> read_results_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("results file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kResultsHeader) throw ParseError("unexpected results header", 1);
    std::vector<RunResult> out;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 10) throw ParseError("expected 10 columns", row);
        RunResult r;
        r.dataset = cells[0];
        r.policy = cells[1];
        r.kappa = detail::parse_double(cells[2], row);
        try {
            r.seed = std::stoull(cells[3]);
            r.n_retrains = std::stoull(cells[7]);
        } catch (const std::logic_error&) {
            throw ParseError("bad integer field", row);
        }
        r.strategy_cost = detail::parse_double(cells[4], row);
        r.oracle_cost = detail::parse_double(cells[5], row);
        if (!cells[6].empty()) r.scpe = detail::parse_double(cells[6], row);
        r.query_accuracy = detail::parse_double(cells[8], row);
        std::istringstream ss(cells[9]);
        std::string tok;
        while (std::getline(ss, tok, '|')) {
            try {
                r.strategy.served_by.push_back(std::stoull(tok));
            } catch (const std::logic_error&) {
                throw ParseError("bad strategy entry '" + tok + "'", row);
            }
        }
        if (r.strategy.served_by.empty()) throw ParseError("empty strategy", row);
        r.strategy.start = r.strategy.served_by.front();
        out.push_back(std::move(r));
    }
    return out;
}

inline void write_results_file(const std::string& path, const std::vector<RunResult>& results) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    write_results_csv(out, results);
}

inline std::vector<RunResult> read_results_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open results file '" + path + "'");
    return read_results_csv(in);
}

// ---- report --------------------------------------------------------------------------

/// Means over all (kappa, seed) rows of one dataset and policy. SCPE is averaged over the
/// rows where it is defined; `scpe_missing` counts the others.
struct SummaryRow {
    std::string dataset;
    std::string policy;
    std::size_t runs = 0;
    std::optional<double> mean_scpe;
    std::size_t scpe_missing = 0;
    double mean_query_accuracy = 0.0;
    double mean_n_retrains = 0.0;
    double mean_additional_retrains = 0.0;
};

/// Rows ordered by dataset, then by first appearance of the policy.
inline std::vector<SummaryRow> report(const std::vector<RunResult>& results) {
    if (results.empty()) throw InvalidInput("report: no results");
    std::vector<SummaryRow> rows;
    std::vector<double> scpe_sum;
    std::vector<std::size_t> scpe_n;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& r : results) {
        auto [it, inserted] = index.try_emplace({r.dataset, r.policy}, rows.size());
        if (inserted) {
            SummaryRow row;
            row.dataset = r.dataset;
            row.policy = r.policy;
            rows.push_back(std::move(row));
            scpe_sum.push_back(0.0);
            scpe_n.push_back(0);
        }
        const std::size_t i = it->second;
        auto& row = rows[i];
        ++row.runs;
        row.mean_query_accuracy += r.query_accuracy;
        row.mean_n_retrains += static_cast<double>(r.n_retrains);
        if (r.scpe) {
            scpe_sum[i] += *r.scpe;
            ++scpe_n[i];
        } else {
            ++row.scpe_missing;
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& row = rows[i];
        const double n = static_cast<double>(row.runs);
        row.mean_query_accuracy /= n;
        row.mean_n_retrains /= n;
        row.mean_additional_retrains = row.mean_n_retrains - 1.0;
        if (scpe_n[i] > 0) row.mean_scpe = scpe_sum[i] / static_cast<double>(scpe_n[i]);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SummaryRow& a, const SummaryRow& b) { return a.dataset < b.dataset; });
    return rows;
}

inline void write_report_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "dataset,policy,runs,mean_scpe,scpe_missing,mean_query_accuracy,mean_n_retrains,mean_additional_retrains\n";
    for (const auto& r : rows) {
        os << r.dataset << ',' << r.policy << ',' << r.runs << ','
           << (r.mean_scpe ? detail::format_double(*r.mean_scpe) : std::string{}) << ',' << r.scpe_missing << ','
           << detail::format_double(r.mean_query_accuracy) << ',' << detail::format_double(r.mean_n_retrains) << ','
           << detail::format_double(r.mean_additional_retrains) << '\n';
    }
}

inline void write_report_text(std::ostream& os, const std::vector<SummaryRow>& rows) {
    const std::vector<std::string> header{"dataset", "policy", "runs", "SCPE", "accuracy", "retrains", "extra"};
    std::vector<std::vector<std::string>> cells;
    auto fixed = [](double v, int prec) {
        std::ostringstream ss;
        ss << std::fixed << std::setprecision(prec) << v;
        return ss.str();
    };
    for (const auto& r : rows) {
        cells.push_back({r.dataset, r.policy, std::to_string(r.runs), r.mean_scpe ? fixed(*r.mean_scpe, 2) : "n/a",
                         fixed(r.mean_query_accuracy, 4), fixed(r.mean_n_retrains, 2),
                         fixed(r.mean_additional_retrains, 2)});
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
    }
    auto print = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << "  ";
            if (c < 2)
                os << std::left << std::setw(static_cast<int>(width[c])) << row[c];
            else
                os << std::right << std::setw(static_cast<int>(width[c])) << row[c];
        }
        os << '\n';
    };
    print(header);
    std::size_t total = 2 * (header.size() - 1);
    for (auto w : width) total += w;
    os << std::string(total, '-') << '\n';
    for (const auto& row : cells) print(row);
}

} // namespace cara
