// Command-line front end: stream generation, cost matrices, oracle, single runs, sweeps, reports.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cara/cara.hpp"

namespace {

using namespace cara;

/// Writes to `path`, or stdout when the path is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    fn(out);
}

struct GenArgs {
    std::string dataset = "covcon";
    std::string queries = "D";
    std::size_t n_batches = 100;
    std::size_t batch_size = 1000;
    std::size_t queries_per_batch = 100;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    double sigma = 0.1;
    std::string config;
    std::string output;
};

void cmd_gen(const GenArgs& a) {
    StreamSpec spec;
    if (!a.config.empty()) {
        const auto cfg = load_run_config(a.config);
        const auto* s = std::get_if<StreamSpec>(&cfg.source);
        if (!s) throw InvalidInput("config source is not a generator");
        spec = *s;
    } else {
        spec.dataset = parse_dataset(a.dataset);
        spec.query_mode = parse_query_mode(a.queries);
        spec.n_batches = a.n_batches;
        spec.batch_size = a.batch_size;
        spec.queries_per_batch = a.queries_per_batch;
        spec.covcon_alpha = a.alpha;
        spec.gauss_sigma = a.sigma;
    }
    spec.seed = a.seed;
    const auto stream = generate_stream(spec);
    with_output(a.output, [&](std::ostream& os) { write_stream_csv(os, stream); });
}

struct MatrixArgs {
    std::string config;
    std::string stream;
    std::string model = "forest";
    std::optional<double> gamma;
    std::optional<std::uint64_t> seed;
    double kappa = 1.0;
    std::string range = "online";
    std::optional<std::size_t> from, to;
    std::string output;
};

void cmd_cost_matrix(const MatrixArgs& a) {
    if (a.config.empty() == a.stream.empty()) throw InvalidInput("give exactly one of --config or --stream");
    if (!a.config.empty()) {
        const auto cfg = load_run_config(a.config);
        Experiment exp(cfg, a.seed.value_or(cfg.seeds.front()));
        CostMatrix c;
        if (a.range == "offline")
            c = exp.offline_matrix(a.kappa);
        else if (a.range == "online")
            c = exp.online_matrix(a.kappa);
        else
            throw InvalidInput("--range must be 'offline' or 'online'");
        with_output(a.output, [&](std::ostream& os) { write_cost_matrix_csv(os, c); });
        return;
    }
    const Stream stream = read_stream_file(a.stream);
    ModelConfig model = model_from_json(Json{{"kind", a.model}});
    model = seeded_model(model, a.seed.value_or(0));
    ModelBank bank(stream, model);
    const BatchIndex from = a.from.value_or(stream.first());
    const BatchIndex to = a.to.value_or(stream.last());
    if (from > to) throw InvalidInput("--from must be <= --to");
    const KernelConfig k = a.gamma ? KernelConfig{*a.gamma} : KernelConfig::for_dimension(stream.dim());
    const auto c = build_cost_matrix(bank, from, to, std::vector<double>(to - from + 1, a.kappa), k);
    with_output(a.output, [&](std::ostream& os) { write_cost_matrix_csv(os, c); });
}

struct OracleArgs {
    std::string matrix;
    std::string dp_table;
};

void cmd_oracle(const OracleArgs& a) {
    std::ifstream in(a.matrix);
    if (!in) throw InvalidInput("cannot open matrix '" + a.matrix + "'");
    const auto c = read_cost_matrix_csv(in);
    const auto table = memoize_dp(c);
    const auto retrains = oracle_retrains(table);
    const auto s = expand_to_strategy(retrains, c.start(), c.end());
    std::cout << "cost," << detail::format_double(strategy_cost(s, c)) << '\n';
    std::cout << "retrains,";
    bool first = true;
    for (auto t : retrains.batches) {
        std::cout << (first ? "" : "|") << t;
        first = false;
    }
    std::cout << "\nstrategy," << join_strategy(s) << '\n';
    if (!a.dp_table.empty()) with_output(a.dp_table, [&](std::ostream& os) { write_dp_table_csv(os, table); });
}

PolicyEntry parse_policy_arg(const std::string& text, const RunConfig& cfg) {
    if (!text.empty() && text.front() == '{') return policy_entry_from_json(Json::parse(text));
    for (const auto& e : cfg.policies)
        if (e.name() == text) return e;
    return policy_entry_from_json(Json(text));
}

struct RunArgs {
    std::string config;
    std::string policy;
    double kappa = 1.0;
    std::optional<std::uint64_t> seed;
    std::string trace;
    std::string output;
};

void cmd_run(const RunArgs& a) {
    const auto cfg = load_run_config(a.config);
    const auto entry = parse_policy_arg(a.policy, cfg);
    Experiment exp(cfg, a.seed.value_or(cfg.seeds.front()));
    const auto r = exp.run(entry, a.kappa);
    with_output(a.output, [&](std::ostream& os) { write_results_csv(os, {r}); });
    if (!a.trace.empty()) {
        const auto online = exp.online_matrix(a.kappa);
        const auto oracle = oracle_strategy(online);
        const auto policy_trace = cumulative_cost_trace(r.strategy, online);
        const auto oracle_trace = cumulative_cost_trace(oracle, online);
        with_output(a.trace, [&](std::ostream& os) {
            os << "t,policy_model,policy_cumulative_cost,oracle_model,oracle_cumulative_cost\n";
            for (std::size_t i = 0; i < policy_trace.size(); ++i)
                os << online.start() + i << ',' << r.strategy.served_by[i] << ','
                   << detail::format_double(policy_trace[i]) << ',' << oracle.served_by[i] << ','
                   << detail::format_double(oracle_trace[i]) << '\n';
        });
    }
}

struct SweepArgs {
    std::string config;
    std::string output;
    bool quiet = false;
};

void cmd_sweep(const SweepArgs& a) {
    const auto cfg = load_run_config(a.config);
    const std::string out = a.output.empty() ? cfg.output : a.output;
    ProgressFn progress;
    if (!a.quiet)
        progress = [](const RunResult& r) {
            std::cerr << r.dataset << " seed=" << r.seed << " kappa=" << r.kappa << ' ' << r.policy
                      << " cost=" << r.strategy_cost << '\n';
        };
    const auto results = run_sweep(cfg, progress);
    with_output(out, [&](std::ostream& os) { write_results_csv(os, results); });
}

struct ReportArgs {
    std::string results;
    std::string format = "text";
    std::string output;
};

void cmd_report(const ReportArgs& a) {
    const auto rows = report(read_results_file(a.results));
    with_output(a.output, [&](std::ostream& os) {
        if (a.format == "csv")
            write_report_csv(os, rows);
        else
            write_report_text(os, rows);
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-aware retraining: cost matrices, oracle strategies and policy sweeps"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Write a synthetic stream as CSV");
    g->add_option("--dataset", gen.dataset, "gauss, circle or covcon")->check(CLI::IsMember({"gauss", "circle", "covcon"}));
    g->add_option("--queries", gen.queries, "D (sampled from data) or S (static Gaussian)")
        ->check(CLI::IsMember({"D", "S"}));
    g->add_option("--n-batches", gen.n_batches);
    g->add_option("--batch-size", gen.batch_size);
    g->add_option("--queries-per-batch", gen.queries_per_batch);
    g->add_option("--seed", gen.seed);
    g->add_option("--alpha", gen.alpha, "CovCon noise scale");
    g->add_option("--sigma", gen.sigma, "Gauss standard deviation");
    g->add_option("--config", gen.config, "Take the generator settings from a run config");
    g->add_option("-o,--output", gen.output, "Output file (default stdout)");

    MatrixArgs mat;
    auto* m = app.add_subcommand("cost-matrix", "Emit a cost matrix as CSV");
    m->add_option("--config", mat.config, "Run config providing stream, model and gamma");
    m->add_option("--stream", mat.stream, "Stream CSV to use instead of a config");
    m->add_option("--model", mat.model, "Model kind for --stream")->check(CLI::IsMember({"forest", "logistic"}));
    m->add_option("--gamma", mat.gamma, "Kernel gamma for --stream (default 1/d)");
    m->add_option("--seed", mat.seed, "Default: the config's first seed, or 0");
    m->add_option("--kappa", mat.kappa, "Static retraining cost on the diagonal");
    m->add_option("--range", mat.range, "offline or online (with --config)");
    m->add_option("--from", mat.from, "First batch (with --stream)");
    m->add_option("--to", mat.to, "Last batch (with --stream)");
    m->add_option("-o,--output", mat.output);

    OracleArgs ora;
    auto* o = app.add_subcommand("oracle", "Optimal strategy and cost for a cost matrix CSV");
    o->add_option("--matrix", ora.matrix)->required();
    o->add_option("--dp-table", ora.dp_table, "Also write the DP table CSV here");

    RunArgs run;
    auto* r = app.add_subcommand("run", "Run one policy at one kappa and seed");
    r->add_option("--config", run.config)->required();
    r->add_option("--policy", run.policy, "Policy name or JSON policy entry")->required();
    r->add_option("--kappa", run.kappa);
    r->add_option("--seed", run.seed, "Default: the config's first seed");
    r->add_option("--trace", run.trace, "Write the cumulative cost trace CSV here");
    r->add_option("-o,--output", run.output);

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Run the full (seed, kappa, policy) grid of a config");
    s->add_option("--config", sw.config)->required();
    s->add_option("-o,--output", sw.output, "Results CSV (default: the config's output)");
    s->add_flag("-q,--quiet", sw.quiet);

    ReportArgs rep;
    auto* p = app.add_subcommand("report", "Summarize a results CSV");
    p->add_option("--results", rep.results)->required();
    p->add_option("--format", rep.format)->check(CLI::IsMember({"text", "csv"}));
    p->add_option("-o,--output", rep.output);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*g) cmd_gen(gen);
        if (*m) cmd_cost_matrix(mat);
        if (*o) cmd_oracle(ora);
        if (*r) cmd_run(run);
        if (*s) cmd_sweep(sw);
        if (*p) cmd_report(rep);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
