#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cara/classifier.hpp"
#include "cara/datagen.hpp"
#include "cara/optimize.hpp"
#include "cara/policies.hpp"

namespace cara {

using Json = nlohmann::json;

/// A numeric CSV on disk. `rebatch` splits rows into `n_batches` and samples mode-D queries;
/// otherwise the file is read as an exact stream CSV (t and is_query columns).
struct CsvSource {
    std::string path;
    bool rebatch = true;
    std::size_t n_batches = 100;
    std::string name;
};

using StreamSource = std::variant<StreamSpec, CsvSource>;

/// A policy to evaluate: either fixed parameters or a family optimized on the offline matrix.
struct PolicyEntry {
    Policy policy;
    std::optional<PolicyFamily> optimize;

    std::string name() const { return std::string(policy_name(policy)); }
};

struct RunConfig {
    StreamSource source = StreamSpec{};
    std::size_t t_offline = 25;
    std::size_t t_online = 99;
    std::vector<double> kappas{1.0, 5.0, 20.0, 46.0, 100.0};
    std::vector<PolicyEntry> policies;
    ModelConfig model = ForestConfig{};
    std::optional<double> gamma; // default 1/d
    std::vector<std::uint64_t> seeds{0, 1, 2};
    std::string output = "results.csv";

    void validate() const {
        if (!(t_offline < t_online)) throw InvalidInput("config: t_offline must be < t_online");
        if (kappas.empty()) throw InvalidInput("config: kappas must not be empty");
        for (double k : kappas)
            if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidInput("config: kappa values must be finite and >= 0");
        if (seeds.empty()) throw InvalidInput("config: seeds must not be empty");
        if (policies.empty()) throw InvalidInput("config: policies must not be empty");
        if (gamma && !(*gamma > 0.0)) throw InvalidInput("config: gamma must be > 0");
        if (const auto* spec = std::get_if<StreamSpec>(&source)) {
            spec->validate();
            if (t_online >= spec->n_batches) throw InvalidInput("config: t_online must be < n_batches");
        }
        if (const auto* csv = std::get_if<CsvSource>(&source)) {
            if (csv->path.empty()) throw InvalidInput("config: csv path is empty");
            if (csv->rebatch && t_online >= csv->n_batches) throw InvalidInput("config: t_online must be < n_batches");
        }
        std::visit([](const auto& m) { m.validate(); }, model);
    }

    std::string dataset_name() const {
        if (const auto* spec = std::get_if<StreamSpec>(&source)) return spec->name();
        const auto& csv = std::get<CsvSource>(source);
        if (!csv.name.empty()) return csv.name;
        auto stem = csv.path.substr(csv.path.find_last_of('/') + 1);
        return stem.substr(0, stem.find_last_of('.'));
    }
};

/// All shipped policies; the three cost-aware families are optimized offline.
inline std::vector<PolicyEntry> default_policies() {
    return {
        {CaraTPolicy{}, PolicyFamily::cara_t}, {CaraCTPolicy{}, PolicyFamily::cara_ct},
        {CaraPPolicy{}, PolicyFamily::cara_p}, {NoRetrainPolicy{}, std::nullopt},
        {MarkovPolicy{}, std::nullopt},        {AdwinPolicy{}, std::nullopt},
        {DdmPolicy{}, std::nullopt},
    };
}

// ---- JSON ---------------------------------------------------------------------------

namespace detail {

inline double json_threshold(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParseError("bad threshold '" + s + "'");
    }
    return j.get<double>();
}

inline Json threshold_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace detail

inline Json policy_to_json(const Policy& p) {
    Json j;
    j["name"] = policy_name(p);
    std::visit(
        [&](const auto& v) {
            using P = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<P, CaraTPolicy>) j["tau"] = detail::threshold_json(v.tau);
            if constexpr (std::is_same_v<P, CaraCTPolicy>) j["tau_cum"] = detail::threshold_json(v.tau_cum);
            if constexpr (std::is_same_v<P, CaraPPolicy>) {
                j["phi"] = v.phi ? Json(*v.phi) : Json("never");
                j["offset"] = v.offset;
            }
            if constexpr (std::is_same_v<P, AdwinPolicy>) {
                j["delta"] = v.params.delta;
                j["bucket_capacity"] = v.params.bucket_capacity;
            }
            if constexpr (std::is_same_v<P, DdmPolicy>) {
                j["warn_sigma"] = v.params.warn_sigma;
                j["drift_sigma"] = v.params.drift_sigma;
                j["min_samples"] = v.params.min_samples;
            }
        },
        p);
    return j;
}

/// Accepts a bare name ("cara-t"), {"name": ..., "params": "optimize"}, or an object with
/// explicit parameters. Bare Cara names mean "optimize".
inline PolicyEntry policy_entry_from_json(const Json& j) {
    std::string name;
    bool optimize = false;
    Json params = Json::object();
    if (j.is_string()) {
        name = j.get<std::string>();
        optimize = true;
    } else if (j.is_object()) {
        name = j.at("name").get<std::string>();
        if (j.contains("params")) {
            if (j["params"].is_string()) {
                if (j["params"] != "optimize") throw ParseError("policy params must be an object or \"optimize\"");
                optimize = true;
            } else {
                params = j["params"];
            }
        } else {
            params = j;
            // an object without any parameter fields means optimize, like a bare name
            optimize = j.size() == 1;
        }
    } else {
        throw ParseError("policy entry must be a string or an object");
    }

    if (name == "cara-t") {
        if (optimize) return {CaraTPolicy{}, PolicyFamily::cara_t};
        return {CaraTPolicy{detail::json_threshold(params.at("tau"))}, std::nullopt};
    }
    if (name == "cara-ct") {
        if (optimize) return {CaraCTPolicy{}, PolicyFamily::cara_ct};
        return {CaraCTPolicy{detail::json_threshold(params.at("tau_cum"))}, std::nullopt};
    }
    if (name == "cara-p") {
        if (optimize) return {CaraPPolicy{}, PolicyFamily::cara_p};
        CaraPPolicy p;
        const auto& phi = params.at("phi");
        if (phi.is_string()) {
            if (phi != "never") throw ParseError("cara-p phi must be a positive integer or \"never\"");
        } else {
            const auto v = phi.get<long long>();
            if (v < 1) throw InvalidInput("cara-p phi must be >= 1");
            p.phi = static_cast<std::size_t>(v);
        }
        p.offset = params.value("offset", std::size_t{0});
        return {p, std::nullopt};
    }
    if (name == "nr") return {NoRetrainPolicy{}, std::nullopt};
    if (name == "markov") return {MarkovPolicy{}, std::nullopt};
    if (name == "adwin") {
        AdwinPolicy p;
        p.params.delta = params.value("delta", p.params.delta);
        p.params.bucket_capacity = params.value("bucket_capacity", p.params.bucket_capacity);
        if (!(p.params.delta > 0.0 && p.params.delta < 1.0)) throw InvalidInput("adwin delta must be in (0, 1)");
        return {p, std::nullopt};
    }
    if (name == "ddm") {
        DdmPolicy p;
        p.params.warn_sigma = params.value("warn_sigma", p.params.warn_sigma);
        p.params.drift_sigma = params.value("drift_sigma", p.params.drift_sigma);
        p.params.min_samples = params.value("min_samples", p.params.min_samples);
        return {p, std::nullopt};
    }
    throw ParseError("unknown policy '" + name + "'");
}

inline Json policy_entry_to_json(const PolicyEntry& e) {
    if (e.optimize) return Json{{"name", e.name()}, {"params", "optimize"}};
    Json j = policy_to_json(e.policy);
    Json params = j;
    params.erase("name");
    return Json{{"name", e.name()}, {"params", params}};
}

inline ModelConfig model_from_json(const Json& j) {
    const auto kind = j.value("kind", std::string("forest"));
    if (kind == "logistic") {
        LogisticConfig c;
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.epochs = j.value("epochs", c.epochs);
        c.l2 = j.value("l2", c.l2);
        c.validate();
        return c;
    }
    if (kind == "forest") {
        ForestConfig c;
        c.n_trees = j.value("n_trees", c.n_trees);
        c.max_depth = j.value("max_depth", c.max_depth);
        c.feature_fraction = j.value("feature_fraction", c.feature_fraction);
        c.bootstrap = j.value("bootstrap", c.bootstrap);
        c.validate();
        return c;
    }
    throw ParseError("unknown model kind '" + kind + "'");
}

inline Json model_to_json(const ModelConfig& m) {
    if (const auto* l = std::get_if<LogisticConfig>(&m))
        return {{"kind", "logistic"}, {"learning_rate", l->learning_rate}, {"epochs", l->epochs}, {"l2", l->l2}};
    const auto& f = std::get<ForestConfig>(m);
    return {{"kind", "forest"},
            {"n_trees", f.n_trees},
            {"max_depth", f.max_depth},
            {"feature_fraction", f.feature_fraction},
            {"bootstrap", f.bootstrap}};
}

inline StreamSpec stream_spec_from_json(const Json& j) {
    StreamSpec s;
    if (j.contains("dataset")) s.dataset = parse_dataset(j["dataset"].get<std::string>());
    if (j.contains("query_mode")) s.query_mode = parse_query_mode(j["query_mode"].get<std::string>());
    s.n_batches = j.value("n_batches", s.n_batches);
    s.batch_size = j.value("batch_size", s.batch_size);
    s.queries_per_batch = j.value("queries_per_batch", s.queries_per_batch);
    s.covcon_alpha = j.value("covcon_alpha", s.covcon_alpha);
    s.gauss_sigma = j.value("gauss_sigma", s.gauss_sigma);
    s.seed = j.value("seed", s.seed);
    if (j.contains("circle_schedule")) {
        for (const auto& c : j["circle_schedule"]) {
            if (!c.is_array() || c.size() != 4) throw ParseError("circle_schedule entries are [c1, c2, r, from_batch]");
            s.circle_schedule.push_back(
                {c[0].get<double>(), c[1].get<double>(), c[2].get<double>(), c[3].get<BatchIndex>()});
        }
    }
    return s;
}

inline Json stream_spec_to_json(const StreamSpec& s) {
    Json j{{"dataset", to_string(s.dataset)},
           {"query_mode", to_string(s.query_mode)},
           {"n_batches", s.n_batches},
           {"batch_size", s.batch_size},
           {"queries_per_batch", s.queries_per_batch},
           {"covcon_alpha", s.covcon_alpha},
           {"gauss_sigma", s.gauss_sigma}};
    if (!s.circle_schedule.empty()) {
        Json arr = Json::array();
        for (const auto& c : s.circle_schedule) arr.push_back({c.c1, c.c2, c.r, c.from_batch});
        j["circle_schedule"] = arr;
    }
    return j;
}

inline RunConfig run_config_from_json(const Json& j) {
    RunConfig cfg;
    try {
        if (j.contains("source")) {
            const auto& src = j["source"];
            if (src.contains("generator")) {
                cfg.source = stream_spec_from_json(src["generator"]);
            } else if (src.contains("csv")) {
                const auto& c = src["csv"];
                CsvSource csv;
                csv.path = c.at("path").get<std::string>();
                csv.rebatch = c.value("rebatch", csv.rebatch);
                csv.n_batches = c.value("n_batches", csv.n_batches);
                csv.name = c.value("name", std::string{});
                cfg.source = csv;
            } else {
                throw ParseError("source must contain 'generator' or 'csv'");
            }
        }
        cfg.t_offline = j.value("t_offline", cfg.t_offline);
        cfg.t_online = j.value("t_online", cfg.t_online);
        if (j.contains("kappas")) cfg.kappas = j["kappas"].get<std::vector<double>>();
        if (j.contains("policies")) {
            for (const auto& p : j["policies"]) cfg.policies.push_back(policy_entry_from_json(p));
        } else {
            cfg.policies = default_policies();
        }
        if (j.contains("model")) cfg.model = model_from_json(j["model"]);
        if (j.contains("gamma") && !j["gamma"].is_null()) cfg.gamma = j["gamma"].get<double>();
        if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        cfg.output = j.value("output", cfg.output);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline Json run_config_to_json(const RunConfig& cfg) {
    Json j;
    if (const auto* spec = std::get_if<StreamSpec>(&cfg.source)) {
        j["source"] = {{"generator", stream_spec_to_json(*spec)}};
    } else {
        const auto& c = std::get<CsvSource>(cfg.source);
        j["source"] = {{"csv", {{"path", c.path}, {"rebatch", c.rebatch}, {"n_batches", c.n_batches}, {"name", c.name}}}};
    }
    j["t_offline"] = cfg.t_offline;
    j["t_online"] = cfg.t_online;
    j["kappas"] = cfg.kappas;
    j["policies"] = Json::array();
    for (const auto& p : cfg.policies) j["policies"].push_back(policy_entry_to_json(p));
    j["model"] = model_to_json(cfg.model);
    j["gamma"] = cfg.gamma ? Json(*cfg.gamma) : Json(nullptr);
    j["seeds"] = cfg.seeds;
    j["output"] = cfg.output;
    return j;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError("config '" + path + "': " + e.what());
    }
    return run_config_from_json(j);
}

} // namespace cara
