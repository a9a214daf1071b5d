#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cara/cost_matrix.hpp"
#include "cara/detectors.hpp"
#include "cara/model_bank.hpp"

namespace cara {

enum class Decision { keep, retrain };

// ---- decision functions ------------------------------------------------------------

/// Threshold rule: Keep iff psi_bar < tau.
inline Decision cara_t_decide(BatchIndex /*t*/, BatchIndex /*t_prime*/, double tau, double psi_bar) {
    return psi_bar < tau ? Decision::keep : Decision::retrain;
}

/// Mutable per-run policy state.
struct PolicyState {
    BatchIndex last_trained = 0;
    double cumulative_cost = 0.0;
    std::variant<std::monostate, Ddm, Adwin> detector;
};

/// Cumulative threshold rule. Adds psi_bar to the accumulator and retrains once the sum
/// reaches tau_cum; the accumulator resets to 0 on Retrain.
inline Decision cara_ct_decide(BatchIndex /*t*/, BatchIndex /*t_prime*/, double tau_cum, PolicyState& state,
                               double psi_bar) {
    state.cumulative_cost += psi_bar;
    if (state.cumulative_cost < tau_cum) return Decision::keep;
    state.cumulative_cost = 0.0;
    return Decision::retrain;
}

/// Periodic rule: Retrain iff (t - a) mod phi == 0.
inline Decision cara_p_decide(BatchIndex t, std::size_t phi, std::size_t offset) {
    if (phi < 1) throw InvalidInput("cara_p_decide: phi must be >= 1");
    const auto diff = static_cast<long long>(t) - static_cast<long long>(offset);
    const auto period = static_cast<long long>(phi);
    return ((diff % period) + period) % period == 0 ? Decision::retrain : Decision::keep;
}

/// Uncalibrated threshold at the retraining cost: Keep iff psi_bar < kappa_t.
inline Decision markov_decide(BatchIndex t, BatchIndex t_prime, double kappa_t, double psi_bar) {
    return cara_t_decide(t, t_prime, kappa_t, psi_bar);
}

// ---- policies ----------------------------------------------------------------------

struct NoRetrainPolicy {};
struct CaraTPolicy {
    double tau = 0.0;
};
struct CaraCTPolicy {
    double tau_cum = 0.0;
};
struct CaraPPolicy {
    std::optional<std::size_t> phi; // nullopt: period longer than any stream (never retrain)
    std::size_t offset = 0;
};
struct MarkovPolicy {};
struct AdwinPolicy {
    AdwinParams params;
};
struct DdmPolicy {
    DdmParams params;
};

using Policy = std::variant<NoRetrainPolicy, CaraTPolicy, CaraCTPolicy, CaraPPolicy, MarkovPolicy, AdwinPolicy, DdmPolicy>;

inline std::string_view policy_name(const Policy& p) {
    static constexpr std::string_view names[] = {"nr", "cara-t", "cara-ct", "cara-p", "markov", "adwin", "ddm"};
    return names[p.index()];
}

inline bool uses_staleness(const Policy& p) {
    return std::holds_alternative<CaraTPolicy>(p) || std::holds_alternative<CaraCTPolicy>(p) ||
           std::holds_alternative<MarkovPolicy>(p);
}

inline bool is_detector(const Policy& p) {
    return std::holds_alternative<AdwinPolicy>(p) || std::holds_alternative<DdmPolicy>(p);
}

inline PolicyState initial_state(const Policy& p, BatchIndex start) {
    PolicyState s;
    s.last_trained = start;
    if (const auto* a = std::get_if<AdwinPolicy>(&p)) s.detector = Adwin(a->params);
    if (const auto* d = std::get_if<DdmPolicy>(&p)) s.detector = Ddm(d->params);
    return s;
}

inline void reset_after_retrain(PolicyState& s, BatchIndex t) {
    s.last_trained = t;
    s.cumulative_cost = 0.0;
    if (auto* a = std::get_if<Adwin>(&s.detector)) a->reset();
    if (auto* d = std::get_if<Ddm>(&s.detector)) d->reset();
}

/// Feeds per-sample errors in stream order; true if any sample triggers a drift.
inline bool detect_in_batch(PolicyState& s, std::span<const Label> errors) {
    return std::visit(
        [&](auto& det) -> bool {
            using D = std::decay_t<decltype(det)>;
            if constexpr (std::is_same_v<D, std::monostate>) {
                return false;
            } else {
                for (Label e : errors)
                    if (det.update(e)) return true;
                return false;
            }
        },
        s.detector);
}

/// Everything a decision function may look at for batch t.
struct DecisionInputs {
    BatchIndex t;
    BatchIndex t_prime;
    double kappa_t;
};

/// One decision of `policy` at batch t (> start). `psi_bar()` and `errors()` are evaluated lazily
/// so that policies only pay for the inputs they use.
template <class PsiFn, class ErrFn>
Decision decide(const Policy& policy, PolicyState& state, const DecisionInputs& in, PsiFn&& psi_bar, ErrFn&& errors) {
    return std::visit(
        [&](const auto& p) -> Decision {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, NoRetrainPolicy>) {
                return Decision::keep;
            } else if constexpr (std::is_same_v<P, CaraTPolicy>) {
                return cara_t_decide(in.t, in.t_prime, p.tau, psi_bar());
            } else if constexpr (std::is_same_v<P, CaraCTPolicy>) {
                return cara_ct_decide(in.t, in.t_prime, p.tau_cum, state, psi_bar());
            } else if constexpr (std::is_same_v<P, CaraPPolicy>) {
                return p.phi ? cara_p_decide(in.t, *p.phi, p.offset) : Decision::keep;
            } else if constexpr (std::is_same_v<P, MarkovPolicy>) {
                return markov_decide(in.t, in.t_prime, in.kappa_t, psi_bar());
            } else {
                return detect_in_batch(state, errors()) ? Decision::retrain : Decision::keep;
            }
        },
        policy);
}

/// Retraining loop over [start, end]: the model is trained at `start`, then each later batch
/// gets one decision; Retrain calls `on_retrain(t)` and moves t' to t.
template <class PsiFn, class ErrFn, class RetrainFn>
Strategy drive_policy(const Policy& policy, BatchIndex start, BatchIndex end, std::span<const double> kappa,
                      PsiFn&& psi_bar, ErrFn&& errors, RetrainFn&& on_retrain) {
    if (end < start) throw InvalidInput("policy range is empty");
    if (kappa.size() != end - start + 1) throw InvalidInput("kappa vector length does not match the policy range");
    PolicyState state = initial_state(policy, start);
    on_retrain(start);
    Strategy s{start, {start}};
    for (BatchIndex t = start + 1; t <= end; ++t) {
        const BatchIndex tp = state.last_trained;
        const DecisionInputs in{t, tp, kappa[t - start]};
        const Decision d = decide(
            policy, state, in, [&] { return psi_bar(t, tp); }, [&]() -> std::span<const Label> { return errors(t, tp); });
        if (d == Decision::retrain) {
            on_retrain(t);
            reset_after_retrain(state, t);
        }
        s.served_by.push_back(state.last_trained);
    }
    return s;
}

/// Source of relative staleness values for the online loop.
class StalenessSource {
public:
    virtual ~StalenessSource() = default;
    virtual double relative(BatchIndex t, BatchIndex t_prime) = 0;
};

/// Computes staleness from the models and batches as they are needed.
class LiveStaleness final : public StalenessSource {
public:
    LiveStaleness(ModelBank& bank, KernelConfig k) : bank_(&bank), k_(k) { k.validate(); }
    double relative(BatchIndex t, BatchIndex t_prime) override { return bank_->relative_staleness(t, t_prime, k_); }

private:
    ModelBank* bank_;
    KernelConfig k_;
};

/// Reads staleness from a precomputed matrix built from the same models.
class MatrixStaleness final : public StalenessSource {
public:
    explicit MatrixStaleness(const CostMatrix& c) : c_(&c) {}
    double relative(BatchIndex t, BatchIndex t_prime) override { return (*c_)(t_prime, t); }

private:
    const CostMatrix* c_;
};

/// Runs a policy online over [start, end] with models from `bank`.
inline Strategy run_policy(const Policy& policy, ModelBank& bank, StalenessSource& staleness,
                           std::span<const double> kappa, BatchIndex start, BatchIndex end) {
    const auto& stream = bank.stream();
    if (start < stream.first() || end > stream.last())
        throw InvalidInput("policy range [" + std::to_string(start) + ", " + std::to_string(end) +
                           "] not covered by the stream");
    return drive_policy(
        policy, start, end, kappa, [&](BatchIndex t, BatchIndex tp) { return staleness.relative(t, tp); },
        [&](BatchIndex t, BatchIndex tp) -> std::span<const Label> { return bank.losses(tp, t); },
        [&](BatchIndex t) { (void)bank.model(t); });
}

/// Convenience form that owns its model bank and computes staleness live.
inline Strategy run_policy(const Policy& policy, const Stream& stream, std::span<const double> kappa,
                           const ModelConfig& model_cfg, const KernelConfig& k, BatchIndex start, BatchIndex end) {
    ModelBank bank(stream, model_cfg);
    LiveStaleness live(bank, k);
    return run_policy(policy, bank, live, kappa, start, end);
}

/// Replays a staleness-driven policy against a cost matrix (no models involved).
/// Detector policies need per-sample errors and cannot be replayed this way.
inline Strategy replay_on_matrix(const Policy& policy, const CostMatrix& c) {
    if (is_detector(policy)) throw InvalidInput("detector policies cannot be replayed on a cost matrix");
    const auto kappa = c.kappa();
    return drive_policy(
        policy, c.start(), c.end(), kappa, [&](BatchIndex t, BatchIndex tp) { return c(tp, t); },
        [](BatchIndex, BatchIndex) -> std::span<const Label> { return {}; }, [](BatchIndex) {});
}

} // namespace cara
