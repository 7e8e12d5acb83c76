#ifndef LLINBO_MECHANISMS_MECHANISMS_HPP
#define LLINBO_MECHANISMS_MECHANISMS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include <llinbo/acquisition/constrained.hpp>
#include <llinbo/acquisition/maximize.hpp>
#include <llinbo/acquisition/ucb.hpp>
#include <llinbo/core/random.hpp>
#include <llinbo/mechanisms/schedules.hpp>

namespace llinbo {

enum class DecisionSource { FromGP, FromLLM, FromCGP };

inline std::string_view to_string(DecisionSource s)
{
    switch (s) {
    case DecisionSource::FromGP:
        return "FromGP";
    case DecisionSource::FromLLM:
        return "FromLLM";
    case DecisionSource::FromCGP:
        return "FromCGP";
    }
    return "?";
}

inline DecisionSource parse_decision_source(std::string_view s)
{
    if (s == "FromGP")
        return DecisionSource::FromGP;
    if (s == "FromLLM")
        return DecisionSource::FromLLM;
    if (s == "FromCGP")
        return DecisionSource::FromCGP;
    throw std::invalid_argument("unknown decision source: " + std::string(s));
}

struct MechanismDecision {
    Design chosen;
    DecisionSource source;
    std::map<std::string, double> diagnostics;
};

// Every step takes a per-iteration seed and derives its sub-streams from it with
// the same Stream tags, so a mechanism that collapses to plain UCB reproduces
// ucb_step bit-for-bit.

namespace detail {

inline void check_step_args(int t, std::size_t belief_dim, const Design* x_llm)
{
    if (t < 1)
        throw std::invalid_argument("mechanism step: t must be >= 1");
    if (x_llm && x_llm->dim() != belief_dim)
        throw std::invalid_argument("mechanism step: suggestion dimension does not match the model");
}

template <Belief B>
AcquisitionResult ucb_argmax(const B& belief, int t, const Schedules& sched, std::uint64_t rng_seed)
{
    const std::size_t D = belief.dim();
    const double beta = sched.beta_at(t, D);
    auto af = [&](const Design& x) { return ucb(belief, x, beta); };
    return maximize_acquisition(af, D, sched.budget(D), derive_seed(rng_seed, Stream::Acquisition));
}

} // namespace detail

/// Plain GP-UCB: the argmax of the UCB acquisition.
template <Belief B>
MechanismDecision ucb_step(const B& belief, int t, const Schedules& sched, std::uint64_t rng_seed)
{
    detail::check_step_args(t, belief.dim(), nullptr);
    auto res = detail::ucb_argmax(belief, t, sched, rng_seed);
    return {std::move(res.argmax), DecisionSource::FromGP,
            {{"af_max", res.value}, {"beta", sched.beta_at(t, belief.dim())}}};
}

/// Transient: z ~ Bernoulli(p_t); z = 1 takes the UCB argmax, z = 0 the agent's design.
/// The UCB argmax is only computed when it is chosen.
template <Belief B>
MechanismDecision transient_step(const B& belief, const Design& x_llm, int t, const Schedules& sched,
                                 std::uint64_t rng_seed)
{
    detail::check_step_args(t, belief.dim(), &x_llm);
    const double p = sched.p_at(t);
    Rng rng(derive_seed(rng_seed, Stream::Bernoulli));
    const double u = uniform01(rng);
    const bool take_gp = u < p;
    std::map<std::string, double> diag{{"p_t", p}, {"bernoulli_draw", take_gp ? 1.0 : 0.0}};
    if (!take_gp)
        return {x_llm, DecisionSource::FromLLM, std::move(diag)};
    auto res = detail::ucb_argmax(belief, t, sched, rng_seed);
    diag["af_max"] = res.value;
    return {std::move(res.argmax), DecisionSource::FromGP, std::move(diag)};
}

/// Justify: keep the agent's design iff ucb(x_llm) > max_x ucb(x) - psi_t,
/// otherwise fall back to the UCB argmax.
template <Belief B>
MechanismDecision justify_step(const B& belief, const Design& x_llm, int t, const Schedules& sched,
                               std::uint64_t rng_seed)
{
    detail::check_step_args(t, belief.dim(), &x_llm);
    const double beta = sched.beta_at(t, belief.dim());
    const double psi = sched.psi_at(t);
    if (psi < 0.0 || std::isnan(psi))
        throw std::invalid_argument("justify_step: psi_t must be non-negative");
    auto res = detail::ucb_argmax(belief, t, sched, rng_seed);
    const double at_llm = ucb(belief, x_llm, beta);
    const bool accept = at_llm > res.value - psi;
    std::map<std::string, double> diag{{"af_max", res.value},
                                       {"af_llm", at_llm},
                                       {"af_gap", res.value - at_llm},
                                       {"psi_t", psi},
                                       {"accepted", accept ? 1.0 : 0.0}};
    if (accept)
        return {x_llm, DecisionSource::FromLLM, std::move(diag)};
    return {std::move(res.argmax), DecisionSource::FromGP, std::move(diag)};
}

/// Constrained: condition the GP on f(x_llm) > kappa by rejection sampling and
/// maximize CGP-UCB. With no retained draws this is exactly ucb_step.
inline MechanismDecision constrained_step(const GPModel& model, const Design& x_llm, int t, const Schedules& sched,
                                          std::uint64_t rng_seed)
{
    detail::check_step_args(t, model.dim(), &x_llm);
    const std::size_t D = model.dim();
    const long budget = sched.budget(D);
    const double k = kappa(model, D, budget, derive_seed(rng_seed, Stream::Kappa));
    const int s_t = sched.samples_at(t);
    const ConstrainedPosterior cp = build_constrained(model, x_llm, k, s_t, derive_seed(rng_seed, Stream::Sampling));
    const double beta_tilde = sched.beta_tilde_at(t, D, s_t);
    auto af = [&](const Design& x) { return cgp_ucb(cp, x, beta_tilde); };
    auto res = maximize_acquisition(af, D, budget, derive_seed(rng_seed, Stream::Acquisition));
    const auto retained = cp.retained_count();
    return {std::move(res.argmax), retained ? DecisionSource::FromCGP : DecisionSource::FromGP,
            {{"kappa", k},
             {"samples_drawn", static_cast<double>(s_t)},
             {"retained_count", static_cast<double>(retained)},
             {"beta_tilde", beta_tilde},
             {"af_max", res.value}}};
}

} // namespace llinbo

#endif
