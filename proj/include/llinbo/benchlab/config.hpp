#ifndef LLINBO_BENCHLAB_CONFIG_HPP
#define LLINBO_BENCHLAB_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include <llinbo/agents/agent_config.hpp>
#include <llinbo/benchlab/functions.hpp>
#include <llinbo/mechanisms/schedules.hpp>

namespace llinbo::bench {

enum class Policy { BO, LLAMBO, LLAMBOLight, Transient, Justify, Constrained };

inline constexpr std::array kAllPolicies{Policy::BO,        Policy::LLAMBO,  Policy::LLAMBOLight,
                                         Policy::Transient, Policy::Justify, Policy::Constrained};

inline std::string_view to_string(Policy p)
{
    switch (p) {
    case Policy::BO:
        return "BO";
    case Policy::LLAMBO:
        return "LLAMBO";
    case Policy::LLAMBOLight:
        return "LLAMBOLight";
    case Policy::Transient:
        return "Transient";
    case Policy::Justify:
        return "Justify";
    case Policy::Constrained:
        return "Constrained";
    }
    return "?";
}

inline Policy parse_policy(std::string_view s)
{
    for (auto p : kAllPolicies)
        if (to_string(p) == s)
            return p;
    throw std::invalid_argument("unknown policy: " + std::string(s));
}

inline bool uses_gp(Policy p)
{
    return p == Policy::BO || p == Policy::Transient || p == Policy::Justify || p == Policy::Constrained;
}

inline bool uses_agent(Policy p) { return p != Policy::BO; }

/// Where the initial D points come from. Auto: random for BO, the agent otherwise.
enum class WarmstartSource { Auto, Agent, Random };

struct RunConfig {
    FunctionName function = FunctionName::Branin2;
    Policy policy = Policy::BO;
    agents::AgentConfig agent{};
    Schedules schedules{};
    /// 0 selects 10 * D.
    int T = 0;
    int replications = 10;
    std::uint64_t root_seed = 0;
    double noise_variance = kDefaultNoiseVariance;
    int refit_every = 1;
    int mle_starts = 8;
    bool standardize = true;
    WarmstartSource warmstart = WarmstartSource::Auto;
    /// 0 selects D.
    int warmstart_count = 0;
    int workers = 1;
    std::string output;
    double llambo_alpha = 0.1;
    int llambo_candidates = 10;
    int llambo_surrogate_repeats = 5;

    std::size_t dim() const { return benchmark(function).dim; }
    int horizon() const { return T > 0 ? T : 10 * static_cast<int>(dim()); }
    int initial_points() const { return warmstart_count > 0 ? warmstart_count : static_cast<int>(dim()); }

    bool warmstart_from_agent() const
    {
        switch (warmstart) {
        case WarmstartSource::Agent:
            return true;
        case WarmstartSource::Random:
            return false;
        case WarmstartSource::Auto:
            return uses_agent(policy);
        }
        return false;
    }

    void validate() const
    {
        if (T < 0 || horizon() < 1)
            throw std::invalid_argument("RunConfig: T must be >= 1 (0 selects 10 D)");
        if (replications < 1)
            throw std::invalid_argument("RunConfig: replications must be >= 1");
        if (!(noise_variance > 0.0))
            throw std::invalid_argument("RunConfig: noise_variance must be positive");
        if (refit_every < 1)
            throw std::invalid_argument("RunConfig: refit_every must be >= 1");
        if (workers < 1)
            throw std::invalid_argument("RunConfig: workers must be >= 1");
        if (schedules.acquisition_budget != 0 && schedules.acquisition_budget < kMinAcquisitionBudget)
            throw std::invalid_argument("RunConfig: acquisition_budget must be 0 (auto) or >= 64");
    }
};

// ---- JSON ----------------------------------------------------------------

namespace detail {

inline nlohmann::json beta_to_json(const BetaSchedule& b)
{
    switch (b.mode) {
    case BetaSchedule::Mode::Practical:
        return {{"kind", "practical"}, {"delta", b.delta}};
    case BetaSchedule::Mode::Constant:
        return {{"kind", "constant"}, {"value", b.value}};
    case BetaSchedule::Mode::Theoretical:
        return {{"kind", "theoretical"},
                {"B", b.rkhs_bound},
                {"R", b.noise_bound},
                {"gamma", b.gamma_bound},
                {"delta", b.delta}};
    }
    return {};
}

inline BetaSchedule beta_from_json(const nlohmann::json& j)
{
    const std::string kind = j.value("kind", "practical");
    if (kind == "practical")
        return BetaSchedule::practical(j.value("delta", 0.1));
    if (kind == "constant")
        return BetaSchedule::constant(j.at("value").get<double>());
    if (kind == "theoretical")
        return BetaSchedule::theoretical(j.at("B").get<double>(), j.at("R").get<double>(),
                                         j.at("gamma").get<double>(), j.value("delta", 0.1));
    throw std::invalid_argument("unknown beta schedule kind: " + kind);
}

} // namespace detail

inline nlohmann::json schedules_to_json(const Schedules& s)
{
    nlohmann::json j;
    switch (s.p.kind) {
    case ProbabilitySchedule::Kind::QuadraticOverHorizon:
        j["p"] = {{"kind", "quadratic"}};
        break;
    case ProbabilitySchedule::Kind::Constant:
        j["p"] = {{"kind", "constant"}, {"value", s.p.value}};
        break;
    case ProbabilitySchedule::Kind::OneMinusInverse:
        j["p"] = {{"kind", "one_minus_inv_t"}};
        break;
    case ProbabilitySchedule::Kind::OneMinusInverseSquare:
        j["p"] = {{"kind", "one_minus_inv_t2"}};
        break;
    }
    switch (s.psi.kind) {
    case PsiSchedule::Kind::InverseTimeSigma0:
        j["psi"] = {{"kind", "inverse_t_sigma0"}};
        break;
    case PsiSchedule::Kind::Constant:
        j["psi"] = {{"kind", "constant"}, {"value", s.psi.value}};
        break;
    case PsiSchedule::Kind::Infinite:
        j["psi"] = {{"kind", "infinite"}};
        break;
    }
    if (s.samples.kind == SampleSchedule::Kind::InverseSquare)
        j["samples"] = {{"kind", "inverse_square"}, {"scale", s.samples.scale}};
    else
        j["samples"] = {{"kind", "constant"}, {"value", s.samples.value}};
    j["beta"] = detail::beta_to_json(s.beta);
    if (s.beta_tilde)
        j["beta_tilde"] = detail::beta_to_json(*s.beta_tilde);
    return j;
}

inline Schedules schedules_from_json(const nlohmann::json& j)
{
    Schedules s;
    if (j.contains("p")) {
        const auto& p = j["p"];
        const std::string kind = p.value("kind", "quadratic");
        if (kind == "quadratic")
            s.p.kind = ProbabilitySchedule::Kind::QuadraticOverHorizon;
        else if (kind == "constant") {
            s.p.kind = ProbabilitySchedule::Kind::Constant;
            s.p.value = p.at("value").get<double>();
        } else if (kind == "one_minus_inv_t")
            s.p.kind = ProbabilitySchedule::Kind::OneMinusInverse;
        else if (kind == "one_minus_inv_t2")
            s.p.kind = ProbabilitySchedule::Kind::OneMinusInverseSquare;
        else
            throw std::invalid_argument("unknown p schedule kind: " + kind);
    }
    if (j.contains("psi")) {
        const auto& p = j["psi"];
        const std::string kind = p.value("kind", "inverse_t_sigma0");
        if (kind == "inverse_t_sigma0")
            s.psi.kind = PsiSchedule::Kind::InverseTimeSigma0;
        else if (kind == "constant") {
            s.psi.kind = PsiSchedule::Kind::Constant;
            s.psi.value = p.at("value").get<double>();
        } else if (kind == "infinite")
            s.psi.kind = PsiSchedule::Kind::Infinite;
        else
            throw std::invalid_argument("unknown psi schedule kind: " + kind);
    }
    if (j.contains("samples")) {
        const auto& p = j["samples"];
        const std::string kind = p.value("kind", "inverse_square");
        if (kind == "inverse_square") {
            s.samples.kind = SampleSchedule::Kind::InverseSquare;
            s.samples.scale = p.value("scale", 1e4);
        } else if (kind == "constant") {
            s.samples.kind = SampleSchedule::Kind::Constant;
            s.samples.value = p.at("value").get<int>();
        } else
            throw std::invalid_argument("unknown samples schedule kind: " + kind);
    }
    if (j.contains("beta"))
        s.beta = detail::beta_from_json(j["beta"]);
    if (j.contains("beta_tilde") && !j["beta_tilde"].is_null())
        s.beta_tilde = detail::beta_from_json(j["beta_tilde"]);
    return s;
}

inline std::string_view to_string(WarmstartSource w)
{
    return w == WarmstartSource::Agent ? "agent" : w == WarmstartSource::Random ? "random" : "auto";
}

inline WarmstartSource parse_warmstart_source(std::string_view s)
{
    if (s == "auto")
        return WarmstartSource::Auto;
    if (s == "agent")
        return WarmstartSource::Agent;
    if (s == "random")
        return WarmstartSource::Random;
    throw std::invalid_argument("unknown warmstart source: " + std::string(s));
}

inline nlohmann::json to_json(const RunConfig& c)
{
    return {
        {"function", std::string(benchmark(c.function).id)},
        {"policy", std::string(to_string(c.policy))},
        {"agent", c.agent},
        {"schedules", schedules_to_json(c.schedules)},
        {"T", c.horizon()},
        {"replications", c.replications},
        {"root_seed", c.root_seed},
        {"acquisition_budget", c.schedules.acquisition_budget},
        {"noise_variance", c.noise_variance},
        {"refit_every", c.refit_every},
        {"mle_starts", c.mle_starts},
        {"standardize", c.standardize},
        {"warmstart", std::string(to_string(c.warmstart))},
        {"warmstart_count", c.initial_points()},
        {"workers", c.workers},
        {"output", c.output},
        {"llambo", {{"alpha", c.llambo_alpha},
                    {"candidates", c.llambo_candidates},
                    {"surrogate_repeats", c.llambo_surrogate_repeats}}},
    };
}

/// Missing keys keep their defaults.
inline RunConfig run_config_from_json(const nlohmann::json& j)
{
    RunConfig c;
    if (j.contains("function"))
        c.function = parse_function_name(j["function"].get<std::string>());
    if (j.contains("policy"))
        c.policy = parse_policy(j["policy"].get<std::string>());
    if (j.contains("agent"))
        c.agent = j["agent"].get<agents::AgentConfig>();
    if (j.contains("schedules"))
        c.schedules = schedules_from_json(j["schedules"]);
    c.T = j.value("T", c.T);
    c.replications = j.value("replications", c.replications);
    c.root_seed = j.value("root_seed", c.root_seed);
    c.schedules.acquisition_budget = j.value("acquisition_budget", c.schedules.acquisition_budget);
    c.noise_variance = j.value("noise_variance", c.noise_variance);
    c.refit_every = j.value("refit_every", c.refit_every);
    c.mle_starts = j.value("mle_starts", c.mle_starts);
    c.standardize = j.value("standardize", c.standardize);
    if (j.contains("warmstart"))
        c.warmstart = parse_warmstart_source(j["warmstart"].get<std::string>());
    c.warmstart_count = j.value("warmstart_count", c.warmstart_count);
    c.workers = j.value("workers", c.workers);
    c.output = j.value("output", c.output);
    if (j.contains("llambo")) {
        const auto& l = j["llambo"];
        c.llambo_alpha = l.value("alpha", c.llambo_alpha);
        c.llambo_candidates = l.value("candidates", c.llambo_candidates);
        c.llambo_surrogate_repeats = l.value("surrogate_repeats", c.llambo_surrogate_repeats);
    }
    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    return run_config_from_json(nlohmann::json::parse(in));
}

} // namespace llinbo::bench

#endif
