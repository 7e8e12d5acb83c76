#ifndef LLINBO_BENCHLAB_RUNNER_HPP
#define LLINBO_BENCHLAB_RUNNER_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include <llinbo/agents/factory.hpp>
#include <llinbo/benchlab/config.hpp>
#include <llinbo/benchlab/functions.hpp>
#include <llinbo/benchlab/llambo.hpp>
#include <llinbo/benchlab/trace.hpp>
#include <llinbo/core/gp.hpp>
#include <llinbo/mechanisms/mechanisms.hpp>

namespace llinbo::bench {

using AgentFactory = std::function<std::unique_ptr<agents::Agent>(const RunConfig&, std::uint64_t seed)>;

inline std::unique_ptr<agents::Agent> default_agent_factory(const RunConfig& cfg, std::uint64_t seed)
{
    return agents::make_agent(cfg.agent, seed);
}

/// A replication that could not finish.
class ReplicationError : public std::runtime_error {
public:
    ReplicationError(int replication, int t, const std::string& what)
        : std::runtime_error("replication " + std::to_string(replication) + ", t=" + std::to_string(t) + ": " + what),
          replication_(replication), t_(t)
    {
    }
    int replication() const noexcept { return replication_; }
    int iteration() const noexcept { return t_; }

private:
    int replication_;
    int t_;
};

inline agents::ProblemContext problem_context(const BenchmarkFunction& f)
{
    return {std::string(f.description), f.dim, agents::ObjectiveSense::Maximize, f.argmax()};
}

/// Seeds for replication `rep`: iteration t uses iteration_seed(root, rep, t);
/// t = 0 is reserved for the warmstart and the agent.
inline std::uint64_t iteration_seed(std::uint64_t root, int rep, int t)
{
    return derive_seed(root, {static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(t)});
}

/// One replication: warmstart, then T rounds of fit, suggest, decide, evaluate.
inline RegretTrace run_once(const RunConfig& cfg, int replication, const AgentFactory& factory = default_agent_factory)
{
    cfg.validate();
    const BenchmarkFunction& f = benchmark(cfg.function);
    const std::size_t D = f.dim;
    const int T = cfg.horizon();
    const auto ctx = problem_context(f);
    const std::uint64_t rep_seed = iteration_seed(cfg.root_seed, replication, 0);

    Schedules sched = cfg.schedules;
    sched.horizon = T;

    std::unique_ptr<agents::Agent> agent;
    if (uses_agent(cfg.policy) || cfg.warmstart_from_agent())
        agent = factory(cfg, derive_seed(rep_seed, Stream::Agent));

    RegretTrace trace;
    trace.config = to_json(cfg);
    trace.replication = replication;
    trace.known_max = f.known_max;

    Dataset data(D);
    const int n0 = cfg.initial_points();
    std::vector<Design> initial;
    if (cfg.warmstart_from_agent()) {
        initial = agent->warmstart(ctx, n0);
    } else {
        Rng rng(derive_seed(rep_seed, Stream::Warmstart));
        for (int i = 0; i < n0; ++i)
            initial.push_back(agents::uniform_design(D, rng));
    }
    for (const auto& x : initial) {
        const double y = f.eval(x);
        data.add(x, y);
        trace.warmstart.push_back({x, y});
    }

    std::optional<GPModel> model;
    double best = data.empty() ? -std::numeric_limits<double>::infinity() : data.best_outcome();
    for (int t = 1; t <= T; ++t) {
        const std::uint64_t seed = iteration_seed(cfg.root_seed, replication, t);

        if (uses_gp(cfg.policy)) {
            try {
                if (data.empty())
                    throw std::invalid_argument("no observations to fit");
                if (!model || (t - 1) % cfg.refit_every == 0) {
                    MleOptions mle;
                    mle.starts = cfg.mle_starts;
                    mle.standardize = cfg.standardize;
                    mle.seed = derive_seed(seed, Stream::Iteration);
                    model = fit_gp(data, cfg.noise_variance, Mle{mle});
                } else {
                    model = fit_gp(data, cfg.noise_variance, FixedSpec{model->spec(), model->scaling()});
                }
            } catch (const std::exception& e) {
                throw ReplicationError(replication, t, std::string("GP fit failed: ") + e.what());
            }
        }

        std::optional<agents::AgentSuggestion> suggestion;
        if (cfg.policy != Policy::BO && cfg.policy != Policy::LLAMBO)
            suggestion = agent->suggest(ctx, data, t);

        std::optional<MechanismDecision> decision;
        switch (cfg.policy) {
        case Policy::BO:
            decision = ucb_step(*model, t, sched, seed);
            break;
        case Policy::Transient:
            decision = transient_step(*model, suggestion->design, t, sched, seed);
            break;
        case Policy::Justify:
            if (t == 1 && std::isnan(sched.sigma0))
                sched.sigma0 = std::sqrt(model->variance(suggestion->design));
            decision = justify_step(*model, suggestion->design, t, sched, seed);
            break;
        case Policy::Constrained:
            decision = constrained_step(*model, suggestion->design, t, sched, seed);
            break;
        case Policy::LLAMBOLight:
            decision = MechanismDecision{suggestion->design, DecisionSource::FromLLM, {}};
            break;
        case Policy::LLAMBO: {
            const LlamboOptions opts{cfg.llambo_alpha, cfg.llambo_candidates, cfg.llambo_surrogate_repeats};
            auto r = llambo_step(*agent, ctx, data, opts, derive_seed(seed, Stream::Llambo));
            decision = MechanismDecision{r.chosen, DecisionSource::FromLLM,
                                         {{"target_score", r.target_score},
                                          {"candidates", static_cast<double>(r.candidates.size())},
                                          {"llambo_fallback", r.fallback ? 1.0 : 0.0}}};
            break;
        }
        }

        if (suggestion) {
            decision->diagnostics["agent_attempts"] = suggestion->attempts;
            decision->diagnostics["agent_fallback"] = suggestion->fallback ? 1.0 : 0.0;
            decision->diagnostics["agent_clamped"] = suggestion->clamped ? 1.0 : 0.0;
        }

        const double y = f.eval(decision->chosen);
        data.add(decision->chosen, y);
        best = std::max(best, y);
        trace.records.push_back({t, decision->source, decision->chosen.values(), y, best,
                                 f.known_max - best, std::move(decision->diagnostics)});
    }

    if (agent) {
        trace.warnings = agent->warnings();
        trace.agent_fallbacks = agent->fallback_count();
    }
    return trace;
}

struct ExperimentSummary {
    RunConfig config;
    /// Completed traces, ordered by replication index.
    std::vector<RegretTrace> traces;
    std::vector<std::string> failures;
    std::vector<AggregateRow> aggregate;
    bool complete() const { return failures.empty(); }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["config"] = bench::to_json(config);
        j["replications_requested"] = config.replications;
        j["replications_completed"] = traces.size();
        j["complete"] = complete();
        j["failures"] = failures;
        int fallbacks = 0;
        for (const auto& tr : traces)
            fallbacks += tr.agent_fallbacks;
        j["agent_fallbacks"] = fallbacks;
        if (!aggregate.empty()) {
            j["final_mean_G"] = aggregate.back().mean_G;
            j["initial_mean_G"] = aggregate.front().mean_G;
        }
        return j;
    }
};

inline std::string trace_file_name(int replication)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "trace_rep%03d.jsonl", replication);
    return buf;
}

/// All replications, optionally on `cfg.workers` threads. Failed replications are
/// recorded and excluded from the aggregate. With a non-empty `cfg.output`
/// directory, writes one trace per replication, aggregate.csv and summary.json.
inline ExperimentSummary run_experiment(const RunConfig& cfg, const AgentFactory& factory = default_agent_factory)
{
    cfg.validate();
    const int R = cfg.replications;
    std::vector<std::optional<RegretTrace>> results(static_cast<std::size_t>(R));
    std::vector<std::string> errors(static_cast<std::size_t>(R));

    auto run_rep = [&](int r) {
        try {
            results[static_cast<std::size_t>(r)] = run_once(cfg, r, factory);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(r)] = e.what();
        }
    };
    const int workers = std::min(cfg.workers, R);
    if (workers <= 1) {
        for (int r = 0; r < R; ++r)
            run_rep(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int r = next++; r < R; r = next++)
                    run_rep(r);
            });
        for (auto& th : pool)
            th.join();
    }

    ExperimentSummary summary{cfg, {}, {}, {}};
    for (int r = 0; r < R; ++r) {
        if (results[static_cast<std::size_t>(r)])
            summary.traces.push_back(std::move(*results[static_cast<std::size_t>(r)]));
        else
            summary.failures.push_back(errors[static_cast<std::size_t>(r)]);
    }
    summary.aggregate = aggregate(summary.traces);

    if (!cfg.output.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.output);
        for (const auto& tr : summary.traces)
            write_trace_file((fs::path(cfg.output) / trace_file_name(tr.replication)).string(), tr);
        std::ofstream csv(fs::path(cfg.output) / "aggregate.csv");
        write_aggregate_csv(csv, summary.aggregate);
        std::ofstream js(fs::path(cfg.output) / "summary.json");
        js << summary.to_json().dump(2) << '\n';
    }
    return summary;
}

/// Reads every trace_*.jsonl in `dir`, ordered by file name.
inline std::vector<RegretTrace> load_traces(const std::string& dir)
{
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".jsonl" && e.path().filename().string().rfind("trace", 0) == 0)
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<RegretTrace> out;
    for (const auto& p : files)
        out.push_back(read_trace_file(p.string()));
    return out;
}

} // namespace llinbo::bench

#endif
