#ifndef LLINBO_BENCHLAB_LLAMBO_HPP
#define LLINBO_BENCHLAB_LLAMBO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <llinbo/agents/agent.hpp>
#include <llinbo/agents/mock_agents.hpp>
#include <llinbo/core/random.hpp>

namespace llinbo::bench {

/// max y - alpha (max y - min y).
inline double target_score(const Dataset& history, double alpha)
{
    if (history.empty())
        throw std::invalid_argument("target_score: history is empty");
    const double hi = history.best_outcome();
    const double lo = history.worst_outcome();
    return hi - alpha * (hi - lo);
}

/// Expected improvement over `incumbent` for a Gaussian N(mean, sd^2) prediction.
inline double expected_improvement(double mean, double sd, double incumbent)
{
    const double gain = mean - incumbent;
    if (!(sd > 0.0))
        return std::max(gain, 0.0);
    const double z = gain / sd;
    const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return gain * cdf + sd * pdf;
}

/// Copy of `history` in a random order.
inline Dataset permuted(const Dataset& history, Rng& rng)
{
    std::vector<std::size_t> order(history.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    Dataset out(history.dim());
    for (auto i : order)
        out.add(history[i].design, history[i].outcome);
    return out;
}

struct LlamboCandidate {
    Design design;
    /// Empty when the agent gave no surrogate predictions.
    std::vector<double> predictions;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double sd = std::numeric_limits<double>::quiet_NaN();
    double ei = -std::numeric_limits<double>::infinity();
};

struct LlamboResult {
    Design chosen;
    double target_score;
    std::vector<LlamboCandidate> candidates;
    bool fallback = false;
};

struct LlamboOptions {
    double alpha = 0.1;
    int candidates = 10;
    int surrogate_repeats = 5;
};

/// Candidate sampling toward the target score, prompted-surrogate scoring and EI selection.
///
/// Each prompt sees the history in a fresh random order. Candidates the agent
/// cannot score rank below every scored one; when nothing is scored the first
/// candidate is kept. No parsed candidate at all falls back to a uniform design.
inline LlamboResult llambo_step(agents::Agent& agent, const agents::ProblemContext& ctx, const Dataset& history,
                                const LlamboOptions& opts, std::uint64_t rng_seed)
{
    if (history.empty())
        throw std::invalid_argument("llambo_step: history is empty");
    if (opts.candidates < 1 || opts.surrogate_repeats < 1)
        throw std::invalid_argument("llambo_step: candidates and surrogate_repeats must be >= 1");
    Rng rng(rng_seed);
    const double target = target_score(history, opts.alpha);
    const double incumbent = history.best_outcome();

    std::vector<LlamboCandidate> cands;
    for (int c = 0; c < opts.candidates; ++c) {
        auto s = agent.sample_candidate(ctx, permuted(history, rng), target);
        if (s && !s->fallback)
            cands.push_back({s->design, {}});
    }
    if (cands.empty())
        return {agents::uniform_design(ctx.dim, rng), target, {}, true};
    if (cands.size() == 1)
        return {cands.front().design, target, cands, false};

    std::size_t best = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        auto& c = cands[i];
        for (int r = 0; r < opts.surrogate_repeats; ++r)
            if (auto p = agent.predict(ctx, permuted(history, rng), c.design); p && std::isfinite(*p))
                c.predictions.push_back(*p);
        if (c.predictions.empty())
            continue;
        const auto n = static_cast<double>(c.predictions.size());
        c.mean = std::accumulate(c.predictions.begin(), c.predictions.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : c.predictions)
            ss += (v - c.mean) * (v - c.mean);
        c.sd = c.predictions.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        c.ei = expected_improvement(c.mean, c.sd, incumbent);
        if (c.ei > cands[best].ei)
            best = i;
    }
    return {cands[best].design, target, cands, false};
}

} // namespace llinbo::bench

#endif
