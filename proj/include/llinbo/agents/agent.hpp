#ifndef LLINBO_AGENTS_AGENT_HPP
#define LLINBO_AGENTS_AGENT_HPP

#include <optional>
#include <string>
#include <vector>

#include <llinbo/core/design.hpp>

namespace llinbo::agents {

enum class ObjectiveSense { Maximize };

/// What an agent is told about the task.
struct ProblemContext {
    /// Function patterns text for the description card. May be empty for mocks.
    std::string description;
    std::size_t dim = 1;
    ObjectiveSense sense = ObjectiveSense::Maximize;
    /// Ground-truth optimum; only mock agents may look at it.
    std::optional<Design> known_optimum;
};

struct AgentSuggestion {
    Design design;
    /// Reply text (or mock label) plus clamp/fallback audit notes.
    std::string raw_payload;
    int attempts = 1;
    bool clamped = false;
    bool fallback = false;
};

/// The suggestion agent consulted by the run loop.
///
/// The candidate-sampling and surrogate hooks serve the LLAMBO baseline; agents
/// that cannot answer them return nullopt.
class Agent {
public:
    virtual ~Agent() = default;

    virtual std::vector<Design> warmstart(const ProblemContext& ctx, int count) = 0;
    virtual AgentSuggestion suggest(const ProblemContext& ctx, const Dataset& history, int t) = 0;

    /// One candidate aiming at `target_score`; the history is given in the order to render.
    virtual std::optional<AgentSuggestion> sample_candidate(const ProblemContext& ctx, const Dataset& history,
                                                            double target_score)
    {
        (void)target_score;
        return suggest(ctx, history, static_cast<int>(history.size()));
    }

    /// Predicted outcome at x, or nullopt when the agent has no surrogate.
    virtual std::optional<double> predict(const ProblemContext&, const Dataset&, const Design&) { return std::nullopt; }

    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    int fallback_count() const noexcept { return fallbacks_; }

protected:
    void warn(std::string message) { warnings_.push_back(std::move(message)); }
    void count_fallback() { ++fallbacks_; }

private:
    std::vector<std::string> warnings_;
    int fallbacks_ = 0;
};

} // namespace llinbo::agents

#endif
