#ifndef LLINBO_AGENTS_MOCK_AGENTS_HPP
#define LLINBO_AGENTS_MOCK_AGENTS_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <llinbo/agents/agent.hpp>
#include <llinbo/core/random.hpp>

namespace llinbo::agents {

inline Design uniform_design(std::size_t dim, Rng& rng)
{
    std::vector<double> x(dim);
    for (double& c : x)
        c = uniform01(rng);
    return Design(std::move(x));
}

namespace detail {

inline const Design& require_optimum(const ProblemContext& ctx, const char* who)
{
    if (!ctx.known_optimum)
        throw std::invalid_argument(std::string(who) + " agent needs ProblemContext::known_optimum");
    if (ctx.known_optimum->dim() != ctx.dim)
        throw std::invalid_argument(std::string(who) + " agent: optimum dimension mismatch");
    return *ctx.known_optimum;
}

} // namespace detail

/// Independent uniform draws on [0,1]^D.
class UniformRandomAgent final : public Agent {
public:
    explicit UniformRandomAgent(std::uint64_t seed) : rng_(seed) {}

    std::vector<Design> warmstart(const ProblemContext& ctx, int count) override
    {
        std::vector<Design> out;
        for (int i = 0; i < count; ++i)
            out.push_back(uniform_design(ctx.dim, rng_));
        return out;
    }

    AgentSuggestion suggest(const ProblemContext& ctx, const Dataset&, int) override
    {
        return {uniform_design(ctx.dim, rng_), "uniform-random"};
    }

private:
    Rng rng_;
};

/// The true optimum perturbed by N(0, sigma^2) per coordinate, clamped.
class OracleNoiseAgent final : public Agent {
public:
    OracleNoiseAgent(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed)
    {
        if (!(sigma >= 0.0))
            throw std::invalid_argument("OracleNoiseAgent: sigma must be non-negative");
    }

    std::vector<Design> warmstart(const ProblemContext& ctx, int count) override
    {
        std::vector<Design> out;
        for (int i = 0; i < count; ++i)
            out.push_back(draw(ctx).design);
        return out;
    }

    AgentSuggestion suggest(const ProblemContext& ctx, const Dataset&, int) override { return draw(ctx); }

private:
    AgentSuggestion draw(const ProblemContext& ctx)
    {
        const Design& opt = detail::require_optimum(ctx, "OracleNoise");
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> x(opt.values());
        bool clamped = false;
        for (double& c : x) {
            c += sigma_ * noise(rng_);
            clamped = clamped || c < 0.0 || c > 1.0;
        }
        return {Design::clamped(std::move(x)), clamped ? "oracle-noise [clamped]" : "oracle-noise", 1, clamped};
    }

    double sigma_;
    Rng rng_;
};

/// Among 128 uniform candidates, the one farthest from the true optimum.
class AdversarialAgent final : public Agent {
public:
    static constexpr int kCandidates = 128;

    explicit AdversarialAgent(std::uint64_t seed) : rng_(seed) {}

    std::vector<Design> warmstart(const ProblemContext& ctx, int count) override
    {
        std::vector<Design> out;
        for (int i = 0; i < count; ++i)
            out.push_back(draw(ctx).design);
        return out;
    }

    AgentSuggestion suggest(const ProblemContext& ctx, const Dataset&, int) override { return draw(ctx); }

private:
    AgentSuggestion draw(const ProblemContext& ctx)
    {
        const Design& opt = detail::require_optimum(ctx, "Adversarial");
        Design best = uniform_design(ctx.dim, rng_);
        double best_d = distance2(best, opt);
        for (int i = 1; i < kCandidates; ++i) {
            Design c = uniform_design(ctx.dim, rng_);
            const double d = distance2(c, opt);
            if (d > best_d) {
                best_d = d;
                best = std::move(c);
            }
        }
        return {std::move(best), "adversarial"};
    }

    static double distance2(const Design& a, const Design& b)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a.dim(); ++i)
            s += (a[i] - b[i]) * (a[i] - b[i]);
        return s;
    }

    Rng rng_;
};

/// Replays designs from a JSON-lines file (one coordinate array per line), in order.
/// Running out of lines is an error.
class ReplayAgent final : public Agent {
public:
    explicit ReplayAgent(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("ReplayAgent: cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            auto j = nlohmann::json::parse(line);
            if (!j.is_array())
                throw std::runtime_error("ReplayAgent: line is not a JSON array: " + line);
            lines_.push_back(j.get<std::vector<double>>());
        }
    }

    explicit ReplayAgent(std::vector<std::vector<double>> designs) : lines_(std::move(designs)) {}

    std::vector<Design> warmstart(const ProblemContext& ctx, int count) override
    {
        std::vector<Design> out;
        for (int i = 0; i < count; ++i)
            out.push_back(next(ctx).design);
        return out;
    }

    AgentSuggestion suggest(const ProblemContext& ctx, const Dataset&, int) override { return next(ctx); }

    std::size_t remaining() const noexcept { return lines_.size() - cursor_; }

private:
    AgentSuggestion next(const ProblemContext& ctx)
    {
        if (cursor_ >= lines_.size())
            throw std::runtime_error("ReplayAgent: replay file exhausted after " + std::to_string(lines_.size())
                                     + " designs");
        const auto& raw = lines_[cursor_++];
        if (raw.size() != ctx.dim)
            throw std::runtime_error("ReplayAgent: recorded design has dimension " + std::to_string(raw.size())
                                     + ", expected " + std::to_string(ctx.dim));
        bool clamped = false;
        for (double c : raw)
            clamped = clamped || c < 0.0 || c > 1.0;
        return {Design::clamped(raw), nlohmann::json(raw).dump() + (clamped ? " [clamped]" : ""), 1, clamped};
    }

    std::vector<std::vector<double>> lines_;
    std::size_t cursor_ = 0;
};

} // namespace llinbo::agents

#endif
