#ifndef LLINBO_AGENTS_FACTORY_HPP
#define LLINBO_AGENTS_FACTORY_HPP

#include <memory>

#include <llinbo/agents/agent_config.hpp>
#include <llinbo/agents/chat_agent.hpp>
#include <llinbo/agents/mock_agents.hpp>

namespace llinbo::agents {

/// `seed` is the per-replication stream; it is mixed with the configured agent seed.
inline std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, std::uint64_t seed)
{
    const std::uint64_t s = derive_seed(seed, {cfg.seed});
    switch (cfg.kind) {
    case AgentConfig::Kind::OracleNoise:
        return std::make_unique<OracleNoiseAgent>(cfg.sigma, s);
    case AgentConfig::Kind::UniformRandom:
        return std::make_unique<UniformRandomAgent>(s);
    case AgentConfig::Kind::Adversarial:
        return std::make_unique<AdversarialAgent>(s);
    case AgentConfig::Kind::Replay:
        return std::make_unique<ReplayAgent>(cfg.replay_path);
    case AgentConfig::Kind::ChatCompletion:
        return std::make_unique<ChatAgent>(cfg.chat, s);
    }
    throw std::invalid_argument("make_agent: unknown agent kind");
}

} // namespace llinbo::agents

#endif
