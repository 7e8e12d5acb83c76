#ifndef LLINBO_AGENTS_AGENT_CONFIG_HPP
#define LLINBO_AGENTS_AGENT_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include <llinbo/agents/prompts.hpp>

namespace llinbo::agents {

struct ChatSettings {
    /// Full URL of the chat-completion route, e.g. https://host/v1/chat/completions.
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-3.5-turbo";
    double temperature = 1.0;
    double timeout_seconds = 30.0;
    int max_retries = 3;
    /// Name of the environment variable holding the bearer token.
    std::string api_key_env = "LLINBO_API_KEY";
    std::string system_prompt = std::string(kBlackBoxSystemPrompt);
};

struct AgentConfig {
    enum class Kind { OracleNoise, UniformRandom, Adversarial, Replay, ChatCompletion };

    Kind kind = Kind::UniformRandom;
    double sigma = 0.1; // OracleNoise
    std::string replay_path; // Replay
    ChatSettings chat{}; // ChatCompletion
    std::uint64_t seed = 0;
};

inline std::string_view to_string(AgentConfig::Kind k)
{
    switch (k) {
    case AgentConfig::Kind::OracleNoise:
        return "OracleNoise";
    case AgentConfig::Kind::UniformRandom:
        return "UniformRandom";
    case AgentConfig::Kind::Adversarial:
        return "Adversarial";
    case AgentConfig::Kind::Replay:
        return "Replay";
    case AgentConfig::Kind::ChatCompletion:
        return "ChatCompletion";
    }
    return "?";
}

inline AgentConfig::Kind parse_agent_kind(std::string_view s)
{
    for (auto k : {AgentConfig::Kind::OracleNoise, AgentConfig::Kind::UniformRandom, AgentConfig::Kind::Adversarial,
                   AgentConfig::Kind::Replay, AgentConfig::Kind::ChatCompletion})
        if (to_string(k) == s)
            return k;
    throw std::invalid_argument("unknown agent kind: " + std::string(s));
}

inline void to_json(nlohmann::json& j, const AgentConfig& c)
{
    j = {{"kind", std::string(to_string(c.kind))}, {"seed", c.seed}};
    switch (c.kind) {
    case AgentConfig::Kind::OracleNoise:
        j["sigma"] = c.sigma;
        break;
    case AgentConfig::Kind::Replay:
        j["replay_path"] = c.replay_path;
        break;
    case AgentConfig::Kind::ChatCompletion:
        // The key itself is never serialized, only the variable name.
        j["endpoint"] = c.chat.endpoint;
        j["model"] = c.chat.model;
        j["temperature"] = c.chat.temperature;
        j["timeout_seconds"] = c.chat.timeout_seconds;
        j["max_retries"] = c.chat.max_retries;
        j["api_key_env"] = c.chat.api_key_env;
        j["system_prompt"] = c.chat.system_prompt;
        break;
    default:
        break;
    }
}

inline void from_json(const nlohmann::json& j, AgentConfig& c)
{
    c = AgentConfig{};
    c.kind = parse_agent_kind(j.at("kind").get<std::string>());
    c.seed = j.value("seed", std::uint64_t{0});
    c.sigma = j.value("sigma", c.sigma);
    c.replay_path = j.value("replay_path", c.replay_path);
    c.chat.endpoint = j.value("endpoint", c.chat.endpoint);
    c.chat.model = j.value("model", c.chat.model);
    c.chat.temperature = j.value("temperature", c.chat.temperature);
    c.chat.timeout_seconds = j.value("timeout_seconds", c.chat.timeout_seconds);
    c.chat.max_retries = j.value("max_retries", c.chat.max_retries);
    c.chat.api_key_env = j.value("api_key_env", c.chat.api_key_env);
    c.chat.system_prompt = j.value("system_prompt", c.chat.system_prompt);
    if (c.chat.max_retries < 0)
        throw std::invalid_argument("agent.max_retries must be non-negative");
    if (!(c.chat.timeout_seconds > 0.0))
        throw std::invalid_argument("agent.timeout_seconds must be positive");
}

} // namespace llinbo::agents

#endif
