#ifndef LLINBO_AGENTS_CHAT_AGENT_HPP
#define LLINBO_AGENTS_CHAT_AGENT_HPP

#include <chrono>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <llinbo/agents/detail/httplib.hpp>
#include <nlohmann/json.hpp>

#include <llinbo/agents/agent.hpp>
#include <llinbo/agents/agent_config.hpp>
#include <llinbo/agents/mock_agents.hpp>
#include <llinbo/agents/prompts.hpp>
#include <llinbo/core/random.hpp>

namespace llinbo::agents {

struct ChatReply {
    bool ok = false;
    std::string content;
    std::string error;
};

/// One system+user exchange with a chat-completion service.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual ChatReply complete(const std::string& system_prompt, const std::string& user_prompt) = 0;
};

struct Endpoint {
    std::string origin; // scheme://host[:port]
    std::string path;
};

inline Endpoint split_endpoint(const std::string& url)
{
    const auto scheme = url.find("://");
    const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

inline nlohmann::json chat_request_body(const ChatSettings& s, const std::string& system_prompt,
                                        const std::string& user_prompt)
{
    return {
        {"model", s.model},
        {"temperature", s.temperature},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", system_prompt}},
                                {{"role", "user"}, {"content", user_prompt}}})},
    };
}

/// JSON-over-HTTP(S) client for OpenAI-style /chat/completions routes.
class HttpChatTransport final : public ChatTransport {
public:
    explicit HttpChatTransport(ChatSettings settings) : settings_(std::move(settings)) {}

    ChatReply complete(const std::string& system_prompt, const std::string& user_prompt) override
    {
        const Endpoint ep = split_endpoint(settings_.endpoint);
        httplib::Client client(ep.origin);
        const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::duration<double>(settings_.timeout_seconds));
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        httplib::Headers headers;
        if (const char* key = std::getenv(settings_.api_key_env.c_str()); key && *key)
            headers.emplace("Authorization", std::string("Bearer ") + key);

        const std::string body = chat_request_body(settings_, system_prompt, user_prompt).dump();
        auto res = client.Post(ep.path, headers, body, "application/json");
        if (!res)
            return {false, {}, "transport error: " + httplib::to_string(res.error())};
        if (res->status != 200)
            return {false, {}, "HTTP status " + std::to_string(res->status)};
        auto j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded())
            return {false, {}, "response body is not JSON"};
        try {
            return {true, j.at("choices").at(0).at("message").at("content").get<std::string>(), {}};
        } catch (const nlohmann::json::exception& e) {
            return {false, {}, std::string("unexpected response shape: ") + e.what()};
        }
    }

private:
    ChatSettings settings_;
};

/// Suggestion agent backed by a chat-completion model. Every failure path ends
/// in a uniform-random fallback after max_retries + 1 attempts.
class ChatAgent final : public Agent {
public:
    ChatAgent(ChatSettings settings, std::uint64_t seed, std::unique_ptr<ChatTransport> transport = nullptr)
        : settings_(std::move(settings)), rng_(seed),
          transport_(transport ? std::move(transport) : std::make_unique<HttpChatTransport>(settings_))
    {
    }

    std::vector<Design> warmstart(const ProblemContext& ctx, int count) override
    {
        if (count < 1)
            throw std::invalid_argument("warmstart: count must be >= 1");
        const std::string prompt = render_warmstart_prompt(ctx, count);
        std::string last_error;
        for (int attempt = 1; attempt <= attempts_allowed(); ++attempt) {
            const ChatReply r = transport_->complete(settings_.system_prompt, prompt);
            if (!r.ok) {
                last_error = r.error;
                continue;
            }
            auto list = parse_vector_list_reply(r.content, ctx.dim);
            if (!list || list->size() < static_cast<std::size_t>(count)) {
                last_error = "unparseable warmstart reply";
                continue;
            }
            std::vector<Design> out;
            for (int i = 0; i < count; ++i)
                out.push_back(Design::clamped(std::move((*list)[static_cast<std::size_t>(i)])));
            return out;
        }
        warn("warmstart fell back to uniform random: " + last_error);
        count_fallback();
        std::vector<Design> out;
        for (int i = 0; i < count; ++i)
            out.push_back(uniform_design(ctx.dim, rng_));
        return out;
    }

    AgentSuggestion suggest(const ProblemContext& ctx, const Dataset& history, int) override
    {
        const std::string prompt = render_candidate_generation_prompt(ctx, render_data_card(history));
        if (auto s = ask_for_vector(ctx, prompt))
            return std::move(*s);
        return fallback(ctx);
    }

    std::optional<AgentSuggestion> sample_candidate(const ProblemContext& ctx, const Dataset& history,
                                                    double target_score) override
    {
        return ask_for_vector(ctx, render_candidate_sampling_prompt(ctx, render_data_card(history), target_score));
    }

    std::optional<double> predict(const ProblemContext& ctx, const Dataset& history, const Design& x) override
    {
        const std::string prompt = render_surrogate_prompt(ctx, render_data_card(history), x);
        for (int attempt = 1; attempt <= attempts_allowed(); ++attempt) {
            const ChatReply r = transport_->complete(settings_.system_prompt, prompt);
            if (!r.ok)
                continue;
            if (auto v = parse_number_reply(r.content))
                return v;
        }
        return std::nullopt;
    }

    const ChatSettings& settings() const noexcept { return settings_; }

private:
    int attempts_allowed() const { return settings_.max_retries + 1; }

    std::optional<AgentSuggestion> ask_for_vector(const ProblemContext& ctx, const std::string& prompt)
    {
        last_error_.clear();
        for (int attempt = 1; attempt <= attempts_allowed(); ++attempt) {
            const ChatReply r = transport_->complete(settings_.system_prompt, prompt);
            if (!r.ok) {
                last_error_ = r.error;
                continue;
            }
            auto v = parse_vector_reply(r.content, ctx.dim);
            if (!v) {
                last_error_ = "unparseable reply";
                continue;
            }
            bool clamped = false;
            for (double c : *v)
                clamped = clamped || c < 0.0 || c > 1.0;
            std::string payload = r.content;
            if (clamped)
                payload += " [clamped]";
            return AgentSuggestion{Design::clamped(std::move(*v)), std::move(payload), attempt, clamped, false};
        }
        return std::nullopt;
    }

    AgentSuggestion fallback(const ProblemContext& ctx)
    {
        warn("suggestion fell back to uniform random: " + last_error_);
        count_fallback();
        return {uniform_design(ctx.dim, rng_), "[fallback] " + last_error_, attempts_allowed(), false, true};
    }

    ChatSettings settings_;
    Rng rng_;
    std::unique_ptr<ChatTransport> transport_;
    std::string last_error_;
};

} // namespace llinbo::agents

#endif
