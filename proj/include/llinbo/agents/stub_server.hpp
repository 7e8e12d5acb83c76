#ifndef LLINBO_AGENTS_STUB_SERVER_HPP
#define LLINBO_AGENTS_STUB_SERVER_HPP

#include <deque>
#include <mutex>
#include <regex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <llinbo/agents/detail/httplib.hpp>
#include <nlohmann/json.hpp>

#include <llinbo/core/random.hpp>

namespace llinbo::agents {

/// Local stand-in for a chat-completion service, for integration tests and dry runs.
///
/// Valid mode answers every prompt with well-formed content: a list of vectors
/// for warmstart prompts, a number for surrogate prompts, a single vector
/// otherwise. Error mode answers HTTP 500. Garbage mode answers "not json".
/// Scripted mode pops replies from a queue; "!500" produces an HTTP 500.
class StubChatServer {
public:
    enum class Mode { Valid, Error, Garbage, Scripted };

    static constexpr const char* kRoute = "/v1/chat/completions";

    explicit StubChatServer(Mode mode = Mode::Valid, std::uint64_t seed = 0) : mode_(mode), rng_(seed)
    {
        server_.Post(kRoute, [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
    }

    ~StubChatServer() { stop(); }

    StubChatServer(const StubChatServer&) = delete;
    StubChatServer& operator=(const StubChatServer&) = delete;

    /// Binds to host:port (port 0 picks a free port) and serves on a background thread.
    int start(const std::string& host = "127.0.0.1", int port = 0)
    {
        port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (port_ < 0)
            throw std::runtime_error("StubChatServer: cannot bind " + host + ":" + std::to_string(port));
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        host_ = host;
        return port_;
    }

    /// Serves on the calling thread until stop() is called elsewhere.
    void run(const std::string& host, int port)
    {
        if (!server_.listen(host, port))
            throw std::runtime_error("StubChatServer: cannot listen on " + host + ":" + std::to_string(port));
    }

    void stop()
    {
        server_.stop();
        if (thread_.joinable())
            thread_.join();
    }

    int port() const noexcept { return port_; }
    std::string endpoint() const { return "http://" + host_ + ":" + std::to_string(port_) + kRoute; }

    void set_mode(Mode m)
    {
        std::lock_guard lock(mu_);
        mode_ = m;
    }

    void push_reply(std::string content)
    {
        std::lock_guard lock(mu_);
        script_.push_back(std::move(content));
    }

    std::vector<nlohmann::json> requests() const
    {
        std::lock_guard lock(mu_);
        return requests_;
    }

    std::size_t request_count() const
    {
        std::lock_guard lock(mu_);
        return requests_.size();
    }

    static std::string completion_body(const std::string& content)
    {
        return nlohmann::json{{"id", "stub"},
                              {"object", "chat.completion"},
                              {"choices",
                               nlohmann::json::array({{{"index", 0},
                                                       {"message", {{"role", "assistant"}, {"content", content}}},
                                                       {"finish_reason", "stop"}}})}}
            .dump();
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res)
    {
        std::lock_guard lock(mu_);
        auto body = nlohmann::json::parse(req.body, nullptr, false);
        requests_.push_back(body);
        std::string user;
        if (!body.is_discarded() && body.contains("messages"))
            for (const auto& m : body["messages"])
                if (m.value("role", "") == "user")
                    user = m.value("content", "");

        std::string content;
        switch (mode_) {
        case Mode::Error:
            res.status = 500;
            res.set_content("stub error", "text/plain");
            return;
        case Mode::Garbage:
            content = "not json";
            break;
        case Mode::Scripted:
            if (script_.empty()) {
                res.status = 500;
                res.set_content("script exhausted", "text/plain");
                return;
            }
            content = script_.front();
            script_.pop_front();
            if (content == "!500") {
                res.status = 500;
                res.set_content("scripted error", "text/plain");
                return;
            }
            break;
        case Mode::Valid:
            content = valid_reply(user);
            break;
        }
        res.set_content(completion_body(content), "application/json");
    }

    std::string valid_reply(const std::string& prompt)
    {
        std::size_t dim = 1;
        std::smatch m;
        static const std::regex dim_re(R"(\[0, 1\]\^ ?(\d+))");
        if (std::regex_search(prompt, m, dim_re))
            dim = std::stoul(m[1]);
        auto vec = [&] {
            nlohmann::json v = nlohmann::json::array();
            for (std::size_t i = 0; i < dim; ++i)
                v.push_back(uniform01(rng_));
            return v;
        };
        if (prompt.find("promising starting points") != std::string::npos) {
            std::size_t count = dim;
            static const std::regex count_re(R"(Suggest (\d+) promising)");
            if (std::regex_search(prompt, m, count_re))
                count = std::stoul(m[1]);
            nlohmann::json list = nlohmann::json::array();
            for (std::size_t i = 0; i < count; ++i)
                list.push_back(vec());
            return list.dump();
        }
        if (prompt.find("Predict the function value") != std::string::npos)
            return std::to_string(uniform01(rng_));
        return vec().dump();
    }

    httplib::Server server_;
    std::thread thread_;
    mutable std::mutex mu_;
    Mode mode_;
    Rng rng_;
    std::deque<std::string> script_;
    std::vector<nlohmann::json> requests_;
    std::string host_ = "127.0.0.1";
    int port_ = -1;
};

} // namespace llinbo::agents

#endif
