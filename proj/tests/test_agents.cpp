#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include <llinbo/agents/agent_config.hpp>
#include <llinbo/agents/chat_agent.hpp>
#include <llinbo/agents/factory.hpp>
#include <llinbo/agents/mock_agents.hpp>
#include <llinbo/agents/prompts.hpp>
#include <llinbo/agents/stub_server.hpp>

using namespace llinbo;
using namespace llinbo::agents;

namespace {

ProblemContext ctx2()
{
    return {"smooth, multimodal benchmark with three global maxima", 2, ObjectiveSense::Maximize,
            Design({0.25, 0.75})};
}

/// Replies from a fixed script; an empty string means a transport failure.
class ScriptedTransport final : public ChatTransport {
public:
    explicit ScriptedTransport(std::deque<std::string> replies, std::vector<std::string>* log = nullptr)
        : replies_(std::move(replies)), log_(log)
    {
    }
    ChatReply complete(const std::string&, const std::string& user) override
    {
        if (log_)
            log_->push_back(user);
        if (replies_.empty())
            return {false, {}, "script exhausted"};
        std::string r = replies_.front();
        replies_.pop_front();
        if (r.empty())
            return {false, {}, "scripted failure"};
        return {true, r, {}};
    }

private:
    std::deque<std::string> replies_;
    std::vector<std::string>* log_;
};

ChatAgent scripted_agent(std::deque<std::string> replies, int max_retries = 3, std::vector<std::string>* log = nullptr)
{
    ChatSettings s;
    s.max_retries = max_retries;
    return ChatAgent(s, 1, std::make_unique<ScriptedTransport>(std::move(replies), log));
}

} // namespace

// ---- mocks ----

TEST(MockAgents, UniformRandomWarmstartCountAndRange)
{
    UniformRandomAgent a(3);
    const auto ws = a.warmstart(ctx2(), 2);
    ASSERT_EQ(ws.size(), 2u);
    for (const auto& d : ws)
        EXPECT_EQ(d.dim(), 2u);
}

TEST(MockAgents, OracleNoiseWithZeroSigmaReturnsOptimum)
{
    OracleNoiseAgent a(0.0, 1);
    for (int t = 1; t <= 5; ++t)
        EXPECT_EQ(a.suggest(ctx2(), Dataset(2), t).design, Design({0.25, 0.75}));
}

TEST(MockAgents, OracleNoiseClampsAndAudits)
{
    OracleNoiseAgent a(5.0, 2);
    bool saw_clamp = false;
    for (int t = 1; t <= 20; ++t) {
        const auto s = a.suggest(ctx2(), Dataset(2), t);
        for (double c : s.design.values()) {
            EXPECT_GE(c, 0.0);
            EXPECT_LE(c, 1.0);
        }
        if (s.clamped) {
            saw_clamp = true;
            EXPECT_NE(s.raw_payload.find("clamped"), std::string::npos);
        }
    }
    EXPECT_TRUE(saw_clamp);
}

TEST(MockAgents, OracleNoiseNeedsKnownOptimum)
{
    OracleNoiseAgent a(0.1, 1);
    ProblemContext c = ctx2();
    c.known_optimum.reset();
    EXPECT_THROW(a.suggest(c, Dataset(2), 1), std::invalid_argument);
}

TEST(MockAgents, AdversarialIsFarFromOptimum)
{
    AdversarialAgent a(4);
    for (int t = 1; t <= 10; ++t) {
        const auto d = a.suggest(ctx2(), Dataset(2), t).design;
        const double dist = std::hypot(d[0] - 0.25, d[1] - 0.75);
        EXPECT_GT(dist, 0.6);
    }
}

TEST(MockAgents, DeterministicUnderSeed)
{
    OracleNoiseAgent a(0.2, 9), b(0.2, 9);
    AdversarialAgent c(9), d(9);
    for (int t = 1; t <= 10; ++t) {
        EXPECT_EQ(a.suggest(ctx2(), Dataset(2), t).design, b.suggest(ctx2(), Dataset(2), t).design);
        EXPECT_EQ(c.suggest(ctx2(), Dataset(2), t).design, d.suggest(ctx2(), Dataset(2), t).design);
    }
}

TEST(MockAgents, ReplayFileInOrderThenExhausted)
{
    const auto path = std::filesystem::temp_directory_path() / "llinbo_replay_test.jsonl";
    {
        std::ofstream out(path);
        out << "[0.1, 0.2]\n[0.3, 0.4]\n\n[1.5, 0.6]\n";
    }
    ReplayAgent a(path.string());
    const auto ws = a.warmstart(ctx2(), 2);
    EXPECT_EQ(ws[0], Design({0.1, 0.2}));
    EXPECT_EQ(ws[1], Design({0.3, 0.4}));
    const auto s = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_EQ(s.design, Design({1.0, 0.6}));
    EXPECT_TRUE(s.clamped);
    EXPECT_THROW(a.suggest(ctx2(), Dataset(2), 2), std::runtime_error);
    std::filesystem::remove(path);
}

TEST(MockAgents, FactoryBuildsConfiguredKind)
{
    AgentConfig cfg;
    cfg.kind = AgentConfig::Kind::OracleNoise;
    cfg.sigma = 0.0;
    auto a = make_agent(cfg, 5);
    EXPECT_EQ(a->suggest(ctx2(), Dataset(2), 1).design, Design({0.25, 0.75}));
}

// ---- config ----

TEST(AgentConfig, JsonRoundTripAndDefaults)
{
    AgentConfig c;
    EXPECT_EQ(c.chat.temperature, 1.0);
    EXPECT_EQ(c.chat.api_key_env, "LLINBO_API_KEY");
    c.kind = AgentConfig::Kind::ChatCompletion;
    c.chat.endpoint = "http://127.0.0.1:9/v1/chat/completions";
    c.chat.max_retries = 5;
    c.seed = 12;
    const nlohmann::json j = c;
    const auto back = j.get<AgentConfig>();
    EXPECT_EQ(back.kind, c.kind);
    EXPECT_EQ(back.chat.endpoint, c.chat.endpoint);
    EXPECT_EQ(back.chat.max_retries, 5);
    EXPECT_EQ(back.seed, 12u);
    EXPECT_THROW(parse_agent_kind("Psychic"), std::invalid_argument);
}

// ---- prompts ----

TEST(Prompts, DataCardFormatting)
{
    Dataset d(2);
    d.add(Design({0.2334, 0.12}), 1.2311);
    d.add(Design({0.5, 0.0}), -35.25);
    EXPECT_EQ(render_data_card(d), "x: (0.2334, 0.1200), f(x): 1.231; x: (0.5000, 0.0000), f(x): -35.25");
    EXPECT_EQ(render_data_card(Dataset(2)), "");
}

TEST(Prompts, DataCardIsStable)
{
    Dataset d(3);
    Rng rng(4);
    for (int i = 0; i < 10; ++i)
        d.add(Design({uniform01(rng), uniform01(rng), uniform01(rng)}), uniform01(rng) * 100);
    EXPECT_EQ(render_data_card(d), render_data_card(d));
    const std::vector<std::size_t> rev{9, 8, 7, 6, 5, 4, 3, 2, 1, 0};
    EXPECT_NE(render_data_card(d, rev), render_data_card(d));
}

TEST(Prompts, TemplatesCarryContext)
{
    const auto c = ctx2();
    const auto ws = render_warmstart_prompt(c, 2);
    EXPECT_NE(ws.find("Suggest 2 promising starting points in the range [0, 1]^2"), std::string::npos);
    EXPECT_NE(ws.find(c.description), std::string::npos);

    Dataset d(2);
    d.add(Design({0.1, 0.2}), 3.0);
    const auto gen = render_candidate_generation_prompt(c, render_data_card(d));
    EXPECT_NE(gen.find("x: (0.1000, 0.2000), f(x): 3"), std::string::npos);
    EXPECT_NE(gen.find("2-dimensional numerical vector"), std::string::npos);

    const auto empty = render_candidate_generation_prompt(c, "");
    EXPECT_EQ(empty.find("  "), std::string::npos);

    const auto samp = render_candidate_sampling_prompt(c, render_data_card(d), 9.0);
    EXPECT_NE(samp.find("function value of 9"), std::string::npos);

    const auto sur = render_surrogate_prompt(c, render_data_card(d), Design({0.5, 0.25}));
    EXPECT_NE(sur.find("Predict the function value at x = (0.5000, 0.2500)"), std::string::npos);
    EXPECT_EQ(std::string(kBlackBoxSystemPrompt),
              "You are an AI assistant that helps people find the maximum of a black-box function.");
}

TEST(Prompts, ParseReplies)
{
    EXPECT_EQ(parse_vector_reply("[0.25, 0.75]", 2), (std::vector<double>{0.25, 0.75}));
    EXPECT_EQ(parse_vector_reply("```json\n[0.1, 0.9]\n```", 2), (std::vector<double>{0.1, 0.9}));
    EXPECT_EQ(parse_vector_reply("Sure! [0.3, 0.4] is good", 2), (std::vector<double>{0.3, 0.4}));
    EXPECT_EQ(parse_vector_reply("[[0.6, 0.7]]", 2), (std::vector<double>{0.6, 0.7}));
    EXPECT_FALSE(parse_vector_reply("not json", 2));
    EXPECT_FALSE(parse_vector_reply("[0.1]", 2));
    EXPECT_FALSE(parse_vector_reply("[\"a\", 0.1]", 2));

    const auto list = parse_vector_list_reply("[[0.1,0.2],[0.3,0.4]]", 2);
    ASSERT_TRUE(list);
    EXPECT_EQ(list->size(), 2u);

    EXPECT_EQ(parse_number_reply(" 5.0 "), 5.0);
    EXPECT_EQ(parse_number_reply("-1e-3"), -1e-3);
    EXPECT_FALSE(parse_number_reply("about 5"));
    EXPECT_FALSE(parse_number_reply("nan"));
}

// ---- chat agent over a scripted transport ----

TEST(ChatAgent, ParsesSingleVector)
{
    auto a = scripted_agent({"[0.25, 0.75]"});
    const auto s = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_EQ(s.design, Design({0.25, 0.75}));
    EXPECT_EQ(s.attempts, 1);
    EXPECT_FALSE(s.fallback);
}

TEST(ChatAgent, RetriesAfterGarbage)
{
    auto a = scripted_agent({"not json", "[0.5,0.5]"}, 2);
    const auto s = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_EQ(s.design, Design({0.5, 0.5}));
    EXPECT_EQ(s.attempts, 2);
    EXPECT_EQ(a.fallback_count(), 0);
}

TEST(ChatAgent, FallsBackAfterRetries)
{
    std::vector<std::string> log;
    auto a = scripted_agent({"no", "", "still no"}, 2, &log);
    const auto s = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_TRUE(s.fallback);
    EXPECT_EQ(s.attempts, 3);
    EXPECT_EQ(log.size(), 3u);
    EXPECT_EQ(a.fallback_count(), 1);
    ASSERT_EQ(a.warnings().size(), 1u);
}

TEST(ChatAgent, ClampsOutOfRangeReply)
{
    auto a = scripted_agent({"[1.4, -0.2]"});
    const auto s = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_EQ(s.design, Design({1.0, 0.0}));
    EXPECT_TRUE(s.clamped);
    EXPECT_NE(s.raw_payload.find("clamped"), std::string::npos);
}

TEST(ChatAgent, WarmstartParsesListOrFallsBack)
{
    auto a = scripted_agent({"[[0.1,0.2],[0.3,0.4]]"});
    const auto ws = a.warmstart(ctx2(), 2);
    ASSERT_EQ(ws.size(), 2u);
    EXPECT_EQ(ws[0], Design({0.1, 0.2}));
    EXPECT_EQ(ws[1], Design({0.3, 0.4}));

    auto b = scripted_agent({"[[0.1,0.2]]", "", "junk"}, 2);
    const auto fb = b.warmstart(ctx2(), 2);
    EXPECT_EQ(fb.size(), 2u);
    EXPECT_EQ(b.fallback_count(), 1);
}

TEST(ChatAgent, PredictAndSampleCandidate)
{
    auto a = scripted_agent({"4.5", "[0.2, 0.3]"});
    Dataset d(2);
    d.add(Design({0.1, 0.1}), 1.0);
    EXPECT_EQ(a.predict(ctx2(), d, Design({0.5, 0.5})), 4.5);
    const auto c = a.sample_candidate(ctx2(), d, 0.9);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->design, Design({0.2, 0.3}));

    auto b = scripted_agent({}, 1);
    EXPECT_FALSE(b.predict(ctx2(), d, Design({0.5, 0.5})));
    EXPECT_FALSE(b.sample_candidate(ctx2(), d, 0.9));
}

TEST(ChatAgent, RequestBodyShape)
{
    ChatSettings s;
    const auto j = chat_request_body(s, "sys", "user");
    EXPECT_EQ(j["model"], "gpt-3.5-turbo");
    EXPECT_EQ(j["temperature"], 1.0);
    EXPECT_EQ(j["messages"][0]["role"], "system");
    EXPECT_EQ(j["messages"][1]["content"], "user");
    const auto ep = split_endpoint("https://api.example.com:8443/v1/chat/completions");
    EXPECT_EQ(ep.origin, "https://api.example.com:8443");
    EXPECT_EQ(ep.path, "/v1/chat/completions");
}

// ---- chat agent over HTTP against the local stub ----

class StubServerTest : public ::testing::Test {
protected:
    void SetUp() override { server.start(); }
    void TearDown() override { server.stop(); }

    ChatAgent agent(int max_retries = 2)
    {
        ChatSettings s;
        s.endpoint = server.endpoint();
        s.max_retries = max_retries;
        s.timeout_seconds = 5;
        s.api_key_env = "LLINBO_TEST_KEY_UNSET";
        return ChatAgent(s, 3);
    }

    StubChatServer server{StubChatServer::Mode::Scripted};
};

TEST_F(StubServerTest, WarmstartReturnsScriptedDesigns)
{
    server.push_reply("[[0.1,0.2],[0.3,0.4]]");
    auto a = agent();
    const auto ws = a.warmstart(ctx2(), 2);
    EXPECT_EQ(ws[0], Design({0.1, 0.2}));
    EXPECT_EQ(ws[1], Design({0.3, 0.4}));
    const auto reqs = server.requests();
    ASSERT_EQ(reqs.size(), 1u);
    EXPECT_EQ(reqs[0]["messages"][0]["content"], std::string(kBlackBoxSystemPrompt));
    EXPECT_EQ(reqs[0]["temperature"], 1.0);
}

TEST_F(StubServerTest, SuggestParsesReply)
{
    server.push_reply("[0.25, 0.75]");
    auto a = agent();
    EXPECT_EQ(a.suggest(ctx2(), Dataset(2), 1).design, Design({0.25, 0.75}));
}

TEST_F(StubServerTest, GarbageThenValidCountsAttempts)
{
    server.push_reply("not json");
    server.push_reply("[0.5,0.5]");
    auto a = agent(2);
    const auto s = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_EQ(s.design, Design({0.5, 0.5}));
    EXPECT_EQ(s.attempts, 2);
}

TEST_F(StubServerTest, HttpErrorsEndInFallback)
{
    server.set_mode(StubChatServer::Mode::Error);
    auto a = agent(1);
    const auto s = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_TRUE(s.fallback);
    EXPECT_EQ(server.request_count(), 2u);
}

TEST_F(StubServerTest, ValidModeAnswersEveryPromptKind)
{
    server.set_mode(StubChatServer::Mode::Valid);
    auto a = agent();
    EXPECT_EQ(a.warmstart(ctx2(), 3).size(), 3u);
    EXPECT_FALSE(a.suggest(ctx2(), Dataset(2), 1).fallback);
    Dataset d(2);
    d.add(Design({0.1, 0.1}), 1.0);
    EXPECT_TRUE(a.predict(ctx2(), d, Design({0.5, 0.5})));
    EXPECT_EQ(a.fallback_count(), 0);
}

TEST(ChatAgent, UnreachableEndpointFallsBackQuickly)
{
    ChatSettings s;
    s.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    s.max_retries = 1;
    s.timeout_seconds = 2;
    ChatAgent a(s, 1);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = a.suggest(ctx2(), Dataset(2), 1);
    EXPECT_TRUE(r.fallback);
    EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(2 * 2 + 1));
}

TEST(ChatAgent, ApiKeyNeverInWarnings)
{
    ::setenv("LLINBO_TEST_SECRET", "sk-very-secret", 1);
    ChatSettings s;
    s.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    s.api_key_env = "LLINBO_TEST_SECRET";
    s.max_retries = 0;
    s.timeout_seconds = 1;
    ChatAgent a(s, 1);
    a.suggest(ctx2(), Dataset(2), 1);
    for (const auto& w : a.warnings())
        EXPECT_EQ(w.find("sk-very-secret"), std::string::npos);
    const nlohmann::json j = AgentConfig{AgentConfig::Kind::ChatCompletion, 0.1, "", s, 0};
    EXPECT_EQ(j.dump().find("sk-very-secret"), std::string::npos);
    ::unsetenv("LLINBO_TEST_SECRET");
}
