#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "emoclick/embedding.hpp"
#include "emoclick/errors.hpp"
#include "emoclick/http_backends.hpp"
#include "emoclick/pipeline.hpp"

using namespace emoclick;
using nlohmann::json;

namespace {

// In-process OpenAI-compatible endpoint fixture.
class TestServer {
public:
    TestServer() {
        server_.Post("/v1/embeddings", [this](const httplib::Request& req,
                                              httplib::Response& res) {
            last_body = req.body;
            last_auth = req.get_header_value("Authorization");
            ++embedding_requests;
            if (fail_next > 0) {
                --fail_next;
                res.status = 500;
                return;
            }
            if (reject_next > 0) {
                --reject_next;
                res.status = 400;
                res.set_content("{\"error\": \"bad request\"}", "application/json");
                return;
            }
            const json body = json::parse(req.body);
            json data = json::array();
            const auto& input = body.at("input");
            // Deliberately reversed order: clients must reassemble by index.
            for (std::size_t i = input.size(); i-- > 0;) {
                const std::string text = input[i].get<std::string>();
                data.push_back({{"index", i},
                                {"embedding", {static_cast<double>(text.size()), 1.0, 0.5}}});
            }
            res.set_content(json{{"data", data}, {"model", body.at("model")}}.dump(),
                            "application/json");
        });
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            last_body = req.body;
            const json body = json::parse(req.body);
            const json reply = {
                {"choices",
                 json::array({{{"message",
                                {{"role", "assistant"},
                                 {"content", "\"Styled: " +
                                                 body.at("messages")[0].at("content")
                                                     .get<std::string>()
                                                     .substr(0, 5) +
                                                 "\""}}}}})}};
            res.set_content(reply.dump(), "application/json");
        });
        server_.Post("/v1/classify", [this](const httplib::Request& req,
                                            httplib::Response& res) {
            last_body = req.body;
            const json body = json::parse(req.body);
            json data = json::array();
            for (std::size_t i = 0; i < body.at("input").size(); ++i) {
                data.push_back({{"index", i}, {"scores", {{"joy", 0.8}, {"fear", 0.2}}}});
            }
            res.set_content(json{{"taxonomy", taxonomy}, {"data", data}}.dump(),
                            "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~TestServer() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const {
        return "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    }

    std::string last_body;
    std::string last_auth;
    std::atomic<int> embedding_requests = 0;
    std::atomic<int> fail_next = 0;
    std::atomic<int> reject_next = 0;
    std::string taxonomy = "goemotions-28";

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

RetryPolicy instant_retry(int attempts) {
    RetryPolicy policy;
    policy.max_attempts = attempts;
    policy.sleeper = [](std::chrono::milliseconds) {};
    return policy;
}

}  // namespace

TEST_CASE("openai embeddings wire protocol") {
    TestServer server;
    OpenAiEmbeddingBackend backend({server.endpoint(), "test-embed", ""});
    CHECK(backend.model_id() == "test-embed");

    const auto vectors = backend.embed({{"a", "hi"}, {"b", "longer text"}});
    REQUIRE(vectors.size() == 2);
    // Index-keyed reassembly: first output is for the first input.
    CHECK(vectors[0][0] == doctest::Approx(2.0));
    CHECK(vectors[1][0] == doctest::Approx(11.0));

    const json body = json::parse(server.last_body);
    CHECK(body.at("model") == "test-embed");
    CHECK(body.at("input").size() == 2);
    CHECK(body.at("input")[0] == "hi");
}

TEST_CASE("bearer credentials come from the named environment variable") {
    TestServer server;
    setenv("EMOCLICK_TEST_KEY", "sk-test-123", 1);
    OpenAiEmbeddingBackend with_key({server.endpoint(), "m", "EMOCLICK_TEST_KEY"});
    with_key.embed({{"a", "x"}});
    CHECK(server.last_auth == "Bearer sk-test-123");

    unsetenv("EMOCLICK_TEST_KEY");
    CHECK_THROWS_AS(with_key.embed({{"a", "x"}}), ConfigError);
}

TEST_CASE("server errors are retryable, client errors are not") {
    TestServer server;
    OpenAiEmbeddingBackend backend({server.endpoint(), "m", ""});

    server.fail_next = 1;
    CHECK_THROWS_AS(backend.embed({{"a", "x"}}), TransportError);

    // embed_batch retries through the policy and succeeds on attempt two.
    server.fail_next = 1;
    server.embedding_requests = 0;
    const auto vectors = embed_batch({{"a", "hello"}}, backend, 8, instant_retry(3));
    CHECK(vectors.size() == 1);
    CHECK(server.embedding_requests == 2);

    // A 4xx is a hard failure: surfaced at once, never retried.
    server.reject_next = 1;
    server.embedding_requests = 0;
    CHECK_THROWS_AS(embed_batch({{"a", "hello"}}, backend, 8, instant_retry(3)),
                    BackendUnavailableError);
    CHECK(server.embedding_requests == 1);
}

TEST_CASE("connection failures surface as transport errors") {
    OpenAiEmbeddingBackend unreachable({"http://127.0.0.1:9", "m", ""});
    CHECK_THROWS_AS(unreachable.embed({{"a", "x"}}), TransportError);
}

TEST_CASE("openai chat wire protocol carries decode params") {
    TestServer server;
    OpenAiChatBackend backend({server.endpoint(), "test-chat", ""}, 32768);
    DecodeParams params;  // greedy defaults
    const std::string reply = backend.generate("Rewrite this please", params);
    CHECK(reply == "\"Styled: Rewri\"");

    const json body = json::parse(server.last_body);
    CHECK(body.at("model") == "test-chat");
    CHECK(body.at("temperature") == 0.0);
    CHECK(body.at("top_p") == 1.0);
    CHECK(body.at("max_tokens") == 400);
    CHECK(body.at("messages")[0].at("role") == "user");
    CHECK(body.at("messages")[0].at("content") == "Rewrite this please");
}

TEST_CASE("full pipeline over http backends") {
    namespace fs = std::filesystem;
    TestServer server;

    const auto dir = fs::temp_directory_path() / "emoclick_http_pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream headlines(dir / "headlines.jsonl");
        headlines << R"({"id": "h1", "text": "Shocking cat secret", "label": 1})" << "\n";
        headlines << R"({"id": "h2", "text": "Pasta trick amazes chefs", "label": 1})" << "\n";
        std::ofstream posts(dir / "posts.jsonl");
        posts << R"({"id": "p1", "title": "My cat", "body": "does tricks", "source": "s"})" << "\n";
        posts << R"({"id": "p2", "title": "Cooking pasta", "body": "how do chefs do it", "source": "s"})" << "\n";
        posts << R"({"id": "p3", "title": "Bus schedule", "body": "changed again", "source": "s"})" << "\n";
    }

    const fs::path data(EMOCLICK_SOURCE_DATA_DIR);
    PipelineConfig config;
    config.corpus.headlines_path = (dir / "headlines.jsonl").string();
    config.corpus.posts_path = (dir / "posts.jsonl").string();
    config.embedding.kind = "openai";
    config.embedding.endpoint = server.endpoint();
    config.embedding.model_id = "test-embed";
    config.generation.kind = "openai";
    config.generation.endpoint = server.endpoint();
    config.generation.model_id = "test-chat";
    config.emotion.kind = "http";
    config.emotion.endpoint = server.endpoint();
    config.emotion.model_id = "test-emotion";
    config.lexicon_path = (data / "lexicon" / "vad_goemotions_v1.tsv").string();
    config.templates_path = (data / "templates" / "styles_v1.json").string();
    config.styles = {StyleLabel::Clickbait, StyleLabel::Neutral};
    config.batch_size = 2;

    PipelineRun run(config, dir / "out");
    const auto manifest = run.run();
    REQUIRE(manifest.at("stages").size() == 7);
    CHECK(manifest.at("stages")[3].at("counts").at("variants") == 4);
    CHECK(manifest.at("call_log").at("embedding").get<int>() > 0);
    CHECK(manifest.at("call_log").at("generation").get<int>() == 4);
    CHECK(manifest.at("call_log").at("emotion").get<int>() > 0);
    const std::string embed_id =
        manifest.at("versions").at("backends").at("embedding").at("id").get<std::string>();
    CHECK(embed_id.rfind("openai-embeddings:", 0) == 0);

    // The chat fixture wraps replies in quotes; the pipeline strips them.
    bool saw_variant = false;
    std::ifstream variants(dir / "out" / "checkpoints" / "variants.jsonl");
    std::string line;
    while (std::getline(variants, line)) {
        saw_variant = true;
        const json v = json::parse(line);
        const std::string text = v.at("text").get<std::string>();
        CHECK(text.rfind("Styled: ", 0) == 0);
        CHECK(text.find('"') == std::string::npos);
    }
    CHECK(saw_variant);

    // Re-run: caches and checkpoints make it transport-silent.
    server.embedding_requests = 0;
    run.run();
    CHECK(server.embedding_requests == 0);
}

TEST_CASE("http emotion backend parses per-label scores") {
    TestServer server;
    HttpEmotionBackend backend({server.endpoint(), "test-emotion", ""}, "goemotions-28");
    const auto dists = backend.classify({{"a", "text one"}, {"b", "text two"}});
    REQUIRE(dists.size() == 2);
    CHECK(dists[0].weights().at("joy") == doctest::Approx(0.8));
    CHECK(dists[1].weights().at("fear") == doctest::Approx(0.2));

    const json body = json::parse(server.last_body);
    CHECK(body.at("model") == "test-emotion");
    CHECK(body.at("input").size() == 2);

    // Endpoint taxonomy disagreement is a hard error.
    HttpEmotionBackend mismatched({server.endpoint(), "test-emotion", ""}, "other-taxonomy");
    CHECK_THROWS_AS(mismatched.classify({{"a", "text"}}), TaxonomyMismatchError);
}
