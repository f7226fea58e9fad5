#include <gtest/gtest.h>

#include <atomic>
#include <mutex>

#include "answersum/error.hpp"
#include "answersum/remote_scorer.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace answersum;
using answersum::testing::StubServer;
using nlohmann::json;
using Strings = std::vector<std::string>;

TEST(ScoreCodec, EncodesRequest) {
  const Strings s = {"a", "b \"quoted\""};
  const auto doc = json::parse(encode_score_request("q?", s));
  EXPECT_EQ(doc.at("query"), "q?");
  EXPECT_EQ(doc.at("sentences"), json(s));
  EXPECT_EQ(json::parse(encode_embed_request(s)), (json{{"sentences", s}}));
}

TEST(ScoreCodec, DecodesValidResponse) {
  const auto scores = decode_score_response(R"({"scores": [0, 0.5, 1]})", 3);
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_DOUBLE_EQ(scores[1].value(), 0.5);
}

TEST(ScoreCodec, RejectsViolations) {
  EXPECT_THROW(decode_score_response(R"({"scores": [0.5, 0.5]})", 3), ProtocolError);
  EXPECT_THROW(decode_score_response(R"({"scores": [0.5, 1.2, 0.1]})", 3), ProtocolError);
  EXPECT_THROW(decode_score_response(R"({"scores": [-0.1]})", 1), ProtocolError);
  EXPECT_THROW(decode_score_response(R"({"scores": ["0.5"]})", 1), ProtocolError);
  EXPECT_THROW(decode_score_response(R"({"scores": [null]})", 1), ProtocolError);
  EXPECT_THROW(decode_score_response(R"({"score": [0.5]})", 1), ProtocolError);
  EXPECT_THROW(decode_score_response(R"({"scores": 0.5})", 1), ProtocolError);
  EXPECT_THROW(decode_score_response("not json", 1), ProtocolError);
}

TEST(EmbedCodec, DecodesValidResponse) {
  const auto v = decode_embed_response(R"({"vectors": [[1, 0], [0, 1]]})", 2);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].dimension(), 2u);
}

TEST(EmbedCodec, RejectsViolations) {
  EXPECT_THROW(decode_embed_response(R"({"vectors": [[1, 0], [0, 1, 0]]})", 2), ProtocolError);
  EXPECT_THROW(decode_embed_response(R"({"vectors": [[1, 1e999]]})", 1), ProtocolError);
  EXPECT_THROW(decode_embed_response(R"({"vectors": [[1, null]]})", 1), ProtocolError);
  EXPECT_THROW(decode_embed_response(R"({"vectors": [[]]})", 1), ProtocolError);
  EXPECT_THROW(decode_embed_response(R"({"vectors": [[1, 0]]})", 2), ProtocolError);
  EXPECT_THROW(decode_embed_response(R"({"vectors": {}})", 0), ProtocolError);
}

TEST(HealthCodec, Decodes) {
  const auto h = decode_health_response(R"({"status": "ok", "embed_dim": 384})");
  EXPECT_EQ(h.status, "ok");
  EXPECT_EQ(h.embed_dim, 384u);
  EXPECT_THROW(decode_health_response(R"({"status": "ok", "embed_dim": 0})"), ProtocolError);
  EXPECT_THROW(decode_health_response(R"({"status": "ok"})"), ProtocolError);
}

TEST(RemoteClient, RejectsBadEndpoints) {
  EXPECT_THROW(RemoteScorerClient("localhost:8080"), InvalidArgument);
  EXPECT_THROW(RemoteScorerClient("https://x:1"), InvalidArgument);
  EXPECT_THROW(RemoteScorerClient("http://:8080"), InvalidArgument);
  EXPECT_THROW(RemoteScorerClient("http://host:port"), InvalidArgument);
  EXPECT_THROW(RemoteScorerClient("http://host:1", RemoteOptions{0, std::chrono::seconds(1)}), InvalidArgument);
  EXPECT_NO_THROW(RemoteScorerClient("http://host:1/prefix/"));
}

namespace {

// Echo stub: 0.5 for every sentence, unit basis vectors of dimension 3.
void install_echo_routes(httplib::Server& srv, std::atomic<int>& calls, std::size_t& max_batch_seen,
                         std::mutex& mu) {
  srv.Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
    const auto doc = json::parse(req.body);
    {
      std::lock_guard lock(mu);
      max_batch_seen = std::max(max_batch_seen, doc.at("sentences").size());
    }
    ++calls;
    json scores = json::array();
    for (std::size_t i = 0; i < doc.at("sentences").size(); ++i) scores.push_back(0.5);
    res.set_content(json{{"scores", scores}}.dump(), "application/json");
  });
  srv.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    const auto doc = json::parse(req.body);
    ++calls;
    json vectors = json::array();
    for (std::size_t i = 0; i < doc.at("sentences").size(); ++i) {
      json v = {0.0, 0.0, 0.0};
      v[i % 3] = 1.0;
      vectors.push_back(v);
    }
    res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
  });
  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status": "ok", "embed_dim": 3})", "application/json");
  });
}

}  // namespace

TEST(RemoteClient, EchoStubRoundTrip) {
  StubServer stub;
  std::atomic<int> calls{0};
  std::size_t max_batch = 0;
  std::mutex mu;
  install_echo_routes(stub.server(), calls, max_batch, mu);
  stub.start();

  const Strings s = {"one", "two", "three"};
  const auto scores = remote_score(stub.endpoint(), "q", s);
  ASSERT_EQ(scores.size(), 3u);
  for (const auto& x : scores) EXPECT_DOUBLE_EQ(x.value(), 0.5);

  const auto vectors = remote_embed(stub.endpoint(), s);
  ASSERT_EQ(vectors.size(), 3u);
  EXPECT_EQ(vectors[2].values()[2], 1.0);

  auto client = std::make_shared<const RemoteScorerClient>(stub.endpoint());
  EXPECT_EQ(client->health().embed_dim, 3u);
  EXPECT_EQ(RemoteEmbedder(client).dimension(), 3u);
}

TEST(RemoteClient, BatchesLargeRequests) {
  StubServer stub;
  std::atomic<int> calls{0};
  std::size_t max_batch = 0;
  std::mutex mu;
  install_echo_routes(stub.server(), calls, max_batch, mu);
  stub.start();

  Strings s(150, "sentence");
  RemoteScorerClient client(stub.endpoint(), RemoteOptions{64, std::chrono::seconds(5)});
  EXPECT_EQ(client.score("q", s).size(), 150u);
  EXPECT_EQ(calls.load(), 3);
  EXPECT_EQ(max_batch, 64u);
  EXPECT_EQ(client.embed(s).size(), 150u);
  EXPECT_EQ(calls.load(), 6);
  EXPECT_TRUE(client.score("q", Strings{}).empty());
  EXPECT_EQ(calls.load(), 6);
}

TEST(RemoteClient, PathPrefixIsHonoured) {
  StubServer stub;
  stub.server().Post("/v1/score", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"scores": [0.25]})", "application/json");
  });
  stub.start();
  const Strings s = {"x"};
  EXPECT_DOUBLE_EQ(remote_score(stub.endpoint() + "/v1", "q", s)[0].value(), 0.25);
}

TEST(RemoteClient, ProtocolViolationsSurface) {
  StubServer stub;
  stub.server().Post("/score", [](const httplib::Request& req, httplib::Response& res) {
    const auto n = json::parse(req.body).at("sentences").size();
    if (n == 1) {
      res.set_content(R"({"scores": [1.2]})", "application/json");
    } else {
      res.set_content(R"({"scores": [0.1]})", "application/json");
    }
  });
  stub.server().Post("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"vectors": [[1, 0], [1, 0, 0]]})", "application/json");
  });
  stub.start();
  EXPECT_THROW(remote_score(stub.endpoint(), "q", Strings{"a"}), ProtocolError);
  EXPECT_THROW(remote_score(stub.endpoint(), "q", Strings{"a", "b"}), ProtocolError);
  EXPECT_THROW(remote_embed(stub.endpoint(), Strings{"a", "b"}), ProtocolError);
}

TEST(RemoteClient, HttpStatusMapping) {
  StubServer stub;
  stub.server().Post("/score", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  stub.server().Post("/embed", [](const httplib::Request&, httplib::Response& res) { res.status = 400; });
  stub.start();
  try {
    remote_score(stub.endpoint(), "q", Strings{"a"});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.retryable());
  }
  EXPECT_THROW(remote_embed(stub.endpoint(), Strings{"a"}), ProtocolError);
}

TEST(RemoteClient, UnreachableIsTransportError) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  RemoteScorerClient client("http://127.0.0.1:" + std::to_string(port),
                            RemoteOptions{64, std::chrono::milliseconds(500)});
  EXPECT_THROW(client.score("q", Strings{"a"}), TransportError);
  EXPECT_THROW(client.health(), TransportError);
}
