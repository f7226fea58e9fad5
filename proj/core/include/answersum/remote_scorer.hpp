#pragma once

// Client for the scorer service wire protocol (JSON over HTTP):
//   POST /score  {"query": str, "sentences": [str]}  -> {"scores": [float]}
//   POST /embed  {"sentences": [str]}                -> {"vectors": [[float]]}
//   GET  /health                                     -> {"status": "ok", "embed_dim": int}
//
// Every response goes through the decode_* validators below; the client never
// hands back a score outside [0, 1], a misaligned list, mixed dimensions or a
// non-finite component. Those raise ProtocolError. Connection failures and
// 5xx statuses raise TransportError.

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "answersum/scoring.hpp"

namespace answersum {

inline constexpr std::size_t kDefaultRemoteBatch = 64;
inline constexpr const char* kEndpointEnvVar = "ANSWERSUM_ENDPOINT";

struct RemoteOptions {
  std::size_t max_batch = kDefaultRemoteBatch;
  std::chrono::milliseconds timeout{30000};
};

struct HealthStatus {
  std::string status;
  std::size_t embed_dim = 0;
};

std::string encode_score_request(std::string_view query, std::span<const std::string> sentences);
std::string encode_embed_request(std::span<const std::string> sentences);

std::vector<UsefulnessScore> decode_score_response(std::string_view body, std::size_t expected_count);
std::vector<SentenceEmbedding> decode_embed_response(std::string_view body, std::size_t expected_count);
HealthStatus decode_health_response(std::string_view body);

// Thread-safe: every request opens its own connection.
class RemoteScorerClient {
 public:
  // endpoint: "http://host:port" with an optional path prefix. Throws
  // InvalidArgument for anything else.
  explicit RemoteScorerClient(std::string endpoint, RemoteOptions options = {});

  std::vector<UsefulnessScore> score(std::string_view query, std::span<const std::string> sentences) const;
  std::vector<SentenceEmbedding> embed(std::span<const std::string> sentences) const;
  HealthStatus health() const;

  const std::string& endpoint() const noexcept { return endpoint_; }

 private:
  std::string post(const std::string& path, const std::string& body) const;

  std::string endpoint_;
  std::string host_;
  int port_ = 80;
  std::string prefix_;
  RemoteOptions options_;
};

std::vector<UsefulnessScore> remote_score(const std::string& endpoint, std::string_view query,
                                          std::span<const std::string> sentences);
std::vector<SentenceEmbedding> remote_embed(const std::string& endpoint, std::span<const std::string> sentences);

class RemoteUsefulnessScorer final : public UsefulnessScorer {
 public:
  explicit RemoteUsefulnessScorer(std::shared_ptr<const RemoteScorerClient> client) : client_(std::move(client)) {}
  std::vector<UsefulnessScore> score(std::string_view query, std::span<const std::string> sentences) const override;

 private:
  std::shared_ptr<const RemoteScorerClient> client_;
};

// The dimension is learned from /health on first use.
class RemoteEmbedder final : public SentenceEmbedder {
 public:
  explicit RemoteEmbedder(std::shared_ptr<const RemoteScorerClient> client) : client_(std::move(client)) {}
  std::vector<SentenceEmbedding> embed(std::span<const std::string> sentences) const override;
  std::size_t dimension() const override;

 private:
  std::shared_ptr<const RemoteScorerClient> client_;
};

}  // namespace answersum
