#include "answersum/remote_scorer.hpp"

#include <cmath>

#include "answersum/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace answersum {

using nlohmann::json;

namespace {

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    // Includes number overflow such as 1e999.
    throw ProtocolError(std::string("response is not valid JSON: ") + e.what());
  }
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ProtocolError(std::string("response lacks \"") + key + "\"");
  return doc.at(key);
}

}  // namespace

std::string encode_score_request(std::string_view query, std::span<const std::string> sentences) {
  return json{{"query", query}, {"sentences", sentences}}.dump();
}

std::string encode_embed_request(std::span<const std::string> sentences) {
  return json{{"sentences", sentences}}.dump();
}

std::vector<UsefulnessScore> decode_score_response(std::string_view body, std::size_t expected_count) {
  const json doc = parse_body(body);
  const json& scores = field(doc, "scores");
  if (!scores.is_array()) throw ProtocolError("\"scores\" is not a list");
  if (scores.size() != expected_count) {
    throw ProtocolError("expected " + std::to_string(expected_count) + " scores, got " +
                        std::to_string(scores.size()));
  }
  std::vector<UsefulnessScore> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    if (!s.is_number()) throw ProtocolError("score is not a number");
    const double v = s.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) throw ProtocolError("score " + s.dump() + " outside [0, 1]");
    out.emplace_back(v);
  }
  return out;
}

std::vector<SentenceEmbedding> decode_embed_response(std::string_view body, std::size_t expected_count) {
  const json doc = parse_body(body);
  const json& vectors = field(doc, "vectors");
  if (!vectors.is_array()) throw ProtocolError("\"vectors\" is not a list");
  if (vectors.size() != expected_count) {
    throw ProtocolError("expected " + std::to_string(expected_count) + " vectors, got " +
                        std::to_string(vectors.size()));
  }
  std::vector<SentenceEmbedding> out;
  out.reserve(vectors.size());
  std::size_t dim = 0;
  for (const auto& v : vectors) {
    if (!v.is_array() || v.empty()) throw ProtocolError("vector is not a non-empty list");
    if (dim == 0) dim = v.size();
    if (v.size() != dim) {
      throw ProtocolError("mixed embedding dimensions " + std::to_string(dim) + " and " + std::to_string(v.size()));
    }
    std::vector<double> values;
    values.reserve(v.size());
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) throw ProtocolError("non-finite embedding component");
      values.push_back(x.get<double>());
    }
    out.emplace_back(std::move(values));
  }
  return out;
}

HealthStatus decode_health_response(std::string_view body) {
  const json doc = parse_body(body);
  const json& status = field(doc, "status");
  const json& dim = field(doc, "embed_dim");
  if (!status.is_string()) throw ProtocolError("\"status\" is not a string");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) throw ProtocolError("\"embed_dim\" is not positive");
  return {status.get<std::string>(), dim.get<std::size_t>()};
}

RemoteScorerClient::RemoteScorerClient(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  constexpr std::string_view kScheme = "http://";
  if (endpoint_.rfind(kScheme, 0) != 0) throw InvalidArgument("endpoint must start with http://: " + endpoint_);
  if (options_.max_batch == 0) throw InvalidArgument("remote batch size must be positive");
  std::string_view rest = std::string_view(endpoint_).substr(kScheme.size());
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) {
    prefix_ = std::string(rest.substr(slash));
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    try {
      port_ = std::stoi(std::string(authority.substr(colon + 1)));
    } catch (const std::exception&) {
      throw InvalidArgument("bad port in endpoint: " + endpoint_);
    }
    authority = authority.substr(0, colon);
  }
  host_ = std::string(authority);
  if (host_.empty()) throw InvalidArgument("endpoint has no host: " + endpoint_);
}

namespace {

std::unique_ptr<httplib::Client> connect(const std::string& host, int port, std::chrono::milliseconds timeout) {
  auto cli = std::make_unique<httplib::Client>(host, port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  cli->set_connection_timeout(secs.count(), usecs.count());
  cli->set_read_timeout(secs.count(), usecs.count());
  cli->set_write_timeout(secs.count(), usecs.count());
  return cli;
}

}  // namespace

std::string RemoteScorerClient::post(const std::string& path, const std::string& body) const {
  const auto cli = connect(host_, port_, options_.timeout);
  const auto res = cli->Post(prefix_ + path, body, "application/json");
  if (!res) throw TransportError(endpoint_ + path + ": " + httplib::to_string(res.error()));
  if (res->status >= 500) throw TransportError(endpoint_ + path + ": HTTP " + std::to_string(res->status));
  if (res->status != 200) throw ProtocolError(endpoint_ + path + ": HTTP " + std::to_string(res->status));
  return res->body;
}

std::vector<UsefulnessScore> RemoteScorerClient::score(std::string_view query,
                                                       std::span<const std::string> sentences) const {
  std::vector<UsefulnessScore> out;
  out.reserve(sentences.size());
  for (std::size_t begin = 0; begin < sentences.size(); begin += options_.max_batch) {
    const auto batch = sentences.subspan(begin, std::min(options_.max_batch, sentences.size() - begin));
    auto part = decode_score_response(post("/score", encode_score_request(query, batch)), batch.size());
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<SentenceEmbedding> RemoteScorerClient::embed(std::span<const std::string> sentences) const {
  std::vector<SentenceEmbedding> out;
  out.reserve(sentences.size());
  for (std::size_t begin = 0; begin < sentences.size(); begin += options_.max_batch) {
    const auto batch = sentences.subspan(begin, std::min(options_.max_batch, sentences.size() - begin));
    auto part = decode_embed_response(post("/embed", encode_embed_request(batch)), batch.size());
    if (!out.empty() && !part.empty() && part.front().dimension() != out.front().dimension())
      throw ProtocolError("embedding dimension changed between batches");
    for (auto& e : part) out.push_back(std::move(e));
  }
  return out;
}

HealthStatus RemoteScorerClient::health() const {
  const auto cli = connect(host_, port_, options_.timeout);
  const auto res = cli->Get(prefix_ + "/health");
  if (!res) throw TransportError(endpoint_ + "/health: " + httplib::to_string(res.error()));
  if (res->status != 200) throw TransportError(endpoint_ + "/health: HTTP " + std::to_string(res->status));
  return decode_health_response(res->body);
}

std::vector<UsefulnessScore> remote_score(const std::string& endpoint, std::string_view query,
                                          std::span<const std::string> sentences) {
  return RemoteScorerClient(endpoint).score(query, sentences);
}

std::vector<SentenceEmbedding> remote_embed(const std::string& endpoint, std::span<const std::string> sentences) {
  return RemoteScorerClient(endpoint).embed(sentences);
}

std::vector<UsefulnessScore> RemoteUsefulnessScorer::score(std::string_view query,
                                                           std::span<const std::string> sentences) const {
  return client_->score(query, sentences);
}

std::vector<SentenceEmbedding> RemoteEmbedder::embed(std::span<const std::string> sentences) const {
  return client_->embed(sentences);
}

std::size_t RemoteEmbedder::dimension() const { return client_->health().embed_dim; }

}  // namespace answersum
