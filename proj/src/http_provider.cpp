#include "layoutgen/http_provider.hpp"

#include <cstdlib>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"

namespace layoutgen {

using nlohmann::json;

namespace {

std::string read_api_key(const std::string& env) {
  const char* v = std::getenv(env.c_str());
  if (v == nullptr || *v == '\0') {
    throw Error(ErrorKind::ProviderFailure, "API key variable " + env + " is not set");
  }
  return v;
}

std::string truncated(const std::string& s, std::size_t limit = 512) {
  return s.size() <= limit ? s : s.substr(0, limit) + "...";
}

/// POST a JSON body and return the response body, mapping transport and
/// status failures onto ProviderError.
std::string post_json(const HttpProviderConfig& cfg, const std::string& api_key,
                      const std::string& path, const std::string& body, int timeout_ms) {
  httplib::Client client(cfg.base_url);
  const auto sec = static_cast<time_t>(timeout_ms / 1000);
  const auto usec = static_cast<time_t>((timeout_ms % 1000) * 1000);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Headers headers{{"Authorization", "Bearer " + api_key}};
  spdlog::debug("POST {}{} (Authorization: Bearer <redacted>) body={}", cfg.base_url, path,
                truncated(body));
  auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    throw ProviderError("request to " + cfg.base_url + path +
                            " failed: " + httplib::to_string(res.error()),
                        true);
  }
  spdlog::debug("HTTP {} body={}", res->status, truncated(res->body));
  if (res->status == 429 || res->status >= 500) {
    int retry_after = -1;
    if (res->has_header("Retry-After")) {
      try {
        retry_after = std::stoi(res->get_header_value("Retry-After")) * 1000;
      } catch (const std::exception&) {
      }
    }
    throw ProviderError("HTTP " + std::to_string(res->status) + " from " + path, true,
                        retry_after);
  }
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError("HTTP " + std::to_string(res->status) + " from " + path + ": " +
                            truncated(res->body, 200),
                        false);
  }
  return res->body;
}

}  // namespace

HttpCompletionProvider::HttpCompletionProvider(HttpProviderConfig config)
    : config_(std::move(config)), api_key_(read_api_key(config_.api_key_env)) {}

std::string HttpCompletionProvider::request_body(const PromptBundle& prompt,
                                                 const GenerationParams& params,
                                                 int sample_index) const {
  json body = {
      {"model", config_.model},
      {"messages", json::array({{{"role", "user"}, {"content", prompt.rendered}}})},
      {"temperature", params.temperature},
      {"n", 1},
      {"frequency_penalty", 0},
      {"presence_penalty", 0},
      {"seed", params.seed + static_cast<std::uint64_t>(sample_index)},
  };
  return body.dump();
}

std::string HttpCompletionProvider::parse_response(const std::string& body) {
  try {
    const json doc = json::parse(body);
    const json& choice = doc.at("choices").at(0);
    if (choice.contains("message")) {
      return choice.at("message").at("content").get<std::string>();
    }
    return choice.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("unexpected completion response: ") + e.what(), false);
  }
}

std::string HttpCompletionProvider::sample(const PromptBundle& prompt,
                                           const GenerationParams& params,
                                           int sample_index) {
  const std::string body = request_body(prompt, params, sample_index);
  return parse_response(
      post_json(config_, api_key_, config_.completion_path, body, params.timeout_ms));
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpProviderConfig config)
    : config_(std::move(config)), api_key_(read_api_key(config_.api_key_env)) {}

Embedding HttpEmbeddingProvider::parse_response(const std::string& body) {
  try {
    const json doc = json::parse(body);
    const auto values = doc.at("data").at(0).at("embedding").get<std::vector<double>>();
    if (values.empty()) throw ProviderError("empty embedding", false);
    return Eigen::Map<const Embedding>(values.data(), static_cast<Eigen::Index>(values.size()));
  } catch (const json::exception& e) {
    throw ProviderError(std::string("unexpected embedding response: ") + e.what(), false);
  }
}

Embedding HttpEmbeddingProvider::embed_text(const std::string& text) {
  const json body = {{"model", config_.embedding_model}, {"input", text}};
  return parse_response(
      post_json(config_, api_key_, config_.embedding_path, body.dump(), config_.timeout_ms));
}

}  // namespace layoutgen
