#pragma once

#include <string>

#include "layoutgen/gateway.hpp"

namespace layoutgen {

/// Endpoint settings for an OpenAI-compatible HTTP service.
struct HttpProviderConfig {
  std::string base_url = "https://api.openai.com";
  std::string completion_path = "/v1/chat/completions";
  std::string embedding_path = "/v1/embeddings";
  std::string model = "gpt-3.5-turbo";
  std::string embedding_model = "text-embedding-3-small";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_ms = 60000;
};

/// Chat-completions client. One request per sample (n = 1) with the
/// configured temperature and zero frequency/presence penalties.
class HttpCompletionProvider : public CompletionProvider {
 public:
  explicit HttpCompletionProvider(HttpProviderConfig config);
  std::string name() const override { return "http:" + config_.model; }
  std::string sample(const PromptBundle& prompt, const GenerationParams& params,
                     int sample_index) override;

  /// Request body for one sample; exposed for tests.
  std::string request_body(const PromptBundle& prompt, const GenerationParams& params,
                           int sample_index) const;
  /// Extracts choices[0].message.content (or choices[0].text).
  static std::string parse_response(const std::string& body);

 private:
  HttpProviderConfig config_;
  std::string api_key_;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpProviderConfig config);
  std::string name() const override { return "http:" + config_.embedding_model; }
  Embedding embed_text(const std::string& text) override;

  static Embedding parse_response(const std::string& body);

 private:
  HttpProviderConfig config_;
  std::string api_key_;
};

}  // namespace layoutgen
