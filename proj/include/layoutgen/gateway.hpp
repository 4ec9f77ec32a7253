#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "layoutgen/constraint.hpp"
#include "layoutgen/error.hpp"
#include "layoutgen/retrieval.hpp"

namespace layoutgen {

struct PromptOptions {
  bool exemplar_headers = true;  // "Exemplar i" / "Test Sample" lines
  std::string generation_cue;    // appended verbatim after the test block
};

struct ExemplarBlock {
  std::string exemplar_id;
  std::string constraint;   // serialized constraint text
  std::string layout_html;  // serialized layout
  Layout layout;
};

struct PromptBundle {
  std::string preamble;
  std::vector<ExemplarBlock> exemplar_blocks;  // in rendered (shuffled) order
  std::vector<std::size_t> retrieval_rank;     // rank -> position in exemplar_blocks
  std::string test_block;
  std::string rendered;

  std::string hash() const;  // FNV-1a of `rendered`, hex
  /// Highest-ranked exemplar, or nullptr for a zero-shot prompt.
  const ExemplarBlock* top_exemplar() const;
};

/// Preamble, blank line, then one block per exemplar (constraint, layout HTML,
/// blank line), then the test constraint. Exemplars arrive ranked
/// best-first and are shuffled with SplitMix64(seed) before rendering.
PromptBundle build_prompt(TaskKind task, const DomainConfig& domain,
                          std::span<const Exemplar* const> ranked_exemplars,
                          const ConstraintSpec& x_test, std::uint64_t seed,
                          const PromptOptions& options = {});

struct GenerationParams {
  int num_exemplars = 10;
  int num_samples = 10;
  double temperature = 0.7;
  std::uint64_t seed = 0;
  int timeout_ms = 60000;
  int max_retries = 3;
  int backoff_ms = 500;
  int max_concurrency = 4;

  void validate() const;
};

/// Failure raised by a provider for one attempt.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, bool retryable, int retry_after_ms = -1)
      : Error(ErrorKind::ProviderFailure, what),
        retryable_(retryable),
        retry_after_ms_(retry_after_ms) {}

  bool retryable() const noexcept { return retryable_; }
  int retry_after_ms() const noexcept { return retry_after_ms_; }

 private:
  bool retryable_;
  int retry_after_ms_;
};

/// Produces one completion per call. Implementations must tolerate
/// concurrent calls.
class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual std::string name() const = 0;
  virtual std::string sample(const PromptBundle& prompt, const GenerationParams& params,
                             int sample_index) = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual Embedding embed_text(const std::string& text) = 0;
};

/// Returns the top-ranked exemplar's layout HTML for every sample.
class EchoCompletionProvider : public CompletionProvider {
 public:
  std::string name() const override { return "mock-echo"; }
  std::string sample(const PromptBundle& prompt, const GenerationParams& params,
                     int sample_index) override;
};

/// Top-ranked exemplar with every coordinate jittered by up to `max_shift`
/// px, seeded by (params.seed, prompt hash, sample index).
class NoisyCompletionProvider : public CompletionProvider {
 public:
  explicit NoisyCompletionProvider(int max_shift = 3) : max_shift_(max_shift) {}
  std::string name() const override { return "mock-noisy"; }
  std::string sample(const PromptBundle& prompt, const GenerationParams& params,
                     int sample_index) override;

 private:
  int max_shift_;
};

/// Fixture file: JSON array of {"prompt_hash": "...", "completions": [...]}.
class ReplayCompletionProvider : public CompletionProvider {
 public:
  explicit ReplayCompletionProvider(const std::filesystem::path& fixture);
  explicit ReplayCompletionProvider(std::map<std::string, std::vector<std::string>> table)
      : table_(std::move(table)) {}
  std::string name() const override { return "replay"; }
  std::string sample(const PromptBundle& prompt, const GenerationParams& params,
                     int sample_index) override;

 private:
  std::map<std::string, std::vector<std::string>> table_;
};

/// Deterministic bag-of-tokens embedding: each lowercase alphanumeric token
/// adds +-1 to one of `dimension` slots chosen by its FNV-1a hash.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(int dimension = 64) : dimension_(dimension) {}
  std::string name() const override { return "mock-hash"; }
  Embedding embed_text(const std::string& text) override;

 private:
  int dimension_;
};

struct Completion {
  int sample_index = 0;
  std::string text;
};

struct CompletionBatch {
  std::vector<Completion> completions;  // ascending sample_index
  std::vector<std::string> warnings;
};

/// Requests params.num_samples completions with bounded concurrency and
/// exponential backoff on retryable failures. Returns the successful subset
/// (with warnings) if at least one sample succeeded; otherwise throws
/// Error(ProviderFailure).
CompletionBatch complete(CompletionProvider& provider, const PromptBundle& prompt,
                         const GenerationParams& params);

/// Content-hash keyed embedding cache. Concurrent readers, exclusive writers.
class EmbeddingCache {
 public:
  std::optional<Embedding> get(const std::string& text) const;
  void put(const std::string& text, const Embedding& v);
  std::size_t size() const;

  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, Embedding> entries_;
};

/// Cached, retried embedding lookup. Throws InvalidInput on empty text and
/// Error(ProviderFailure) once retries are exhausted.
Embedding embed(EmbeddingProvider& provider, EmbeddingCache* cache,
                const std::string& text, const GenerationParams& params = {});

}  // namespace layoutgen
