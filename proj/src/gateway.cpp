#include "layoutgen/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "json.hpp"
#include <spdlog/spdlog.h>

#include "layoutgen/prng.hpp"
#include "layoutgen/serde.hpp"

namespace layoutgen {

using nlohmann::json;

std::string PromptBundle::hash() const { return hash_hex(fnv1a64(rendered)); }

const ExemplarBlock* PromptBundle::top_exemplar() const {
  if (retrieval_rank.empty()) return nullptr;
  return &exemplar_blocks[retrieval_rank.front()];
}

PromptBundle build_prompt(TaskKind task, const DomainConfig& domain,
                          std::span<const Exemplar* const> ranked_exemplars,
                          const ConstraintSpec& x_test, std::uint64_t seed,
                          const PromptOptions& options) {
  PromptBundle bundle;
  bundle.preamble = serialize_preamble(task, domain);
  bundle.test_block = serialize_constraint(task, x_test);

  std::vector<std::size_t> order(ranked_exemplars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 rng(seed);
  portable_shuffle(order, rng);

  bundle.retrieval_rank.assign(order.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Exemplar& ex = *ranked_exemplars[order[pos]];
    bundle.exemplar_blocks.push_back({ex.id, serialize_constraint(task, ex.constraint),
                                      serialize_layout_html(ex.layout), ex.layout});
    bundle.retrieval_rank[order[pos]] = pos;
  }

  std::string& out = bundle.rendered;
  out = bundle.preamble + "\n\n";
  for (std::size_t i = 0; i < bundle.exemplar_blocks.size(); ++i) {
    const auto& block = bundle.exemplar_blocks[i];
    if (options.exemplar_headers) out += "Exemplar " + std::to_string(i + 1) + "\n";
    out += block.constraint + "\n" + block.layout_html + "\n\n";
  }
  if (options.exemplar_headers) out += "Test Sample\n";
  out += bundle.test_block + "\n";
  out += options.generation_cue;
  return bundle;
}

void GenerationParams::validate() const {
  if (num_exemplars < 0) throw Error(ErrorKind::InvalidInput, "num_exemplars must be >= 0");
  if (num_samples < 1) throw Error(ErrorKind::InvalidInput, "num_samples must be >= 1");
  if (!(temperature >= 0.0)) throw Error(ErrorKind::InvalidInput, "temperature must be >= 0");
  if (max_retries < 0 || backoff_ms < 0 || timeout_ms <= 0 || max_concurrency < 1) {
    throw Error(ErrorKind::InvalidInput, "invalid provider retry/timeout policy");
  }
}

// --- mock and replay providers -------------------------------------------

std::string EchoCompletionProvider::sample(const PromptBundle& prompt,
                                           const GenerationParams&, int) {
  const ExemplarBlock* top = prompt.top_exemplar();
  if (top == nullptr) throw ProviderError("echo provider needs at least one exemplar", false);
  return top->layout_html;
}

std::string NoisyCompletionProvider::sample(const PromptBundle& prompt,
                                            const GenerationParams& params,
                                            int sample_index) {
  const ExemplarBlock* top = prompt.top_exemplar();
  if (top == nullptr) throw ProviderError("noisy provider needs at least one exemplar", false);
  SplitMix64 rng(mix_seed(mix_seed(params.seed, fnv1a64(prompt.rendered)),
                          static_cast<std::uint64_t>(sample_index)));
  Layout y = top->layout;
  for (auto& e : y.elements) {
    e.box.left += rng.uniform_int(-max_shift_, max_shift_);
    e.box.top += rng.uniform_int(-max_shift_, max_shift_);
    e.box.width += rng.uniform_int(-max_shift_, max_shift_);
    e.box.height += rng.uniform_int(-max_shift_, max_shift_);
    clamp_to_canvas(e.box, y.canvas);
  }
  return serialize_layout_html(y);
}

ReplayCompletionProvider::ReplayCompletionProvider(const std::filesystem::path& fixture) {
  std::ifstream in(fixture);
  if (!in) throw Error(ErrorKind::DataError, "cannot open fixture " + fixture.string());
  json doc;
  try {
    in >> doc;
    for (const auto& entry : doc) {
      table_[entry.at("prompt_hash").get<std::string>()] =
          entry.at("completions").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::DataError, "malformed fixture " + fixture.string() + ": " + e.what());
  }
}

std::string ReplayCompletionProvider::sample(const PromptBundle& prompt,
                                             const GenerationParams&, int sample_index) {
  const std::string key = prompt.hash();
  auto it = table_.find(key);
  if (it == table_.end()) throw ProviderError("no fixture for prompt " + key, false);
  if (sample_index < 0 || static_cast<std::size_t>(sample_index) >= it->second.size()) {
    throw ProviderError("fixture for prompt " + key + " has no sample " +
                            std::to_string(sample_index),
                        false);
  }
  return it->second[static_cast<std::size_t>(sample_index)];
}

Embedding HashEmbeddingProvider::embed_text(const std::string& text) {
  Embedding v = Embedding::Zero(dimension_);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const std::uint64_t h = fnv1a64(token);
    const auto slot = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(dimension_));
    v(slot) += (h >> 63) ? -1.0 : 1.0;
    token.clear();
  };
  for (unsigned char ch : text) {
    if (std::isalnum(ch)) {
      token.push_back(static_cast<char>(std::tolower(ch)));
    } else {
      flush();
    }
  }
  flush();
  return v;
}

// --- fan-out with retries ---------------------------------------------------

namespace {

template <typename Fn>
auto with_retries(const GenerationParams& params, const std::string& what, Fn&& fn)
    -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const ProviderError& e) {
      if (!e.retryable() || attempt >= params.max_retries) throw;
      const int wait = e.retry_after_ms() >= 0
                           ? e.retry_after_ms()
                           : params.backoff_ms * (1 << std::min(attempt, 16));
      spdlog::debug("{}: attempt {} failed ({}), retrying in {} ms", what, attempt + 1,
                    e.what(), wait);
      if (wait > 0) std::this_thread::sleep_for(std::chrono::milliseconds(wait));
    }
  }
}

}  // namespace

CompletionBatch complete(CompletionProvider& provider, const PromptBundle& prompt,
                         const GenerationParams& params) {
  params.validate();
  const int total = params.num_samples;
  std::vector<std::optional<std::string>> slots(static_cast<std::size_t>(total));
  std::vector<std::string> errors(static_cast<std::size_t>(total));
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int i = next++; i < total; i = next++) {
      try {
        slots[static_cast<std::size_t>(i)] =
            with_retries(params, provider.name() + " sample " + std::to_string(i),
                         [&] { return provider.sample(prompt, params, i); });
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };
  const int workers = std::min(params.max_concurrency, total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  CompletionBatch batch;
  for (int i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (slots[idx]) {
      batch.completions.push_back({i, std::move(*slots[idx])});
    } else {
      batch.warnings.push_back("sample " + std::to_string(i) + " failed: " + errors[idx]);
    }
  }
  if (batch.completions.empty()) {
    throw Error(ErrorKind::ProviderFailure, "all " + std::to_string(total) +
                                                " completion requests failed: " +
                                                errors.front());
  }
  return batch;
}

// --- embeddings -------------------------------------------------------------

std::optional<Embedding> EmbeddingCache::get(const std::string& text) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(hash_hex(fnv1a64(text)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::put(const std::string& text, const Embedding& v) {
  std::unique_lock lock(mutex_);
  entries_[hash_hex(fnv1a64(text))] = v;
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void EmbeddingCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return;
  json doc;
  try {
    in >> doc;
    std::unique_lock lock(mutex_);
    for (const auto& [key, values] : doc.items()) {
      const auto vec = values.get<std::vector<double>>();
      entries_[key] = Eigen::Map<const Embedding>(vec.data(), static_cast<Eigen::Index>(vec.size()));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::DataError, "malformed embedding cache " + path.string() + ": " + e.what());
  }
}

void EmbeddingCache::save(const std::filesystem::path& path) const {
  json doc = json::object();
  {
    std::shared_lock lock(mutex_);
    for (const auto& [key, v] : entries_) {
      doc[key] = std::vector<double>(v.data(), v.data() + v.size());
    }
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::DataError, "cannot write " + path.string());
  out << doc.dump() << '\n';
}

Embedding embed(EmbeddingProvider& provider, EmbeddingCache* cache,
                const std::string& text, const GenerationParams& params) {
  if (text.empty()) throw Error(ErrorKind::InvalidInput, "cannot embed empty text");
  if (cache != nullptr) {
    if (auto hit = cache->get(text)) return *hit;
  }
  Embedding v;
  try {
    v = with_retries(params, provider.name() + " embedding",
                     [&] { return provider.embed_text(text); });
  } catch (const ProviderError& e) {
    throw Error(ErrorKind::ProviderFailure, std::string("embedding failed: ") + e.what());
  }
  if (!v.allFinite()) {
    throw Error(ErrorKind::ProviderFailure, "embedding provider returned non-finite values");
  }
  if (cache != nullptr) cache->put(text, v);
  return v;
}

}  // namespace layoutgen
