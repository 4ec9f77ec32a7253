#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "layoutgen/constraint.hpp"
#include "layoutgen/gateway.hpp"
#include "layoutgen/geometry.hpp"
#include "layoutgen/http_provider.hpp"
#include "layoutgen/ranker.hpp"

namespace layoutgen {

/// Flat view of a TOML-style file: `[section]` headers, `key = value` lines,
/// `#` comments. Values are strings, integers, floats, booleans or one-line
/// arrays of strings. Keys are stored as "section.key".
class ConfigTable {
 public:
  using Value = std::variant<std::string, std::int64_t, double, bool, std::vector<std::string>>;

  static ConfigTable parse(std::string_view text);
  static ConfigTable load(const std::filesystem::path& path);

  /// Parses `value` with the same rules as a file line.
  void set(const std::string& key, std::string_view value);
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, Value>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_strings(const std::string& key) const;

 private:
  std::map<std::string, Value> values_;
};

struct ProviderSettings {
  std::string kind = "mock-echo";  // mock-echo | mock-noisy | replay | http
  std::string fixture;             // replay
  int noise = 3;                   // mock-noisy max shift
  std::string embedding_kind = "mock-hash";  // mock-hash | http
  int embedding_dimension = 64;
  HttpProviderConfig http;
};

struct PipelineConfig {
  TaskKind task = TaskKind::GenT;
  DomainConfig domain = domain_preset("rico");
  GenerationParams generation;
  RankWeights weights;
  double saliency_threshold = 0.5;
  double relation_tolerance = 0.1;
  PromptOptions prompt;
  ProviderSettings provider;
  std::string index_path = "index.json";
  std::string output_dir = "out";

  static PipelineConfig from_table(const ConfigTable& table);
};

}  // namespace layoutgen
