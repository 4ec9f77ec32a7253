#include "layoutgen/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "layoutgen/error.hpp"

namespace layoutgen {

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "config: " + what);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Reads a double-quoted string starting at s[pos] == '"'; advances pos.
std::string read_quoted(std::string_view s, std::size_t& pos) {
  std::string out;
  ++pos;
  while (pos < s.size()) {
    const char c = s[pos++];
    if (c == '"') return out;
    if (c == '\\' && pos < s.size()) {
      const char e = s[pos++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: config_error(std::string("unsupported escape \\") + e);
      }
      continue;
    }
    out += c;
  }
  config_error("unterminated string");
}

/// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_string) {
      ++i;
    } else if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

ConfigTable::Value parse_value(std::string_view raw) {
  const std::string_view v = trim(raw);
  if (v.empty()) config_error("missing value");
  if (v.front() == '"') {
    std::size_t pos = 0;
    std::string s = read_quoted(v, pos);
    if (!trim(v.substr(pos)).empty()) config_error("trailing text after string");
    return s;
  }
  if (v.front() == '[') {
    std::vector<std::string> items;
    std::size_t pos = 1;
    while (true) {
      while (pos < v.size() && (v[pos] == ' ' || v[pos] == '\t' || v[pos] == ',')) ++pos;
      if (pos >= v.size()) config_error("unterminated array");
      if (v[pos] == ']') break;
      if (v[pos] != '"') config_error("arrays may only hold strings");
      items.push_back(read_quoted(v, pos));
    }
    return items;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  std::string digits;
  for (char c : v) {
    if (c != '_') digits += c;
  }
  std::int64_t i = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), i);
  if (ec == std::errc() && p == digits.data() + digits.size()) return i;
  double d = 0.0;
  auto [pd, ecd] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
  if (ecd == std::errc() && pd == digits.data() + digits.size()) return d;
  // Bare words are accepted as strings for command-line overrides.
  return std::string(v);
}

}  // namespace

ConfigTable ConfigTable::parse(std::string_view text) {
  ConfigTable table;
  std::string section;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++lineno;
    const std::string_view line = trim(strip_comment(text.substr(start, end - start)));
    start = end + 1;
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        if (line.back() != ']') config_error("bad section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) config_error("expected key = value");
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty()) config_error("empty key");
      table.values_[section.empty() ? key : section + "." + key] = parse_value(line.substr(eq + 1));
    } catch (const Error& e) {
      config_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (end == text.size()) break;
  }
  return table;
}

ConfigTable ConfigTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ConfigTable::set(const std::string& key, std::string_view value) {
  values_[key] = parse_value(value);
}

std::string ConfigTable::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return std::to_string(*i);
  config_error(key + " must be a string");
}

std::int64_t ConfigTable::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
  config_error(key + " must be an integer");
}

double ConfigTable::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
  config_error(key + " must be a number");
}

bool ConfigTable::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* b = std::get_if<bool>(&it->second)) return *b;
  config_error(key + " must be a boolean");
}

std::vector<std::string> ConfigTable::get_strings(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return {};
  if (const auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
  config_error(key + " must be an array of strings");
}

PipelineConfig PipelineConfig::from_table(const ConfigTable& t) {
  PipelineConfig c;
  c.task = parse_task(t.get_string("task", std::string(task_key(c.task))));

  c.domain = domain_preset(t.get_string("domain", "rico"));
  if (t.contains("domain_custom.name")) {
    c.domain.key = t.get_string("domain_custom.key", "custom");
    c.domain.name = t.get_string("domain_custom.name", "");
    c.domain.canvas = {static_cast<int>(t.get_int("domain_custom.width", 0)),
                       static_cast<int>(t.get_int("domain_custom.height", 0))};
    c.domain.type_vocabulary = t.get_strings("domain_custom.types");
    for (auto& label : c.domain.type_vocabulary) label = normalize_type_label(label);
    if (c.domain.canvas.width <= 0 || c.domain.canvas.height <= 0) {
      config_error("custom domain canvas must be positive");
    }
  }

  auto& g = c.generation;
  g.num_exemplars = static_cast<int>(t.get_int("generation.num_exemplars", g.num_exemplars));
  g.num_samples = static_cast<int>(t.get_int("generation.num_samples", g.num_samples));
  g.temperature = t.get_double("generation.temperature", g.temperature);
  g.seed = static_cast<std::uint64_t>(t.get_int("generation.seed", static_cast<std::int64_t>(g.seed)));
  g.timeout_ms = static_cast<int>(t.get_int("generation.timeout_ms", g.timeout_ms));
  g.max_retries = static_cast<int>(t.get_int("generation.max_retries", g.max_retries));
  g.backoff_ms = static_cast<int>(t.get_int("generation.backoff_ms", g.backoff_ms));
  g.max_concurrency = static_cast<int>(t.get_int("generation.max_concurrency", g.max_concurrency));
  g.validate();

  c.weights.align = t.get_double("ranker.align", c.weights.align);
  c.weights.overlap = t.get_double("ranker.overlap", c.weights.overlap);
  c.weights.iou = t.get_double("ranker.iou", c.weights.iou);
  c.weights.validate();

  c.saliency_threshold = t.get_double("saliency.threshold", c.saliency_threshold);
  if (!(c.saliency_threshold >= 0.0 && c.saliency_threshold <= 1.0)) {
    config_error("saliency.threshold must lie in [0, 1]");
  }
  c.relation_tolerance = t.get_double("metrics.tau", c.relation_tolerance);

  c.prompt.exemplar_headers = t.get_bool("prompt.exemplar_headers", c.prompt.exemplar_headers);
  c.prompt.generation_cue = t.get_string("prompt.generation_cue", c.prompt.generation_cue);

  auto& p = c.provider;
  p.kind = t.get_string("provider.kind", p.kind);
  p.fixture = t.get_string("provider.fixture", p.fixture);
  p.noise = static_cast<int>(t.get_int("provider.noise", p.noise));
  p.embedding_kind = t.get_string("provider.embedding_kind", p.embedding_kind);
  p.embedding_dimension =
      static_cast<int>(t.get_int("provider.embedding_dimension", p.embedding_dimension));
  p.http.base_url = t.get_string("provider.base_url", p.http.base_url);
  p.http.completion_path = t.get_string("provider.completion_path", p.http.completion_path);
  p.http.embedding_path = t.get_string("provider.embedding_path", p.http.embedding_path);
  p.http.model = t.get_string("provider.model", p.http.model);
  p.http.embedding_model = t.get_string("provider.embedding_model", p.http.embedding_model);
  p.http.api_key_env = t.get_string("provider.api_key_env", p.http.api_key_env);
  p.http.timeout_ms = g.timeout_ms;

  c.index_path = t.get_string("paths.index", c.index_path);
  c.output_dir = t.get_string("paths.output_dir", c.output_dir);
  return c;
}

}  // namespace layoutgen
