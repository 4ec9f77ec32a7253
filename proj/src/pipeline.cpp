#include "layoutgen/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "layoutgen/metrics.hpp"
#include "layoutgen/prng.hpp"
#include "layoutgen/ranker.hpp"
#include "layoutgen/saliency.hpp"
#include "layoutgen/serde.hpp"
#include "layoutgen/svg.hpp"

namespace layoutgen {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void data_error(const std::string& what) {
  throw Error(ErrorKind::DataError, what);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) data_error(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) data_error(std::string(what) + " must be finite");
  return v;
}

RawLayout raw_layout_from_json(const Json& j, const DomainConfig& domain) {
  RawLayout raw;
  raw.source_width = domain.canvas.width;
  raw.source_height = domain.canvas.height;
  if (j.contains("canvas")) {
    const Json& c = j.at("canvas");
    if (!c.is_object()) data_error("canvas must be an object");
    raw.source_width = number(c.value("width", Json()), "canvas.width");
    raw.source_height = number(c.value("height", Json()), "canvas.height");
  }
  const Json& els = j.at("elements");
  if (!els.is_array()) data_error("elements must be an array");
  for (const Json& e : els) {
    if (!e.is_object() || !e.contains("type") || !e.at("type").is_string()) {
      data_error("element without a type");
    }
    const std::string label = normalize_type_label(e.at("type").get<std::string>());
    if (!domain.has_type(label)) data_error("unknown element type '" + label + "'");
    const Json& box = e.value("box", Json());
    if (!box.is_array() || box.size() != 4) data_error("element box must be [l, t, w, h]");
    RawElement r;
    r.type_label = label;
    r.left = number(box[0], "box.left");
    r.top = number(box[1], "box.top");
    r.width = number(box[2], "box.width");
    r.height = number(box[3], "box.height");
    if (r.width < 0 || r.height < 0) data_error("negative box extent");
    raw.elements.push_back(r);
  }
  return raw;
}

std::vector<std::string> sorted_types(const Layout& y) {
  std::vector<std::string> out;
  for (const auto& e : sorted_by_type(y.elements)) out.push_back(e.type_label);
  return out;
}

std::vector<std::string> label_multiset(const Layout& y) {
  std::vector<std::string> out;
  for (const auto& e : y.elements) out.push_back(e.type_label);
  std::sort(out.begin(), out.end());
  return out;
}

Json strings_json(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

std::string row_id(const Json& j, std::size_t line) {
  if (j.is_object() && j.contains("id") && j.at("id").is_string()) {
    return j.at("id").get<std::string>();
  }
  return "line-" + std::to_string(line + 1);
}

struct SampleOutcome {
  Json row;
  bool ok = false;
};

SampleOutcome generate_one(const Json& input, std::size_t line, const ExemplarIndex& index,
                           const PipelineConfig& config, CompletionProvider& completion,
                           EmbeddingProvider* embedder, EmbeddingCache* cache,
                           const fs::path& base_dir) {
  const std::string id = row_id(input, line);
  Json row = {{"id", id}, {"task", std::string(task_key(config.task))}};
  std::vector<std::string> warnings;
  auto fail = [&](const std::string& why) {
    row["status"] = "failed";
    row["error"] = why;
    row["warnings"] = strings_json(warnings);
    return SampleOutcome{std::move(row), false};
  };

  ConstraintSpec constraint;
  Query query;
  try {
    const CorpusRecord rec = parse_corpus_record(input, config.domain, base_dir);
    constraint = resolve_constraint(rec, config, warnings);
    query.constraint = constraint;
    if (config.task == TaskKind::TextToLayout) {
      if (embedder == nullptr) data_error("text-to-layout needs an embedding provider");
      query.embedding = embed(*embedder, cache, std::get<TextConstraint>(constraint).text,
                              config.generation);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ProviderFailure) throw;
    return fail(e.what());
  }
  row["constraint"] = constraint_to_json(constraint);

  const int n = config.generation.num_exemplars;
  // Ranking still needs a reference set when the prompt is zero-shot.
  Selection sel = select_top_k(query, index, std::max(n, 1));
  for (auto& w : sel.warnings) warnings.push_back(std::move(w));

  std::vector<const Exemplar*> prompting;
  std::vector<Layout> references;
  Json ids = Json::array();
  for (std::size_t i = 0; i < sel.items.size(); ++i) {
    references.push_back(sel.items[i].exemplar->layout);
    if (static_cast<int>(i) < n) {
      prompting.push_back(sel.items[i].exemplar);
      ids.push_back(sel.items[i].exemplar->id);
    }
  }
  row["exemplar_ids"] = ids;

  const std::uint64_t seed = record_seed(config.generation.seed, id);
  const PromptBundle prompt =
      build_prompt(config.task, config.domain, prompting, constraint, seed, config.prompt);
  row["prompt_hash"] = prompt.hash();

  // Provider failure propagates and aborts the run.
  CompletionBatch batch = complete(completion, prompt, config.generation);
  for (auto& w : batch.warnings) warnings.push_back(std::move(w));

  std::vector<Candidate> candidates;
  for (const auto& c : batch.completions) {
    try {
      ParseResult parsed = parse_layout_html(c.text, config.domain);
      for (auto& w : parsed.warnings) {
        warnings.push_back("sample " + std::to_string(c.sample_index) + ": " + w);
      }
      candidates.push_back({std::move(parsed.layout), c.sample_index});
    } catch (const Error& e) {
      warnings.push_back("sample " + std::to_string(c.sample_index) + ": " + e.what());
    }
  }

  std::vector<RankedCandidate> ranked;
  try {
    ranked = rank_candidates(candidates, references, config.weights);
  } catch (const Error& e) {
    return fail(e.what());
  }

  Json cands = Json::array();
  for (const auto& r : ranked) {
    cands.push_back({{"source_index", r.source_index},
                     {"q", r.q},
                     {"align", r.align},
                     {"overlap", r.overlap},
                     {"miou", r.miou},
                     {"layout", layout_to_json(r.layout)}});
  }
  row["status"] = "ok";
  row["best"] = layout_to_json(ranked.front().layout);
  row["candidates"] = std::move(cands);
  row["warnings"] = strings_json(warnings);
  return {std::move(row), true};
}

std::optional<double> mean_of(const std::vector<SampleMetrics>& s,
                              std::optional<double> SampleMetrics::*field) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& m : s) {
    if ((m.*field).has_value()) {
      sum += *(m.*field);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string fmt(const std::optional<double>& v, double scale = 1.0, int digits = 4) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v * scale);
  return buf;
}

struct MetricColumn {
  const char* name;
  std::optional<double> EvalReport::*field;
  double scale;
};

const MetricColumn kColumns[] = {
    {"mIoU", &EvalReport::miou, 1.0},
    {"Align.", &EvalReport::align, 1.0},
    {"Overlap", &EvalReport::overlap, 1.0},
    {"Vio.%", &EvalReport::violation, 100.0},
    {"DocSim", &EvalReport::docsim, 1.0},
};

}  // namespace

CorpusRecord parse_corpus_record(const Json& j, const DomainConfig& domain,
                                 const fs::path& base_dir) {
  if (!j.is_object()) data_error("record must be a JSON object");
  CorpusRecord r;
  if (!j.contains("id") || !j.at("id").is_string() || j.at("id").get<std::string>().empty()) {
    data_error("record needs a non-empty string id");
  }
  r.id = j.at("id").get<std::string>();
  try {
    if (j.contains("elements")) {
      r.layout = discretize_layout(raw_layout_from_json(j, domain), domain.canvas);
    }
    if (j.contains("constraint")) r.constraint = constraint_from_json(j.at("constraint"));
    if (j.contains("text")) {
      if (!j.at("text").is_string()) data_error("text must be a string");
      r.text = j.at("text").get<std::string>();
    }
    if (j.contains("saliency_box")) {
      BoundingBox b = box_from_json(j.at("saliency_box"));
      clamp_to_canvas(b, domain.canvas);
      r.saliency_box = b;
    }
    if (j.contains("image")) {
      if (!j.at("image").is_string()) data_error("image must be a path string");
      fs::path p = j.at("image").get<std::string>();
      r.image = p.is_absolute() ? p : base_dir / p;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DataError) throw;
    data_error(e.what());
  } catch (const nlohmann::json::exception& e) {
    data_error(e.what());
  }
  return r;
}

std::uint64_t record_seed(std::uint64_t seed, const std::string& id) {
  return mix_seed(seed, fnv1a64(id));
}

ConstraintSpec resolve_constraint(const CorpusRecord& r, const PipelineConfig& config,
                                  std::vector<std::string>& warnings) {
  if (r.constraint) {
    if (!constraint_matches(config.task, *r.constraint)) {
      data_error("record " + r.id + ": constraint kind does not fit task " +
                 std::string(task_key(config.task)));
    }
    return *r.constraint;
  }
  switch (config.task) {
    case TaskKind::ContentAware: {
      if (!r.layout) data_error("record " + r.id + ": content-aware record needs elements");
      BoundingBox box;
      if (r.saliency_box) {
        box = *r.saliency_box;
      } else if (r.image) {
        const SaliencyMap map = spectral_residual_saliency(read_pgm(*r.image));
        if (auto b = rectify(map, config.saliency_threshold, config.domain.canvas)) {
          box = *b;
        } else {
          warnings.push_back("record " + r.id + ": empty saliency map, using canvas center");
          box = center_fallback_box(config.domain.canvas);
        }
      } else {
        data_error("record " + r.id + ": content-aware record needs saliency_box or image");
      }
      return derive_content_constraint(*r.layout, box);
    }
    case TaskKind::TextToLayout: {
      if (!r.text || r.text->empty()) data_error("record " + r.id + ": missing text");
      TextConstraint t;
      t.text = *r.text;
      if (r.layout) t.types = sorted_types(*r.layout);
      return t;
    }
    default:
      if (!r.layout || r.layout->empty()) {
        data_error("record " + r.id + ": no elements to derive a constraint from");
      }
      return derive_constraint(config.task, *r.layout,
                               record_seed(config.generation.seed, r.id));
  }
}

Providers make_providers(const PipelineConfig& config) {
  Providers p;
  const ProviderSettings& s = config.provider;
  if (s.kind == "mock-echo") {
    p.completion = std::make_unique<EchoCompletionProvider>();
  } else if (s.kind == "mock-noisy") {
    p.completion = std::make_unique<NoisyCompletionProvider>(s.noise);
  } else if (s.kind == "replay") {
    if (s.fixture.empty()) throw Error(ErrorKind::InvalidInput, "replay provider needs a fixture");
    p.completion = std::make_unique<ReplayCompletionProvider>(s.fixture);
  } else if (s.kind == "http") {
    p.completion = std::make_unique<HttpCompletionProvider>(s.http);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown provider kind '" + s.kind + "'");
  }
  if (config.task == TaskKind::TextToLayout) {
    if (s.embedding_kind == "mock-hash") {
      p.embedding = std::make_unique<HashEmbeddingProvider>(s.embedding_dimension);
    } else if (s.embedding_kind == "http") {
      p.embedding = std::make_unique<HttpEmbeddingProvider>(s.http);
    } else {
      throw Error(ErrorKind::InvalidInput,
                  "unknown embedding provider '" + s.embedding_kind + "'");
    }
  }
  return p;
}

fs::path embedding_cache_path(const fs::path& index_path) {
  fs::path p = index_path;
  p += ".embeddings.json";
  return p;
}

IngestResult ingest_records(const std::vector<Json>& rows, const PipelineConfig& config,
                            EmbeddingProvider* embedder, EmbeddingCache* cache,
                            const fs::path& base_dir) {
  IngestReport report;
  report.records = rows.size();
  std::vector<Exemplar> exemplars;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "record " + row_id(rows[i], i);
    try {
      const CorpusRecord rec = parse_corpus_record(rows[i], config.domain, base_dir);
      if (!rec.layout || rec.layout->empty()) data_error("no elements");
      if (!seen.insert(rec.id).second) data_error("duplicate id");
      Exemplar ex;
      ex.id = rec.id;
      ex.layout = *rec.layout;
      ex.constraint = resolve_constraint(rec, config, report.warnings);
      if (config.task == TaskKind::ContentAware) {
        ex.saliency_box = std::get<ContentConstraint>(ex.constraint).box;
      }
      if (config.task == TaskKind::TextToLayout) {
        if (embedder == nullptr) data_error("text-to-layout needs an embedding provider");
        ex.embedding = embed(*embedder, cache, std::get<TextConstraint>(ex.constraint).text,
                             config.generation);
      }
      exemplars.push_back(std::move(ex));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ProviderFailure) throw;
      report.warnings.push_back(where + " skipped: " + e.what());
    }
  }
  if (exemplars.empty()) data_error("no valid corpus records");
  report.accepted = exemplars.size();
  return {ExemplarIndex(config.domain, config.task, std::move(exemplars)), std::move(report)};
}

IngestReport ingest(const fs::path& corpus, const PipelineConfig& config) {
  const auto rows = read_jsonl(corpus);
  Providers providers;
  if (config.task == TaskKind::TextToLayout) providers = make_providers(config);
  EmbeddingCache cache;
  const fs::path cache_path = embedding_cache_path(config.index_path);
  if (fs::exists(cache_path)) cache.load(cache_path);
  IngestResult result = ingest_records(rows, config, providers.embedding.get(), &cache,
                                       corpus.parent_path());
  if (config.index_path.empty()) throw Error(ErrorKind::InvalidInput, "empty index path");
  const fs::path index_path = config.index_path;
  if (index_path.has_parent_path()) fs::create_directories(index_path.parent_path());
  save_index(result.index, index_path);
  if (config.task == TaskKind::TextToLayout) cache.save(cache_path);
  return std::move(result.report);
}

GenerateReport generate_records(const std::vector<Json>& rows, const ExemplarIndex& index,
                                const PipelineConfig& config, CompletionProvider& completion,
                                EmbeddingProvider* embedder, EmbeddingCache* cache,
                                const fs::path& base_dir) {
  config.generation.validate();
  config.weights.validate();
  if (index.task() != config.task) {
    throw Error(ErrorKind::InvalidInput, "index was built for task " +
                                             std::string(task_key(index.task())) +
                                             ", config asks for " +
                                             std::string(task_key(config.task)));
  }
  if (index.domain().canvas != config.domain.canvas) {
    throw Error(ErrorKind::InvalidInput, "index canvas differs from the configured domain");
  }

  std::vector<SampleOutcome> outcomes(rows.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      try {
        outcomes[i] = generate_one(rows[i], i, index, config, completion, embedder, cache,
                                   base_dir);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        abort.store(true);
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(
      std::max(1, config.generation.max_concurrency), std::max<std::size_t>(rows.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  GenerateReport report;
  for (auto& o : outcomes) {
    (o.ok ? report.succeeded : report.failed) += 1;
    report.rows.push_back(std::move(o.row));
  }
  return report;
}

std::string safe_file_stem(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
                      c == '-';
    if (!keep) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_generate_outputs(const GenerateReport& report, const DomainConfig& domain,
                            const fs::path& out_dir) {
  fs::create_directories(out_dir / "svg");
  write_jsonl(out_dir / "results.jsonl", report.rows);
  for (const Json& row : report.rows) {
    if (row.value("status", "") != "ok") continue;
    const Layout best = layout_from_json(row.at("best"));
    std::ofstream out(out_dir / "svg" / (safe_file_stem(row.at("id").get<std::string>()) + ".svg"),
                      std::ios::binary);
    out << render_svg(best, domain);
    if (!out) data_error("cannot write svg for " + row.at("id").get<std::string>());
  }
}

GenerateReport generate(const fs::path& test_input, const PipelineConfig& config) {
  const auto rows = read_jsonl(test_input);
  const ExemplarIndex index = load_index(config.index_path);
  Providers providers = make_providers(config);
  EmbeddingCache cache;
  const fs::path cache_path = embedding_cache_path(config.index_path);
  if (fs::exists(cache_path)) cache.load(cache_path);
  GenerateReport report = generate_records(rows, index, config, *providers.completion,
                                           providers.embedding.get(), &cache,
                                           test_input.parent_path());
  write_generate_outputs(report, config.domain, config.output_dir);
  return report;
}

EvalReport evaluate_results(const std::vector<Json>& results,
                            const std::vector<Json>& references, const ExemplarIndex* index,
                            const PipelineConfig& config) {
  if (results.empty()) data_error("no results to evaluate");

  std::map<std::vector<std::string>, std::vector<Layout>> by_labels;
  for (std::size_t i = 0; i < references.size(); ++i) {
    try {
      const CorpusRecord rec = parse_corpus_record(references[i], config.domain);
      if (rec.layout && !rec.layout->empty()) {
        by_labels[label_multiset(*rec.layout)].push_back(*rec.layout);
      }
    } catch (const Error& e) {
      spdlog::warn("reference {} skipped: {}", row_id(references[i], i), e.what());
    }
  }

  EvalReport report;
  report.task = config.task;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Json& row = results[i];
    SampleMetrics m;
    m.id = row_id(row, i);
    if (!row.is_object() || row.value("status", "") != "ok" || !row.contains("best")) {
      ++report.failed;
      report.samples.push_back(std::move(m));
      continue;
    }
    m.ok = true;
    const Layout y = layout_from_json(row.at("best"));
    if (y.canvas != config.domain.canvas) {
      data_error("result " + m.id + " is not on the configured domain canvas");
    }
    m.align = alignment_score(y);
    m.overlap = overlap_score(y);

    std::vector<Layout> prompting;
    if (index != nullptr && row.contains("exemplar_ids")) {
      for (const Json& id : row.at("exemplar_ids")) {
        if (const Exemplar* ex = index->find(id.get<std::string>())) {
          prompting.push_back(ex->layout);
        }
      }
    }
    if (auto it = by_labels.find(label_multiset(y)); it != by_labels.end()) {
      m.miou = max_iou(y, it->second);
    } else if (!prompting.empty()) {
      m.miou = max_iou(y, prompting);
    }

    if (row.contains("constraint")) {
      const ConstraintSpec c = constraint_from_json(row.at("constraint"));
      if (auto v = violation_rate(config.task, c, y, config.relation_tolerance)) {
        m.violation = v->rate;
        m.type_violation = v->type_rate;
        m.pos_size_violation = v->pos_size_rate;
      }
    }
    if (!prompting.empty()) {
      double best = 0.0;
      for (const auto& p : prompting) best = std::max(best, docsim(y, p));
      m.docsim = best;
    }
    report.samples.push_back(std::move(m));
  }

  report.align = mean_of(report.samples, &SampleMetrics::align);
  report.overlap = mean_of(report.samples, &SampleMetrics::overlap);
  report.miou = mean_of(report.samples, &SampleMetrics::miou);
  report.violation = mean_of(report.samples, &SampleMetrics::violation);
  report.type_violation = mean_of(report.samples, &SampleMetrics::type_violation);
  report.pos_size_violation = mean_of(report.samples, &SampleMetrics::pos_size_violation);
  report.docsim = mean_of(report.samples, &SampleMetrics::docsim);
  return report;
}

Json eval_to_json(const EvalReport& r) {
  Json samples = Json::array();
  for (const auto& m : r.samples) {
    samples.push_back({{"id", m.id},
                       {"status", m.ok ? "ok" : "failed"},
                       {"align", opt_json(m.align)},
                       {"overlap", opt_json(m.overlap)},
                       {"miou", opt_json(m.miou)},
                       {"violation", opt_json(m.violation)},
                       {"type_violation", opt_json(m.type_violation)},
                       {"pos_size_violation", opt_json(m.pos_size_violation)},
                       {"docsim", opt_json(m.docsim)}});
  }
  return {{"task", std::string(task_key(r.task))},
          {"samples", samples},
          {"failed", r.failed},
          {"mean",
           {{"align", opt_json(r.align)},
            {"overlap", opt_json(r.overlap)},
            {"miou", opt_json(r.miou)},
            {"violation", opt_json(r.violation)},
            {"type_violation", opt_json(r.type_violation)},
            {"pos_size_violation", opt_json(r.pos_size_violation)},
            {"docsim", opt_json(r.docsim)}}}};
}

std::string eval_table(const EvalReport& r) {
  std::ostringstream out;
  out << "task " << task_key(r.task) << ", " << r.samples.size() << " samples, " << r.failed
      << " failed (FID not computed)\n";
  for (const auto& c : kColumns) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%10s", c.name);
    out << buf;
  }
  out << '\n';
  for (const auto& c : kColumns) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%10s", fmt(r.*(c.field), c.scale).c_str());
    out << buf;
  }
  out << '\n';
  if (r.type_violation || r.pos_size_violation) {
    out << "Vio.% type " << fmt(r.type_violation, 100.0) << ", position/size "
        << fmt(r.pos_size_violation, 100.0) << '\n';
  }
  return out.str();
}

SeedSweep seed_sweep(const std::vector<Json>& test_rows, const std::vector<Json>& references,
                     const ExemplarIndex& index, const PipelineConfig& config, int k,
                     const fs::path& base_dir) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "seed count must be at least 1");
  SeedSweep sweep;
  Providers providers = make_providers(config);
  EmbeddingCache cache;
  for (int s = 0; s < k; ++s) {
    PipelineConfig run = config;
    run.generation.seed = config.generation.seed + static_cast<std::uint64_t>(s);
    const GenerateReport g = generate_records(test_rows, index, run, *providers.completion,
                                              providers.embedding.get(), &cache, base_dir);
    sweep.seeds.push_back(run.generation.seed);
    sweep.runs.push_back(evaluate_results(g.rows, references, &index, run));
  }
  return sweep;
}

namespace {

// Mean and population variance of a metric across runs that carry it.
std::optional<std::pair<double, double>> spread(const SeedSweep& s,
                                                std::optional<double> EvalReport::*field,
                                                double scale) {
  std::vector<double> v;
  for (const auto& r : s.runs) {
    if ((r.*field).has_value()) v.push_back(*(r.*field) * scale);
  }
  if (v.empty()) return std::nullopt;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  return std::pair{mean, var};
}

}  // namespace

Json sweep_to_json(const SeedSweep& s) {
  Json runs = Json::array();
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    Json r = eval_to_json(s.runs[i]);
    r["seed"] = s.seeds[i];
    runs.push_back(std::move(r));
  }
  Json summary = Json::object();
  for (const auto& c : kColumns) {
    if (auto sp = spread(s, c.field, c.scale)) {
      summary[c.name] = {{"mean", sp->first}, {"variance", sp->second}};
    } else {
      summary[c.name] = nullptr;
    }
  }
  return {{"runs", runs}, {"summary", summary}};
}

std::string sweep_table(const SeedSweep& s) {
  std::ostringstream out;
  out << s.runs.size() << " seeds (mean +- variance, FID not computed)\n";
  for (const auto& c : kColumns) {
    char buf[96];
    if (auto sp = spread(s, c.field, c.scale)) {
      std::snprintf(buf, sizeof buf, "%-8s %.4f +- %.6f\n", c.name, sp->first, sp->second);
    } else {
      std::snprintf(buf, sizeof buf, "%-8s -\n", c.name);
    }
    out << buf;
  }
  return out.str();
}

}  // namespace layoutgen
