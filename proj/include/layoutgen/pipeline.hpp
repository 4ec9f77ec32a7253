#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "layoutgen/config.hpp"
#include "layoutgen/gateway.hpp"
#include "layoutgen/json_io.hpp"
#include "layoutgen/retrieval.hpp"

namespace layoutgen {

// Corpus / test-input line:
//   {"id": "...", "canvas": {"width": W, "height": H},        (source size, optional)
//    "elements": [{"type": "text", "box": [l, t, w, h]}, ...],
//    "constraint": {...},        (optional, already in canvas px)
//    "text": "...", "saliency_box": [l, t, w, h], "image": "bg.pgm"}
struct CorpusRecord {
  std::string id;
  std::optional<Layout> layout;  // discretized to the domain canvas
  std::optional<ConstraintSpec> constraint;
  std::optional<std::string> text;
  std::optional<BoundingBox> saliency_box;
  std::optional<std::filesystem::path> image;
};

/// Throws Error(DataError) on anything unusable, including element types
/// outside the domain vocabulary.
CorpusRecord parse_corpus_record(const Json& j, const DomainConfig& domain,
                                 const std::filesystem::path& base_dir = {});

/// Seed for per-record derivations (refinement noise).
std::uint64_t record_seed(std::uint64_t seed, const std::string& id);

/// Constraint for the configured task: the explicit one if present, otherwise
/// derived from the layout. Content-aware boxes come from `saliency_box`,
/// then the image. Appends to `warnings`; throws Error(DataError).
ConstraintSpec resolve_constraint(const CorpusRecord& r, const PipelineConfig& config,
                                  std::vector<std::string>& warnings);

struct Providers {
  std::unique_ptr<CompletionProvider> completion;
  std::unique_ptr<EmbeddingProvider> embedding;
};

Providers make_providers(const PipelineConfig& config);

/// Where the embedding cache lives next to an index file.
std::filesystem::path embedding_cache_path(const std::filesystem::path& index_path);

struct IngestReport {
  std::size_t records = 0;
  std::size_t accepted = 0;
  std::vector<std::string> warnings;
};

struct IngestResult {
  ExemplarIndex index;
  IngestReport report;
};

/// Builds the index in memory. Malformed records are skipped with a warning;
/// zero accepted records throws Error(DataError).
IngestResult ingest_records(const std::vector<Json>& rows, const PipelineConfig& config,
                            EmbeddingProvider* embedder, EmbeddingCache* cache,
                            const std::filesystem::path& base_dir = {});

/// File-level ingest: reads the JSONL corpus, writes config.index_path (and the
/// embedding cache for text tasks).
IngestReport ingest(const std::filesystem::path& corpus, const PipelineConfig& config);

struct GenerateReport {
  std::vector<Json> rows;  // one per test sample, input order
  std::size_t succeeded = 0;
  std::size_t failed = 0;
};

/// Retrieve, prompt, sample, parse and rank for each test record. A sample
/// without a usable candidate is reported as failed; a provider failure
/// aborts the whole run by rethrowing. The index is not modified.
GenerateReport generate_records(const std::vector<Json>& rows, const ExemplarIndex& index,
                                const PipelineConfig& config, CompletionProvider& completion,
                                EmbeddingProvider* embedder, EmbeddingCache* cache,
                                const std::filesystem::path& base_dir = {});

/// Writes `results.jsonl` and `svg/<id>.svg` for every successful sample.
void write_generate_outputs(const GenerateReport& report, const DomainConfig& domain,
                            const std::filesystem::path& out_dir);

GenerateReport generate(const std::filesystem::path& test_input, const PipelineConfig& config);

struct SampleMetrics {
  std::string id;
  bool ok = false;
  std::optional<double> align;
  std::optional<double> overlap;
  std::optional<double> miou;
  std::optional<double> violation;  // fraction in [0, 1]
  std::optional<double> type_violation;
  std::optional<double> pos_size_violation;
  std::optional<double> docsim;
};

struct EvalReport {
  TaskKind task = TaskKind::GenT;
  std::vector<SampleMetrics> samples;
  std::size_t failed = 0;
  // Means over the samples that carry the metric.
  std::optional<double> align;
  std::optional<double> overlap;
  std::optional<double> miou;
  std::optional<double> violation;
  std::optional<double> type_violation;
  std::optional<double> pos_size_violation;
  std::optional<double> docsim;
};

/// Per-sample and mean metrics. mIoU compares against reference layouts with
/// the same label multiset, falling back to the retrieved exemplars. DocSim
/// is the best match among the prompting exemplars and needs `index`.
/// Throws Error(DataError) when there are no results.
EvalReport evaluate_results(const std::vector<Json>& results,
                            const std::vector<Json>& references, const ExemplarIndex* index,
                            const PipelineConfig& config);

Json eval_to_json(const EvalReport& r);
std::string eval_table(const EvalReport& r);

struct SeedSweep {
  std::vector<std::uint64_t> seeds;
  std::vector<EvalReport> runs;
};

/// Reruns generation for seeds base, base+1, ... and evaluates each run.
SeedSweep seed_sweep(const std::vector<Json>& test_rows, const std::vector<Json>& references,
                     const ExemplarIndex& index, const PipelineConfig& config, int k,
                     const std::filesystem::path& base_dir = {});

Json sweep_to_json(const SeedSweep& s);
std::string sweep_table(const SeedSweep& s);

/// File name for per-sample artifacts: characters outside [A-Za-z0-9._-]
/// become '_'.
std::string safe_file_stem(const std::string& id);

}  // namespace layoutgen
