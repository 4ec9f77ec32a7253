#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "layoutgen/pipeline.hpp"
#include "layoutgen/saliency.hpp"
#include "layoutgen/svg.hpp"

using namespace layoutgen;
namespace fs = std::filesystem;

namespace {

const fs::path kData = LAYOUTGEN_TEST_DATA_DIR;

PipelineConfig rico_config(TaskKind task = TaskKind::GenT) {
  PipelineConfig c;
  c.task = task;
  c.domain = domain_preset("rico");
  c.generation.num_exemplars = 4;
  c.generation.num_samples = 3;
  c.generation.seed = 11;
  c.generation.backoff_ms = 1;
  return c;
}

ExemplarIndex rico_index(const PipelineConfig& c) {
  return ingest_records(read_jsonl(kData / "rico_corpus.jsonl"), c, nullptr, nullptr).index;
}

class DownProvider : public CompletionProvider {
 public:
  std::string name() const override { return "down"; }
  std::string sample(const PromptBundle&, const GenerationParams&, int) override {
    ++calls;
    throw ProviderError("connection refused", false);
  }
  std::atomic<int> calls{0};
};

class GarbageProvider : public CompletionProvider {
 public:
  std::string name() const override { return "garbage"; }
  std::string sample(const PromptBundle&, const GenerationParams&, int) override {
    return "I cannot draw layouts today.";
  }
};

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("layoutgen_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Ingest, RicoCorpusFitsCanvas) {
  const auto c = rico_config();
  const IngestResult r = ingest_records(read_jsonl(kData / "rico_corpus.jsonl"), c, nullptr,
                                        nullptr);
  EXPECT_EQ(r.report.records, 100u);
  EXPECT_EQ(r.report.accepted, 100u);
  EXPECT_TRUE(r.report.warnings.empty());
  for (const auto& ex : r.index.exemplars()) {
    EXPECT_EQ(ex.layout.canvas, (CanvasSpec{90, 160}));
    for (const auto& e : ex.layout.elements) {
      EXPECT_GE(e.box.left, 0);
      EXPECT_GE(e.box.top, 0);
      EXPECT_LE(e.box.left + e.box.width, 90);
      EXPECT_LE(e.box.top + e.box.height, 160);
    }
    // toolbar spans the full width: 1440 px source -> 90
    EXPECT_EQ(ex.layout.elements.front().box.width, 90);
  }
}

TEST(Ingest, SkipsBadRecords) {
  const IngestResult r =
      ingest_records(read_jsonl(kData / "rico_mixed.jsonl"), rico_config(), nullptr, nullptr);
  EXPECT_EQ(r.report.records, 5u);
  EXPECT_EQ(r.report.accepted, 2u);
  ASSERT_EQ(r.report.warnings.size(), 3u);
  EXPECT_NE(r.report.warnings[0].find("bad-type"), std::string::npos);
  EXPECT_THROW(ingest_records({Json::parse(R"({"id":"x","elements":[]})")}, rico_config(),
                              nullptr, nullptr),
               Error);
}

TEST(Ingest, DuplicateIdsSkipped) {
  auto rows = read_jsonl(kData / "rico_corpus.jsonl");
  rows.resize(3);
  rows.push_back(rows[1]);
  const IngestResult r = ingest_records(rows, rico_config(), nullptr, nullptr);
  EXPECT_EQ(r.report.accepted, 3u);
  EXPECT_EQ(r.report.warnings.size(), 1u);
}

TEST(Ingest, ContentAwareSaliency) {
  PipelineConfig c;
  c.task = TaskKind::ContentAware;
  c.domain = domain_preset("posterlayout");
  const auto rows = read_jsonl(kData / "poster_corpus.jsonl");
  const IngestResult r = ingest_records(rows, c, nullptr, nullptr, kData);
  EXPECT_EQ(r.report.accepted, rows.size());
  const Exemplar* given = r.index.find("poster-00");
  ASSERT_NE(given, nullptr);
  EXPECT_EQ(*given->saliency_box, box_from_json(rows[0].at("saliency_box")));

  // square.pgm: bright square at cols 30..45, rows 20..35 of a 64x64 image
  const Exemplar* img = r.index.find("poster-img");
  ASSERT_NE(img, nullptr);
  const BoundingBox b = *img->saliency_box;
  EXPECT_LE(b.left, 30 * 102 / 64);
  EXPECT_LE(b.top, 20 * 150 / 64);
  EXPECT_GE(b.left + b.width, 46 * 102 / 64);
  EXPECT_GE(b.top + b.height, 36 * 150 / 64);
  EXPECT_LT(b.width, 102);
}

TEST(Ingest, SaliencyFallbacks) {
  PipelineConfig c;
  c.task = TaskKind::ContentAware;
  c.domain = domain_preset("posterlayout");
  std::vector<std::string> warnings;
  const CorpusRecord bare = parse_corpus_record(
      Json::parse(R"({"id":"p","elements":[{"type":"logo","box":[0,0,10,10]}]})"), c.domain);
  EXPECT_THROW(resolve_constraint(bare, c, warnings), Error);

  // A flat image has no salient cells: center fallback plus a warning.
  const fs::path dir = scratch_dir("flat");
  write_pgm(dir / "flat.pgm", GrayImage::Constant(32, 32, 128.0));
  const CorpusRecord flat = parse_corpus_record(
      Json::parse(R"({"id":"f","elements":[{"type":"logo","box":[0,0,10,10]}],"image":"flat.pgm"})"),
      c.domain, dir);
  const ConstraintSpec spec = resolve_constraint(flat, c, warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(std::get<ContentConstraint>(spec).box, center_fallback_box(c.domain.canvas));
  fs::remove_all(dir);
}

TEST(Generate, EchoReproducesTopExemplar) {
  const auto c = rico_config();
  const ExemplarIndex index = rico_index(c);
  EchoCompletionProvider echo;
  const auto tests = read_jsonl(kData / "rico_test.jsonl");
  const GenerateReport g = generate_records(tests, index, c, echo, nullptr, nullptr);
  ASSERT_EQ(g.rows.size(), tests.size());
  EXPECT_EQ(g.succeeded, tests.size());
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const Json& row = g.rows[i];
    EXPECT_EQ(row.at("id"), tests[i].at("id"));  // input order, each once
    ASSERT_EQ(row.at("status"), "ok");
    const Exemplar* top = index.find(row.at("exemplar_ids").at(0).get<std::string>());
    ASSERT_NE(top, nullptr);
    EXPECT_EQ(layout_from_json(row.at("best")), top->layout);
  }
  const EvalReport e = evaluate_results(g.rows, read_jsonl(kData / "rico_corpus.jsonl"),
                                        &index, c);
  EXPECT_EQ(e.failed, 0u);
  EXPECT_DOUBLE_EQ(*e.violation, 0.0);
  EXPECT_DOUBLE_EQ(*e.docsim, 1.0);
  EXPECT_DOUBLE_EQ(*e.miou, 1.0);
}

TEST(Generate, DeterministicAcrossRunsAndThreads) {
  auto c = rico_config();
  c.provider.kind = "mock-noisy";
  const ExemplarIndex index = rico_index(c);
  const auto tests = read_jsonl(kData / "rico_test.jsonl");
  NoisyCompletionProvider noisy(3);
  c.generation.max_concurrency = 1;
  const auto a = generate_records(tests, index, c, noisy, nullptr, nullptr);
  c.generation.max_concurrency = 8;
  const auto b = generate_records(tests, index, c, noisy, nullptr, nullptr);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].dump(), b.rows[i].dump());
  c.generation.seed = 12;
  const auto other = generate_records(tests, index, c, noisy, nullptr, nullptr);
  bool differs = false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) differs |= a.rows[i] != other.rows[i];
  EXPECT_TRUE(differs);
}

TEST(Generate, ProviderDownAbortsRun) {
  const auto c = rico_config();
  const ExemplarIndex index = rico_index(c);
  DownProvider down;
  try {
    generate_records(read_jsonl(kData / "rico_test.jsonl"), index, c, down, nullptr, nullptr);
    FAIL() << "expected ProviderFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProviderFailure);
  }
  EXPECT_GT(down.calls.load(), 0);
}

TEST(Generate, NoValidCandidateIsPerSample) {
  const auto c = rico_config();
  const ExemplarIndex index = rico_index(c);
  GarbageProvider garbage;
  auto tests = read_jsonl(kData / "rico_test.jsonl");
  tests.resize(5);
  const auto g = generate_records(tests, index, c, garbage, nullptr, nullptr);
  EXPECT_EQ(g.failed, 5u);
  EXPECT_EQ(g.succeeded, 0u);
  for (const auto& row : g.rows) {
    EXPECT_EQ(row.at("status"), "failed");
    EXPECT_FALSE(row.at("error").get<std::string>().empty());
  }
}

TEST(Generate, BadRowFailsAloneAndMoreExemplarsThanCorpusWarns) {
  auto c = rico_config();
  c.generation.num_exemplars = 10;
  auto rows = read_jsonl(kData / "rico_corpus.jsonl");
  rows.resize(3);
  const ExemplarIndex index = ingest_records(rows, c, nullptr, nullptr).index;
  EchoCompletionProvider echo;
  std::vector<Json> tests{rows[0], Json::parse(R"({"id":"broken","elements":"nope"})")};
  const auto g = generate_records(tests, index, c, echo, nullptr, nullptr);
  EXPECT_EQ(g.succeeded, 1u);
  EXPECT_EQ(g.failed, 1u);
  EXPECT_EQ(g.rows[0].at("exemplar_ids").size(), 3u);
  EXPECT_FALSE(g.rows[0].at("warnings").empty());
  EXPECT_EQ(g.rows[1].at("status"), "failed");
}

TEST(Generate, ZeroShotStillRanks) {
  auto c = rico_config();
  c.generation.num_exemplars = 0;
  const ExemplarIndex index = rico_index(c);
  // A replay fixture cannot know the hash in advance, so use a fixed answer.
  class Fixed : public CompletionProvider {
   public:
    std::string name() const override { return "fixed"; }
    std::string sample(const PromptBundle& p, const GenerationParams&, int) override {
      EXPECT_EQ(p.top_exemplar(), nullptr);
      return "<html>\n<body>\n<div class=\"canvas\" style=\"left: 0px; top: 0px; width: 90px; "
             "height: 160px\"></div>\n<div class=\"toolbar\" style=\"left: 0px; top: 5px; "
             "width: 90px; height: 11px\"></div>\n</body>\n</html>";
    }
  } fixed;
  const auto g = generate_records({read_jsonl(kData / "rico_test.jsonl").front()}, index, c,
                                  fixed, nullptr, nullptr);
  EXPECT_EQ(g.succeeded, 1u);
  EXPECT_TRUE(g.rows[0].at("exemplar_ids").empty());
}

TEST(Generate, IndexTaskMismatch) {
  const ExemplarIndex index = rico_index(rico_config());
  EchoCompletionProvider echo;
  EXPECT_THROW(generate_records({}, index, rico_config(TaskKind::GenTS), echo, nullptr, nullptr),
               Error);
}

TEST(Generate, TextToLayout) {
  PipelineConfig c;
  c.task = TaskKind::TextToLayout;
  c.domain = domain_preset("webui");
  c.generation.num_exemplars = 3;
  c.generation.num_samples = 2;
  HashEmbeddingProvider emb(64);
  EmbeddingCache cache;
  const auto rows = read_jsonl(kData / "web_corpus.jsonl");
  const IngestResult r = ingest_records(rows, c, &emb, &cache);
  EXPECT_EQ(r.report.accepted, rows.size());
  EXPECT_GT(cache.size(), 0u);
  EchoCompletionProvider echo;
  const auto g = generate_records({rows[4]}, r.index, c, echo, &emb, &cache);
  ASSERT_EQ(g.succeeded, 1u);
  EXPECT_EQ(g.rows[0].at("exemplar_ids").at(0), "web-04");
  const EvalReport e = evaluate_results(g.rows, rows, &r.index, c);
  EXPECT_DOUBLE_EQ(*e.type_violation, 0.0);
}

TEST(Outputs, ResultsAndSvgFiles) {
  const auto c = rico_config();
  const ExemplarIndex index = rico_index(c);
  EchoCompletionProvider echo;
  auto tests = read_jsonl(kData / "rico_test.jsonl");
  tests.resize(4);
  const auto g = generate_records(tests, index, c, echo, nullptr, nullptr);
  const fs::path dir = scratch_dir("outputs");
  write_generate_outputs(g, c.domain, dir);
  EXPECT_EQ(read_jsonl(dir / "results.jsonl").size(), 4u);
  for (const auto& t : tests) {
    EXPECT_TRUE(fs::exists(dir / "svg" / (t.at("id").get<std::string>() + ".svg")));
  }
  fs::remove_all(dir);
}

TEST(Evaluate, ReferencesAgainstThemselves) {
  const auto c = rico_config();
  const auto refs = read_jsonl(kData / "rico_corpus.jsonl");
  std::vector<Json> results;
  for (const auto& r : refs) {
    std::vector<std::string> warnings;
    const CorpusRecord rec = parse_corpus_record(r, c.domain);
    results.push_back({{"id", rec.id},
                       {"status", "ok"},
                       {"best", layout_to_json(*rec.layout)},
                       {"constraint", constraint_to_json(resolve_constraint(rec, c, warnings))}});
  }
  const EvalReport e = evaluate_results(results, refs, nullptr, c);
  EXPECT_DOUBLE_EQ(*e.miou, 1.0);
  EXPECT_DOUBLE_EQ(*e.violation, 0.0);
  EXPECT_FALSE(e.docsim);  // no index, no prompting exemplars
}

TEST(Evaluate, MeansOverTwoSamples) {
  const auto c = rico_config();
  const Layout stacked{{90, 160}, {{"text", {0, 0, 10, 10}}, {"text", {0, 0, 10, 10}}}};
  const Layout apart{{90, 160}, {{"text", {0, 0, 10, 10}}, {"text", {50, 50, 10, 10}}}};
  const Json type_c = constraint_to_json(TypeConstraint{{"text", "text"}});
  const Json missing_c = constraint_to_json(TypeConstraint{{"text", "text", "text", "icon"}});
  std::vector<Json> results{
      {{"id", "a"}, {"status", "ok"}, {"best", layout_to_json(stacked)}, {"constraint", type_c}},
      {{"id", "b"}, {"status", "ok"}, {"best", layout_to_json(apart)}, {"constraint", missing_c}},
      {{"id", "c"}, {"status", "failed"}, {"error", "no candidate"}},
  };
  const EvalReport e = evaluate_results(results, {}, nullptr, c);
  EXPECT_EQ(e.failed, 1u);
  ASSERT_EQ(e.samples.size(), 3u);
  EXPECT_NEAR(*e.overlap, (1.0 + 0.0) / 2.0, 1e-12);
  const double vb = *e.samples[1].violation;
  EXPECT_GT(vb, 0.0);
  EXPECT_NEAR(*e.violation, (0.0 + vb) / 2.0, 1e-12);
  EXPECT_FALSE(e.miou);  // no reference shares either label multiset
  const Json j = eval_to_json(e);
  EXPECT_EQ(j.at("failed"), 1);
  EXPECT_TRUE(j.at("mean").at("miou").is_null());
  EXPECT_NE(eval_table(e).find("FID"), std::string::npos);
}

TEST(Evaluate, EmptyResultsIsDataError) {
  try {
    evaluate_results({}, {}, nullptr, rico_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DataError);
  }
}

TEST(SeedSweep, RunsEachSeed) {
  auto c = rico_config();
  const ExemplarIndex index = rico_index(c);
  c.provider.kind = "mock-noisy";
  auto tests = read_jsonl(kData / "rico_test.jsonl");
  tests.resize(6);
  const SeedSweep s = seed_sweep(tests, read_jsonl(kData / "rico_corpus.jsonl"), index, c, 3);
  ASSERT_EQ(s.runs.size(), 3u);
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{11, 12, 13}));
  const Json j = sweep_to_json(s);
  EXPECT_EQ(j.at("runs").size(), 3u);
  EXPECT_TRUE(j.at("summary").contains("Align."));
  EXPECT_GE(j.at("summary").at("Align.").at("variance").get<double>(), 0.0);
  EXPECT_FALSE(sweep_table(s).empty());
}

TEST(Svg, Rendering) {
  const DomainConfig poster = domain_preset("posterlayout");
  const std::string empty = render_svg(Layout{{102, 150}, {}}, poster);
  EXPECT_EQ(empty.find("<g"), std::string::npos);
  EXPECT_NE(empty.find("viewBox=\"0 0 102 150\""), std::string::npos);
  const Layout y{{102, 150}, {{"logo", {1, 2, 30, 10}}, {"underlay", {0, 100, 102, 40}}}};
  const std::string svg = render_svg(y, poster);
  EXPECT_NE(svg.find("#e41a1c"), std::string::npos);
  EXPECT_NE(svg.find("#ffd700"), std::string::npos);
  EXPECT_EQ(svg, render_svg(y, poster));
  EXPECT_NE(render_svg(y, poster, {{"logo", "#000001"}}).find("#000001"), std::string::npos);
}

TEST(Files, SafeStem) {
  EXPECT_EQ(safe_file_stem("q-001"), "q-001");
  EXPECT_EQ(safe_file_stem("a/b c"), "a_b_c");
  EXPECT_EQ(safe_file_stem(".."), "_..");
}

TEST(Files, IngestThenGenerateOnDisk) {
  const fs::path dir = scratch_dir("disk");
  auto c = rico_config();
  c.index_path = (dir / "idx" / "index.json").string();
  c.output_dir = (dir / "out").string();
  const IngestReport ir = ingest(kData / "rico_corpus.jsonl", c);
  EXPECT_EQ(ir.accepted, 100u);
  ASSERT_TRUE(fs::exists(c.index_path));
  const ExemplarIndex loaded = load_index(c.index_path);
  EXPECT_EQ(loaded.size(), 100u);
  EXPECT_EQ(loaded.exemplars().front().layout, rico_index(c).exemplars().front().layout);
  const GenerateReport g = generate(kData / "rico_test.jsonl", c);
  EXPECT_EQ(g.succeeded, 50u);
  fs::remove_all(dir);
}
