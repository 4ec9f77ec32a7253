// layoutgen: ingest a corpus, generate layouts, evaluate results, render SVG.
//
// Exit codes: 0 ok, 1 usage/config, 2 provider failure, 3 data error.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "layoutgen/config.hpp"
#include "layoutgen/error.hpp"
#include "layoutgen/json_io.hpp"
#include "layoutgen/pipeline.hpp"
#include "layoutgen/svg.hpp"

namespace fs = std::filesystem;
using namespace layoutgen;

namespace {

constexpr int kUsage = 1;
constexpr int kProvider = 2;
constexpr int kData = 3;

struct Overrides {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::string> task, domain, provider, index, out;
  std::optional<int> num_exemplars, num_samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  bool verbose = false;
};

PipelineConfig load_config(const Overrides& o) {
  ConfigTable table;
  if (!o.config_file.empty()) table = ConfigTable::load(o.config_file);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::InvalidInput, "--set expects key=value, got '" + kv + "'");
    }
    table.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  auto put = [&](const char* key, const auto& v) {
    if (v) table.set(key, std::string_view(std::string(*v)));
  };
  auto put_num = [&](const char* key, const auto& v) {
    if (v) table.set(key, std::to_string(*v));
  };
  put("task", o.task);
  put("domain", o.domain);
  put("provider.kind", o.provider);
  put("paths.index", o.index);
  put("paths.output_dir", o.out);
  put_num("generation.num_exemplars", o.num_exemplars);
  put_num("generation.num_samples", o.num_samples);
  put_num("generation.seed", o.seed);
  put_num("saliency.threshold", o.threshold);
  return PipelineConfig::from_table(table);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) spdlog::warn("{}", w);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::DataError, "cannot write " + path.string());
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
      return kUsage;
    case ErrorKind::ProviderFailure:
      return kProvider;
    default:
      return kData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layoutgen: retrieval-augmented layout generation with a language model"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("-c,--config", o.config_file, "TOML-style config file")->check(CLI::ExistingFile);
  app.add_option("--set", o.sets, "Config override key=value (e.g. generation.temperature=0.5)");
  app.add_option("--task", o.task, "gen-t | gen-ts | gen-r | completion | refinement | "
                                   "content-aware | text-to-layout");
  app.add_option("--domain", o.domain, "rico | publaynet | posterlayout | webui");
  app.add_option("--index", o.index, "Index file");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--num-exemplars", o.num_exemplars, "Exemplars per prompt (N)");
  app.add_option("--num-samples", o.num_samples, "Completions per sample (L)");
  app.add_option("--seed", o.seed, "Base seed");
  app.add_option("--provider", o.provider, "mock-echo | mock-noisy | replay | http");
  app.add_option("--threshold", o.threshold, "Saliency threshold");
  app.add_flag("-v,--verbose", o.verbose, "Debug logging");

  auto* ingest_cmd = app.add_subcommand("ingest", "Build an exemplar index from a JSONL corpus");
  std::string corpus;
  ingest_cmd->add_option("corpus", corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);

  auto* gen_cmd = app.add_subcommand("generate", "Generate layouts for a JSONL test file");
  std::string test_input;
  gen_cmd->add_option("input", test_input, "Test JSONL")->required()->check(CLI::ExistingFile);

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a results file");
  std::string results_path, references_path, report_path, sweep_input;
  int seeds = 0;
  eval_cmd->add_option("results", results_path, "results.jsonl (ignored with --seeds)");
  eval_cmd->add_option("--references", references_path, "Reference layouts JSONL")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--report", report_path, "Write the JSON report here");
  eval_cmd->add_option("--seeds", seeds, "Rerun generation with k seeds and report mean/variance");
  eval_cmd->add_option("--input", sweep_input, "Test JSONL for --seeds")->check(CLI::ExistingFile);

  auto* render_cmd = app.add_subcommand("render", "Render a layout JSON or results JSONL to SVG");
  std::string render_input;
  render_cmd->add_option("input", render_input, "layout .json or results .jsonl")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  spdlog::set_default_logger(spdlog::stderr_color_mt("layoutgen"));
  spdlog::set_pattern("%^[%l]%$ %v");
  spdlog::set_level(o.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    const PipelineConfig config = load_config(o);

    if (*ingest_cmd) {
      const IngestReport r = ingest(corpus, config);
      print_warnings(r.warnings);
      std::cout << "ingested " << r.accepted << " of " << r.records << " records into "
                << config.index_path << "\n";
      return 0;
    }

    if (*gen_cmd) {
      const GenerateReport r = generate(test_input, config);
      for (const Json& row : r.rows) {
        for (const Json& w : row.value("warnings", Json::array())) {
          spdlog::warn("{}: {}", row.value("id", ""), w.get<std::string>());
        }
        if (row.value("status", "") != "ok") {
          spdlog::warn("{}: failed: {}", row.value("id", ""), row.value("error", ""));
        }
      }
      std::cout << r.succeeded << " ok, " << r.failed << " failed; results in "
                << (fs::path(config.output_dir) / "results.jsonl").string() << "\n";
      return 0;
    }

    if (*eval_cmd) {
      const std::vector<Json> references =
          references_path.empty() ? std::vector<Json>{} : read_jsonl(references_path);
      std::optional<ExemplarIndex> index;
      if (fs::exists(config.index_path)) index = load_index(config.index_path);
      if (seeds > 0) {
        if (sweep_input.empty() || !index) {
          throw Error(ErrorKind::InvalidInput, "--seeds needs --input and an existing index");
        }
        const SeedSweep s = seed_sweep(read_jsonl(sweep_input), references, *index, config,
                                       seeds, fs::path(sweep_input).parent_path());
        std::cout << sweep_table(s);
        if (!report_path.empty()) write_text(report_path, sweep_to_json(s).dump(2) + "\n");
        return 0;
      }
      if (results_path.empty()) throw Error(ErrorKind::InvalidInput, "missing results file");
      const EvalReport r = evaluate_results(read_jsonl(results_path), references,
                                            index ? &*index : nullptr, config);
      std::cout << eval_table(r);
      if (!report_path.empty()) write_text(report_path, eval_to_json(r).dump(2) + "\n");
      return 0;
    }

    if (*render_cmd) {
      const fs::path out_dir = config.output_dir;
      fs::create_directories(out_dir);
      if (fs::path(render_input).extension() == ".jsonl") {
        int n = 0;
        for (const Json& row : read_jsonl(render_input)) {
          if (row.value("status", "") != "ok") continue;
          const std::string id = row.at("id").get<std::string>();
          write_text(out_dir / (safe_file_stem(id) + ".svg"),
                     render_svg(layout_from_json(row.at("best")), config.domain));
          ++n;
        }
        std::cout << "rendered " << n << " layouts into " << out_dir.string() << "\n";
      } else {
        const Layout y = layout_from_json(Json::parse(read_text_file(render_input)));
        const fs::path target = out_dir / (fs::path(render_input).stem().string() + ".svg");
        write_text(target, render_svg(y, config.domain));
        std::cout << "wrote " << target.string() << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("data: {}", e.what());
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("io: {}", e.what());
    return kData;
  }
  return kUsage;
}
