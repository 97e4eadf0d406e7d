// doclens: corpus -> topic models -> analyses -> summaries -> bundle -> API.
//
// Exit status: 0 success, 1 usage or configuration error, 2 runtime failure.
// Progress and errors are JSON lines on standard error.
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "doclens/error.hpp"
#include "doclens/service/api.hpp"
#include "doclens/service/pipeline.hpp"

namespace fs = std::filesystem;
using namespace doclens;
using nlohmann::json;

namespace {

void progress(const json& event) {
  std::cerr << event.dump() << std::endl;
}

/// `--models` may name the workspace or its models/ directory.
service::Workspace workspace_for_models(const fs::path& dir) {
  if (fs::is_directory(dir / "models")) return {dir};
  if (dir.has_parent_path() && fs::exists(dir.parent_path() / "corpus.json")) return {dir.parent_path()};
  return {dir};
}

int fail(int status, const std::string& code, const std::string& message) {
  progress({{"event", "error"}, {"code", code}, {"message", message}});
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modelling, analysis and summarization of structured document collections"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every verb");

  fs::path manifest, out_dir, corpus_dir, config_path, models_dir, bundle_out, workspace_dir = ".";
  std::string sections = "all";
  std::optional<std::string> timestamp;
  bool force = false, stub = false;

  auto* ingest = app.add_subcommand("ingest", "Build the processed corpus from a manifest");
  ingest->add_option("--manifest", manifest, "Corpus manifest (JSON)")->required();
  ingest->add_option("--out", out_dir, "Workspace directory")->required();

  auto* fit = app.add_subcommand("fit", "Select and fit a topic model per section");
  fit->add_option("--corpus", corpus_dir, "Workspace directory written by ingest")->required();
  fit->add_option("--sections", sections, "\"all\" or comma-separated section ids")->capture_default_str();
  fit->add_option("--config", config_path, "Pipeline config (JSON)")->required();

  auto* analyze = app.add_subcommand("analyze", "Distances, clusterings, mappings, rankings and correlations");
  analyze->add_option("--models", models_dir, "Workspace (or its models/ directory)")->required();

  auto* summarize = app.add_subcommand("summarize", "Summarize every section of the corpus");
  summarize->add_option("--corpus", corpus_dir, "Workspace directory")->required();
  summarize->add_flag("--stub", stub, "Offline deterministic LLM double");

  auto* exporter = app.add_subcommand("export", "Write the analysis bundle");
  exporter->add_option("--out", bundle_out, "Bundle directory")->required();
  exporter->add_option("--workspace", workspace_dir, "Workspace directory")->capture_default_str();
  exporter->add_option("--timestamp", timestamp, "Creation time recorded in the bundle");

  auto* run_app = app.add_subcommand("run-app", "Serve a bundle over HTTP");
  run_app->add_option("--config", config_path, "App config (JSON)")->required();

  for (auto* sub : {ingest, fit, analyze, summarize, exporter}) {
    sub->add_flag("--force", force, "Re-run even if the stage is up to date");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  const service::StageOptions opts{force, progress};
  try {
    if (*ingest) {
      service::run_ingest(manifest, {out_dir}, opts);
    } else if (*fit) {
      const auto config = service::pipeline_config_from_json(service::read_json_file(config_path));
      service::run_fit({corpus_dir}, sections, config, opts);
    } else if (*analyze) {
      service::run_analyze(workspace_for_models(models_dir), opts);
    } else if (*summarize) {
      const service::Workspace ws{corpus_dir};
      const auto config = ws.load_config();
      if (stub) {
        summarize::StubLlmClient::Options stub_options;
        stub_options.word_budget = config.summarize.options.abstractive.word_budget;
        summarize::StubLlmClient client(stub_options);
        service::run_summarize(ws, client, "stub", opts);
        if (client.budget_violations() > 0) {
          return fail(2, "InputTooLarge", std::to_string(client.budget_violations()) + " calls exceeded the word budget");
        }
      } else {
        summarize::HttpLlmClient client(config.summarize.llm);
        service::run_summarize(ws, client, "http " + config.summarize.llm.endpoint + " " + config.summarize.llm.model,
                               opts);
      }
    } else if (*exporter) {
      service::run_export({workspace_dir}, bundle_out, timestamp, opts);
    } else if (*run_app) {
      service::serve(service::load_app_config(config_path));
    }
  } catch (const Error& e) {
    const int status = e.code() == ErrorCode::InvalidConfig ? 1 : 2;
    return fail(status, std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return fail(2, "Internal", e.what());
  }
  return 0;
}
