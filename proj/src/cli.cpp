// Copyright 2026 The aihq-rater Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aihq/cli.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <pthread.h>

#include "aihq/backend.hpp"
#include "aihq/cache.hpp"
#include "aihq/csv.hpp"
#include "aihq/error.hpp"
#include "aihq/finetune.hpp"
#include "aihq/instrument.hpp"
#include "aihq/report.hpp"
#include "aihq/scoring.hpp"
#include "aihq/service.hpp"

namespace aihq::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = SplitSpec{}.seed;

struct Options {
  std::string input;
  std::string catalog;
  std::string backend_config;
  std::string backend_id;
  std::string model_id;
  std::string cache;
  std::size_t parallelism = 1;
  std::uint64_t seed = kDefaultSeed;
  std::string format;
  std::string out;
  std::string merged_out;
  std::string manifest_out;
  double temperature = 0.0;
  int max_tokens = 10;
  int retry_budget = 2;
  double fraction = 0.5;
  bool no_stratify = false;
  std::string train_out;
  std::string test_out;
  std::string method = "welch";
  std::string tail = "greater";
  std::string data_root = "aihq-data";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_jobs = 2;
  std::string static_dir;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    csv::write_text_file(path, text);
  }
}

BackendConfig pick_backend(const Options& o) {
  if (o.backend_config.empty()) throw Error(ErrorCode::InvalidArgument, "--backend-config is required");
  auto configs = load_backend_configs(o.backend_config);
  if (configs.empty()) throw Error(ErrorCode::InvalidBackendConfig, "backend config lists no backends");
  BackendConfig chosen = configs.front();
  if (!o.backend_id.empty()) {
    auto it = std::find_if(configs.begin(), configs.end(), [&](const auto& c) { return c.backend_id == o.backend_id; });
    if (it == configs.end()) throw Error(ErrorCode::InvalidBackendConfig, fmt::format("no backend '{}'", o.backend_id));
    chosen = *it;
  }
  if (!o.model_id.empty()) chosen.model_id = o.model_id;
  return chosen;
}

Catalog require_catalog(const Options& o) {
  if (o.catalog.empty()) throw Error(ErrorCode::InvalidArgument, "--catalog is required");
  return load_catalog_csv(o.catalog);
}

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  const Catalog catalog = require_catalog(o);
  const Dataset dataset = load_dataset_csv(o.input);
  const BackendConfig cfg = pick_backend(o);
  auto backend = make_backend(cfg);
  ScoreCache cache = o.cache.empty() ? ScoreCache() : ScoreCache(fs::path(o.cache));

  ScoringOptions options;
  options.decoding = {o.temperature, o.max_tokens};
  options.parallelism = o.parallelism;
  options.retry_budget = o.retry_budget;
  const ScoredDataset scored = score_dataset(dataset, catalog, *backend, cache, options);

  const std::string format = o.format.empty() ? "csv" : o.format;
  if (format == "csv") {
    emit(o.out, write_results_csv(scored), out);
  } else if (format == "json") {
    emit(o.out, write_results_json(scored), out);
  } else {
    throw Error(ErrorCode::InvalidArgument, fmt::format("--format must be csv or json for score, got '{}'", format));
  }
  std::string manifest_path = o.manifest_out;
  if (manifest_path.empty() && !o.out.empty() && o.out != "-") manifest_path = o.out + ".manifest.json";
  if (!manifest_path.empty()) csv::write_text_file(manifest_path, write_manifest_json(scored.manifest));
  if (!o.merged_out.empty()) csv::write_text_file(o.merged_out, write_merged_csv(dataset, scored));

  const auto& m = scored.manifest;
  err << fmt::format("scored {} items: {} rated, {} cache hits, {} backend calls, {} failures\n", m.items_total,
                     m.items_rated, m.cache_hits, m.backend_calls, m.failures.size());
  for (const auto& f : m.failures) {
    err << fmt::format("  {} scenario {} {}: {}\n", f.participant_id, f.scenario_id, to_string(f.construct), f.reason);
  }
  return m.failures.empty() ? kExitOk : kExitPartial;
}

stats::TTestMethod parse_method(const std::string& s) {
  for (auto m : {stats::TTestMethod::Student, stats::TTestMethod::Welch, stats::TTestMethod::Paired}) {
    if (stats::to_string(m) == s) return m;
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown --method '{}'", s));
}

stats::Tail parse_tail(const std::string& s) {
  for (auto t : {stats::Tail::OneTailedGreater, stats::Tail::TwoTailed}) {
    if (stats::to_string(t) == s) return t;
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown --tail '{}'", s));
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const EvaluationInput input = load_evaluation_csv(o.input);
  if (input.dataset.empty()) throw Error(ErrorCode::InvalidCsv, "the CSV has no data rows");
  const Catalog catalog = o.catalog.empty() ? catalog_from_dataset(input.dataset) : load_catalog_csv(o.catalog);
  const EvaluationReport report = evaluate(input, catalog, {parse_method(o.method), parse_tail(o.tail)});
  const std::string format = o.format.empty() ? "text" : o.format;
  if (format == "text") {
    emit(o.out, report_to_text(report), out);
  } else if (format == "csv") {
    emit(o.out, report_to_csv(report), out);
  } else if (format == "json") {
    emit(o.out, report_to_json(report), out);
  } else {
    throw Error(ErrorCode::InvalidArgument, fmt::format("--format must be text, csv or json, got '{}'", format));
  }
  return kExitOk;
}

int cmd_split(const Options& o, std::ostream& out) {
  const Dataset dataset = load_dataset_csv(o.input);
  const Split split = stratified_split(dataset, {o.fraction, o.seed, !o.no_stratify});
  csv::write_text_file(o.train_out, write_dataset_csv(split.train));
  csv::write_text_file(o.test_out, write_dataset_csv(split.test));
  out << fmt::format("train {} participants, test {} participants (seed {})\n", split.train.size(),
                     split.test.size(), o.seed);
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const Catalog catalog = require_catalog(o);
  const Dataset dataset = load_dataset_csv(o.input, {.require_human_ratings = true});
  const std::string format = o.format.empty() ? "chat" : o.format;
  if (format == "chat") {
    emit(o.out, export_chat_jsonl(dataset, catalog), out);
  } else if (format == "text2text") {
    emit(o.out, export_text2text_jsonl(dataset, catalog), out);
  } else {
    throw Error(ErrorCode::InvalidArgument, fmt::format("--format must be chat or text2text, got '{}'", format));
  }
  return kExitOk;
}

int cmd_select(const Options& o, std::ostream& out) {
  const CheckpointChoice c = select_checkpoint(load_epoch_metrics_csv(o.input));
  if (o.format == "json") {
    nlohmann::ordered_json j{{"epoch", c.epoch}, {"rationale", c.rationale}};
    emit(o.out, j.dump() + "\n", out);
  } else {
    emit(o.out, fmt::format("epoch {} ({})\n", c.epoch, c.rationale), out);
  }
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  bool ok = true;
  std::optional<Catalog> catalog;
  if (!o.catalog.empty()) {
    catalog = load_catalog_csv(o.catalog);
    const CatalogReport r = validate_catalog(*catalog);
    out << "catalog: " << r.summary() << "\n";
    ok &= r.complete;
  }
  if (!o.input.empty()) {
    const Dataset d = load_dataset_csv(o.input);
    std::size_t items = 0;
    for (const auto& p : d) items += p.responses.size();
    out << fmt::format("dataset: {} participants, {} responses\n", d.size(), items);
    if (catalog) {
      for (const auto& p : d) {
        for (const auto& [sid, type] : p.scenario_types) {
          const ScenarioSpec* s = catalog->find(sid);
          if (!s || s->scenario_type != type) {
            out << fmt::format("dataset: scenario {} not covered by the catalog\n", sid);
            ok = false;
          }
        }
      }
    }
  }
  if (!o.backend_config.empty()) {
    for (const auto& cfg : load_backend_configs(o.backend_config)) {
      const HealthReport h = validate_backend(cfg);
      out << fmt::format("backend {}: {}\n", cfg.backend_id, h.healthy ? "healthy" : h.reason);
      ok &= h.healthy;
    }
  }
  return ok ? kExitOk : kExitFatal;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ServiceConfig cfg;
  cfg.data_root = o.data_root;
  cfg.host = o.host;
  cfg.port = o.port;
  cfg.max_concurrent_jobs = o.max_jobs;
  cfg.default_parallelism = o.parallelism;
  if (!o.backend_config.empty()) cfg.backends = load_backend_configs(o.backend_config);
  if (!o.catalog.empty()) cfg.default_catalog = load_catalog_csv(o.catalog);
  if (!o.cache.empty()) cfg.cache_path = o.cache;
  if (!o.static_dir.empty()) cfg.static_dir = o.static_dir;

  // Block the signals before any thread exists so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  int code = kExitOk;
  {
    Service service(cfg);
    const int port = service.start();
    out << fmt::format("listening on http://{}:{}\n", cfg.host, port) << std::flush;
    int sig = 0;
    sigwait(&signals, &sig);
    out << "draining\n" << std::flush;
    service.stop();
  }
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate open-ended AIHQ responses with language models and check agreement with human raters.", "aihq"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  Options o;

  auto common_backend = [&](CLI::App* c) {
    c->add_option("--backend-config", o.backend_config, "Backend config JSON");
    c->add_option("--backend", o.backend_id, "Backend id (default: first in the config)");
    c->add_option("--model", o.model_id, "Override the backend's model id");
  };

  auto* score = app.add_subcommand("score", "Score responses with a backend");
  score->add_option("input", o.input, "Dataset CSV")->required();
  score->add_option("--catalog", o.catalog, "Scenario catalog CSV")->required();
  common_backend(score);
  score->add_option("--cache", o.cache, "Score cache file (JSONL)");
  score->add_option("--parallelism", o.parallelism, "Concurrent requests")->check(CLI::PositiveNumber);
  score->add_option("--temperature", o.temperature, "Sampling temperature")->check(CLI::NonNegativeNumber);
  score->add_option("--max-tokens", o.max_tokens, "Completion token limit")->check(CLI::PositiveNumber);
  score->add_option("--retry-budget", o.retry_budget, "Retries for unparseable outputs")->check(CLI::NonNegativeNumber);
  score->add_option("--format", o.format, "csv or json");
  score->add_option("--out", o.out, "Results file (default: stdout)");
  score->add_option("--manifest", o.manifest_out, "Manifest file (default: <out>.manifest.json)");
  score->add_option("--merged-out", o.merged_out, "Dataset plus model rating columns, for evaluate");

  auto* eval = app.add_subcommand("evaluate", "Agreement, group difference and subscale reports");
  eval->add_option("input", o.input, "Dataset CSV with model_hostility and model_aggression")
      ->required()
      ;
  eval->add_option("--catalog", o.catalog, "Scenario catalog CSV (types only are needed)");
  eval->add_option("--method", o.method, "Group test: student, welch or paired");
  eval->add_option("--tail", o.tail, "greater or two-sided");
  eval->add_option("--format", o.format, "text, csv or json");
  eval->add_option("--out", o.out, "Report file (default: stdout)");

  auto* split = app.add_subcommand("split", "Stratified train/test split by group");
  split->add_option("input", o.input, "Dataset CSV")->required();
  split->add_option("--fraction", o.fraction, "Train fraction per stratum")->check(CLI::Range(0.0, 1.0));
  split->add_option("--seed", o.seed, "Random seed");
  split->add_flag("--no-stratify", o.no_stratify, "Ignore group labels");
  split->add_option("--train-out", o.train_out, "Train CSV")->required();
  split->add_option("--test-out", o.test_out, "Test CSV")->required();

  auto* exp = app.add_subcommand("export-finetune", "Write a fine-tuning file");
  exp->add_option("input", o.input, "Training CSV with rater columns")->required();
  exp->add_option("--catalog", o.catalog, "Scenario catalog CSV")->required();
  exp->add_option("--format", o.format, "chat or text2text");
  exp->add_option("--out", o.out, "JSONL file (default: stdout)");

  auto* sel = app.add_subcommand("select-checkpoint", "Pick the best epoch from training metrics");
  sel->add_option("input", o.input, "Metrics CSV")->required();
  sel->add_option("--format", o.format, "text or json");
  sel->add_option("--out", o.out, "Output file (default: stdout)");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  common_backend(serve);
  serve->add_option("--catalog", o.catalog, "Default scenario catalog CSV");
  serve->add_option("--cache", o.cache, "Shared score cache file");
  serve->add_option("--data-root", o.data_root, "Job directory root");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port (0 picks a free one)");
  serve->add_option("--max-jobs", o.max_jobs, "Jobs running at once")->check(CLI::PositiveNumber);
  serve->add_option("--parallelism", o.parallelism, "Default per-job concurrency")->check(CLI::PositiveNumber);
  serve->add_option("--static-dir", o.static_dir, "Serve this directory at /");

  auto* val = app.add_subcommand("validate", "Check a catalog, dataset and backend config");
  val->add_option("--input", o.input, "Dataset CSV");
  val->add_option("--catalog", o.catalog, "Scenario catalog CSV");
  val->add_option("--backend-config", o.backend_config, "Backend config JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*score) return cmd_score(o, out, err);
    if (*eval) return cmd_evaluate(o, out);
    if (*split) return cmd_split(o, out);
    if (*exp) return cmd_export(o, out);
    if (*sel) return cmd_select(o, out);
    if (*serve) return cmd_serve(o, out);
    if (*val) return cmd_validate(o, out);
  } catch (const Error& e) {
    err << fmt::format("error [{}]: {}\n", to_string(e.code()), e.what());
    return kExitFatal;
  } catch (const std::exception& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace aihq::cli
