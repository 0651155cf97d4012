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

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "aihq/backend.hpp"
#include "aihq/cache.hpp"
#include "aihq/error.hpp"
#include "aihq/instrument.hpp"
#include "aihq/prompts.hpp"

namespace httplib {
class Server;
}

namespace aihq {

struct ServiceConfig {
  std::filesystem::path data_root = "aihq-data";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_concurrent_jobs = 2;
  std::size_t max_upload_bytes = 20U * 1024U * 1024U;
  std::size_t default_parallelism = 4;
  std::vector<BackendConfig> backends;
  /// Used when a job upload carries no catalog file.
  std::optional<Catalog> default_catalog;
  /// Shared across jobs when set; otherwise each job keeps its own cache,
  /// which doubles as its resume journal.
  std::optional<std::filesystem::path> cache_path;
  /// Directory of static files served at "/", e.g. the built web UI.
  std::optional<std::filesystem::path> static_dir;
};

enum class JobStatus { Queued, Running, Done, Failed };
std::string_view to_string(JobStatus s) noexcept;

struct JobRequest {
  std::string backend_id;
  std::optional<std::string> model_id;
  /// Held in memory for the job's lifetime only; never written to disk.
  std::optional<std::string> api_key;
  DecodingParams decoding;
  std::optional<std::size_t> parallelism;
  int retry_budget = 2;
};

/// Parses the multipart `config` field:
/// {"backend_id":"...","model_id":"...","api_key":"...","decoding":{"temperature":0,"max_tokens":10},"parallelism":4,"retry_budget":2}
/// Throws InvalidArgument.
JobRequest parse_job_request(std::string_view json_text);

struct JobSnapshot {
  std::string job_id;
  JobStatus status = JobStatus::Queued;
  std::size_t completed_items = 0;
  std::size_t total_items = 0;
  std::string reason;
  std::string created_at;
  std::string started_at;
  std::string finished_at;
  std::string result_ref;
  std::string backend_id;
  std::string model_id;
  DecodingParams decoding;
  std::size_t parallelism = 1;
  int retry_budget = 2;
  bool ephemeral_key = false;
  std::map<std::string, std::size_t> flag_counts;
  std::size_t failures = 0;

  [[nodiscard]] std::string to_json() const;
  static JobSnapshot from_json(std::string_view text);
};

/// Job registry and worker pool, independent of HTTP. Each job lives in
/// <data_root>/jobs/<id>/ as job.json, config.json, input.csv, catalog.csv,
/// progress.jsonl and, when done, results.csv, results.json, manifest.json.
class JobManager {
 public:
  /// Reloads existing jobs: Queued/Running jobs are queued again, except
  /// those that depended on a request-supplied key, which become
  /// Failed("interrupted").
  explicit JobManager(ServiceConfig config);
  ~JobManager();
  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  /// Errors: PayloadTooLarge, dataset errors (InvalidCsv, MissingColumn, ...),
  /// InvalidBackendConfig (unknown backend), UnknownScenarioId,
  /// ScenarioTypeMismatch, EmptyScenarioText, UnhealthyBackend.
  std::string create_job(std::string_view csv_text, const JobRequest& request,
                         std::optional<std::string_view> catalog_csv = std::nullopt);
  /// Throws UnknownJob.
  [[nodiscard]] JobSnapshot status(const std::string& job_id) const;
  [[nodiscard]] std::vector<JobSnapshot> jobs() const;
  /// format is "csv" or "json". Errors: UnknownJob, NotReady, InvalidArgument.
  [[nodiscard]] std::string results(const std::string& job_id, std::string_view format) const;
  /// Blocks until the job is Done or Failed; false on timeout.
  bool wait(const std::string& job_id, std::chrono::milliseconds timeout) const;

  [[nodiscard]] const ServiceConfig& config() const noexcept { return config_; }

  /// Stops taking queued jobs and interrupts running ones at the next item
  /// boundary. Interrupted jobs stay Running on disk and resume on restart.
  void shutdown();

 private:
  struct JobState;

  void worker_loop(std::stop_token stop);
  void run_job(const std::shared_ptr<JobState>& job, std::stop_token stop);
  void persist(const JobState& job) const;
  [[nodiscard]] std::filesystem::path job_dir(const std::string& job_id) const;
  [[nodiscard]] std::shared_ptr<JobState> find(const std::string& job_id) const;
  [[nodiscard]] const BackendConfig* backend(const std::string& backend_id) const;
  void recover();

  ServiceConfig config_;
  std::unique_ptr<ScoreCache> shared_cache_;
  mutable std::mutex mutex_;
  mutable std::condition_variable_any changed_;
  std::map<std::string, std::shared_ptr<JobState>> jobs_;
  std::deque<std::string> queue_;
  bool accepting_ = true;
  std::vector<std::jthread> workers_;
};

/// HTTP front end:
///   POST /api/jobs                      multipart: file, config[, catalog] -> {"job_id"}
///   GET  /api/jobs/{id}                 job JSON
///   GET  /api/jobs/{id}/results?format=csv|json
///   POST /api/evaluate                  multipart: file[, catalog][, options] -> report JSON
///   GET  /api/backends                  backend summaries, no secrets
///   GET  /api/health
/// Errors are {"code","message","detail"} with a matching HTTP status.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to config.host:config.port (port 0 picks a free port) and serves
  /// on a background thread. Throws Io when the port cannot be bound.
  int start();
  /// Stops accepting requests, then drains the job manager.
  void stop();

  [[nodiscard]] JobManager& jobs() noexcept { return *jobs_; }

 private:
  void routes();

  std::unique_ptr<JobManager> jobs_;
  std::unique_ptr<httplib::Server> server_;
  std::jthread thread_;
};

/// HTTP status code for an error code.
int http_status(ErrorCode code) noexcept;

}  // namespace aihq
