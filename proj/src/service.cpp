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

#include "aihq/service.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <random>

#include "aihq/csv.hpp"
#include "aihq/report.hpp"
#include "aihq/scoring.hpp"
#include "aihq/strings.hpp"

namespace aihq {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string_view to_string(JobStatus s) noexcept {
  switch (s) {
    case JobStatus::Queued: return "Queued";
    case JobStatus::Running: return "Running";
    case JobStatus::Done: return "Done";
    case JobStatus::Failed: return "Failed";
  }
  return "?";
}

namespace {

std::optional<JobStatus> parse_status(std::string_view s) {
  for (JobStatus v : {JobStatus::Queued, JobStatus::Running, JobStatus::Done, JobStatus::Failed}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

bool terminal(JobStatus s) { return s == JobStatus::Done || s == JobStatus::Failed; }

bool valid_job_id(std::string_view id) {
  return id.size() == 32 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::string new_job_id() {
  static std::mutex m;
  static std::random_device rd;
  std::lock_guard lock(m);
  std::uint64_t hi = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::uint64_t lo = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return fmt::format("{:016x}{:016x}", hi, lo);
}

std::string catalog_csv(const Catalog& catalog) {
  std::string out;
  csv::append_row(out, {"scenario_id", "scenario_type", "text"});
  for (const auto& s : catalog.scenarios()) {
    csv::append_row(out, {std::to_string(s.scenario_id), std::string(to_string(s.scenario_type)), s.text});
  }
  return out;
}

}  // namespace

JobRequest parse_job_request(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("job config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "job config must be a JSON object");
  JobRequest r;
  try {
    r.backend_id = j.at("backend_id").get<std::string>();
    if (j.contains("model_id") && !j["model_id"].is_null()) r.model_id = j["model_id"].get<std::string>();
    if (j.contains("api_key") && !j["api_key"].is_null()) {
      auto key = j["api_key"].get<std::string>();
      if (!key.empty()) r.api_key = std::move(key);
    }
    if (j.contains("decoding")) {
      const auto& d = j["decoding"];
      r.decoding.temperature = d.value("temperature", r.decoding.temperature);
      r.decoding.max_tokens = d.value("max_tokens", r.decoding.max_tokens);
    }
    if (j.contains("parallelism") && !j["parallelism"].is_null()) {
      const auto p = j["parallelism"].get<long long>();
      if (p < 1) throw Error(ErrorCode::InvalidArgument, "parallelism must be at least 1");
      r.parallelism = static_cast<std::size_t>(p);
    }
    r.retry_budget = j.value("retry_budget", r.retry_budget);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("job config: {}", e.what()));
  }
  if (r.backend_id.empty()) throw Error(ErrorCode::InvalidArgument, "job config: backend_id is empty");
  if (!(r.decoding.temperature >= 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be >= 0");
  if (r.decoding.max_tokens < 1) throw Error(ErrorCode::InvalidArgument, "max_tokens must be positive");
  if (r.retry_budget < 0) throw Error(ErrorCode::InvalidArgument, "retry_budget must be >= 0");
  return r;
}

std::string JobSnapshot::to_json() const {
  ordered_json j;
  j["job_id"] = job_id;
  j["status"] = to_string(status);
  j["completed_items"] = completed_items;
  j["total_items"] = total_items;
  j["reason"] = reason;
  j["created_at"] = created_at;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["result_ref"] = result_ref;
  j["config"] = {{"backend_id", backend_id},
                 {"model_id", model_id},
                 {"decoding", {{"temperature", decoding.temperature}, {"max_tokens", decoding.max_tokens}}},
                 {"parallelism", parallelism},
                 {"retry_budget", retry_budget},
                 {"ephemeral_key", ephemeral_key}};
  j["flag_counts"] = ordered_json::object();
  for (const auto& [k, v] : flag_counts) j["flag_counts"][k] = v;
  j["failures"] = failures;
  return j.dump(2, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

JobSnapshot JobSnapshot::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    JobSnapshot s;
    s.job_id = j.at("job_id").get<std::string>();
    auto status = parse_status(j.at("status").get<std::string>());
    if (!status) throw Error(ErrorCode::InvalidArgument, "unknown job status");
    s.status = *status;
    s.completed_items = j.value("completed_items", std::size_t{0});
    s.total_items = j.value("total_items", std::size_t{0});
    s.reason = j.value("reason", "");
    s.created_at = j.value("created_at", "");
    s.started_at = j.value("started_at", "");
    s.finished_at = j.value("finished_at", "");
    s.result_ref = j.value("result_ref", "");
    const auto& c = j.at("config");
    s.backend_id = c.at("backend_id").get<std::string>();
    s.model_id = c.value("model_id", "");
    s.decoding.temperature = c.at("decoding").value("temperature", 0.0);
    s.decoding.max_tokens = c.at("decoding").value("max_tokens", 10);
    s.parallelism = c.value("parallelism", std::size_t{1});
    s.retry_budget = c.value("retry_budget", 2);
    s.ephemeral_key = c.value("ephemeral_key", false);
    if (j.contains("flag_counts")) {
      for (const auto& [k, v] : j["flag_counts"].items()) s.flag_counts[k] = v.get<std::size_t>();
    }
    s.failures = j.value("failures", std::size_t{0});
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("job record: {}", e.what()));
  }
}

struct JobManager::JobState {
  JobSnapshot snap;
  std::optional<std::string> api_key;
};

JobManager::JobManager(ServiceConfig config) : config_(std::move(config)) {
  fs::create_directories(config_.data_root / "jobs");
  if (config_.cache_path) shared_cache_ = std::make_unique<ScoreCache>(*config_.cache_path);
  recover();
  const std::size_t n = std::max<std::size_t>(1, config_.max_concurrent_jobs);
  for (std::size_t i = 0; i < n; ++i) {
    workers_.emplace_back([this](std::stop_token st) { worker_loop(st); });
  }
}

JobManager::~JobManager() { shutdown(); }

fs::path JobManager::job_dir(const std::string& job_id) const { return config_.data_root / "jobs" / job_id; }

const BackendConfig* JobManager::backend(const std::string& backend_id) const {
  for (const auto& b : config_.backends) {
    if (b.backend_id == backend_id) return &b;
  }
  return nullptr;
}

void JobManager::persist(const JobState& job) const {
  csv::write_text_file(job_dir(job.snap.job_id) / "job.json", job.snap.to_json());
}

void JobManager::recover() {
  std::vector<std::shared_ptr<JobState>> pending;
  for (const auto& entry : fs::directory_iterator(config_.data_root / "jobs")) {
    if (!entry.is_directory()) continue;
    const std::string id = entry.path().filename().string();
    if (!valid_job_id(id)) continue;
    auto job = std::make_shared<JobState>();
    try {
      job->snap = JobSnapshot::from_json(csv::read_text_file(entry.path() / "job.json"));
    } catch (const std::exception&) {
      job->snap.job_id = id;
      job->snap.status = JobStatus::Failed;
      job->snap.reason = "unreadable job record";
      job->snap.finished_at = utc_timestamp();
      persist(*job);
    }
    job->snap.job_id = id;
    if (!terminal(job->snap.status)) {
      if (job->snap.ephemeral_key) {
        job->snap.status = JobStatus::Failed;
        job->snap.reason = "interrupted";
        job->snap.finished_at = utc_timestamp();
        persist(*job);
      } else {
        pending.push_back(job);
      }
    }
    jobs_[id] = job;
  }
  std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
    return std::tie(a->snap.created_at, a->snap.job_id) < std::tie(b->snap.created_at, b->snap.job_id);
  });
  for (const auto& j : pending) queue_.push_back(j->snap.job_id);
}

std::string JobManager::create_job(std::string_view csv_text, const JobRequest& request,
                                   std::optional<std::string_view> catalog_text) {
  if (csv_text.size() > config_.max_upload_bytes) {
    throw Error(ErrorCode::PayloadTooLarge,
                fmt::format("upload of {} bytes exceeds the {} byte limit", csv_text.size(), config_.max_upload_bytes));
  }
  const Dataset dataset = parse_dataset_csv(csv_text);
  if (dataset.empty()) throw Error(ErrorCode::InvalidCsv, "the CSV has no data rows");

  const BackendConfig* base = backend(request.backend_id);
  if (!base) throw Error(ErrorCode::InvalidBackendConfig, fmt::format("unknown backend '{}'", request.backend_id));
  BackendConfig cfg = *base;
  if (request.model_id && !request.model_id->empty()) cfg.model_id = *request.model_id;

  Catalog catalog;
  if (catalog_text) {
    catalog = parse_catalog_csv(*catalog_text);
  } else if (config_.default_catalog) {
    catalog = *config_.default_catalog;
  } else {
    throw Error(ErrorCode::InvalidArgument, "no scenario catalog: upload one or configure a default");
  }
  for (const auto& p : dataset) {
    for (const auto& [sid, type] : p.scenario_types) {
      const ScenarioSpec& spec = catalog.at(sid);
      if (spec.scenario_type != type) {
        throw Error(ErrorCode::ScenarioTypeMismatch,
                    fmt::format("scenario {} is {} in the upload but {} in the catalog", sid, to_string(type),
                                to_string(spec.scenario_type)));
      }
      if (trim(spec.text).empty()) {
        throw Error(ErrorCode::EmptyScenarioText, fmt::format("catalog scenario {} has no text", sid));
      }
    }
  }

  const HealthReport health = validate_backend(cfg, request.api_key);
  if (!health.healthy) throw Error(ErrorCode::UnhealthyBackend, health.reason);

  std::size_t total = 0;
  for (const auto& p : dataset) total += p.responses.size();

  auto job = std::make_shared<JobState>();
  job->api_key = request.api_key;
  auto& s = job->snap;
  s.job_id = new_job_id();
  s.status = JobStatus::Queued;
  s.total_items = total;
  s.created_at = utc_timestamp();
  s.backend_id = cfg.backend_id;
  s.model_id = cfg.model_id;
  s.decoding = request.decoding;
  s.parallelism = request.parallelism.value_or(config_.default_parallelism);
  s.retry_budget = request.retry_budget;
  s.ephemeral_key = request.api_key.has_value();

  const fs::path dir = job_dir(s.job_id);
  fs::create_directories(dir);
  csv::write_text_file(dir / "input.csv", csv_text);
  csv::write_text_file(dir / "catalog.csv", catalog_csv(catalog));
  persist(*job);

  {
    std::lock_guard lock(mutex_);
    if (!accepting_) throw Error(ErrorCode::BackendUnavailable, "service is shutting down");
    jobs_[s.job_id] = job;
    queue_.push_back(s.job_id);
  }
  changed_.notify_all();
  return s.job_id;
}

std::shared_ptr<JobManager::JobState> JobManager::find(const std::string& job_id) const {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(job_id);
  if (!valid_job_id(job_id) || it == jobs_.end()) {
    throw Error(ErrorCode::UnknownJob, fmt::format("no job '{}'", job_id));
  }
  return it->second;
}

JobSnapshot JobManager::status(const std::string& job_id) const {
  auto job = find(job_id);
  std::lock_guard lock(mutex_);
  return job->snap;
}

std::vector<JobSnapshot> JobManager::jobs() const {
  std::lock_guard lock(mutex_);
  std::vector<JobSnapshot> out;
  for (const auto& [id, j] : jobs_) out.push_back(j->snap);
  return out;
}

std::string JobManager::results(const std::string& job_id, std::string_view format) const {
  const JobSnapshot s = status(job_id);
  std::string file;
  if (format == "csv") {
    file = "results.csv";
  } else if (format == "json") {
    file = "results.json";
  } else {
    throw Error(ErrorCode::InvalidArgument, fmt::format("unknown results format '{}'", format));
  }
  if (s.status != JobStatus::Done) {
    throw Error(ErrorCode::NotReady, fmt::format("job {} is {}", job_id, to_string(s.status)));
  }
  return csv::read_text_file(job_dir(job_id) / file);
}

bool JobManager::wait(const std::string& job_id, std::chrono::milliseconds timeout) const {
  auto job = find(job_id);
  std::unique_lock lock(mutex_);
  return changed_.wait_for(lock, timeout, [&] { return terminal(job->snap.status); });
}

void JobManager::shutdown() {
  {
    std::lock_guard lock(mutex_);
    accepting_ = false;
  }
  for (auto& w : workers_) w.request_stop();
  changed_.notify_all();
  workers_.clear();
}

void JobManager::worker_loop(std::stop_token stop) {
  for (;;) {
    std::shared_ptr<JobState> job;
    {
      std::unique_lock lock(mutex_);
      if (!changed_.wait(lock, stop, [&] { return !queue_.empty(); })) return;
      job = jobs_.at(queue_.front());
      queue_.pop_front();
    }
    run_job(job, stop);
  }
}

void JobManager::run_job(const std::shared_ptr<JobState>& job, std::stop_token stop) {
  const fs::path dir = job_dir(job->snap.job_id);
  auto fail = [&](const std::string& reason) {
    {
      std::lock_guard lock(mutex_);
      job->snap.status = JobStatus::Failed;
      job->snap.reason = reason;
      job->snap.finished_at = utc_timestamp();
      job->api_key.reset();
      persist(*job);
    }
    changed_.notify_all();
  };

  try {
    const BackendConfig* base = backend(job->snap.backend_id);
    if (!base) {
      fail(fmt::format("backend '{}' is no longer configured", job->snap.backend_id));
      return;
    }
    BackendConfig cfg = *base;
    cfg.model_id = job->snap.model_id;
    const Dataset dataset = load_dataset_csv(dir / "input.csv");
    const Catalog catalog = load_catalog_csv(dir / "catalog.csv");
    auto backend_ptr = make_backend(cfg, job->api_key);
    std::unique_ptr<ScoreCache> local_cache;
    if (!shared_cache_) local_cache = std::make_unique<ScoreCache>(dir / "cache.jsonl");
    ScoreCache& cache = shared_cache_ ? *shared_cache_ : *local_cache;

    {
      std::lock_guard lock(mutex_);
      job->snap.status = JobStatus::Running;
      if (job->snap.started_at.empty()) job->snap.started_at = utc_timestamp();
      persist(*job);
    }
    changed_.notify_all();

    std::ofstream journal(dir / "progress.jsonl", std::ios::app);
    ScoringOptions options;
    options.decoding = job->snap.decoding;
    options.parallelism = job->snap.parallelism;
    options.retry_budget = job->snap.retry_budget;
    auto progress = [&](std::size_t done, std::size_t total) {
      journal << fmt::format("{{\"completed\":{},\"total\":{},\"at\":\"{}\"}}\n", done, total, utc_timestamp());
      journal.flush();
      {
        std::lock_guard lock(mutex_);
        job->snap.completed_items = std::max(job->snap.completed_items, done);
        job->snap.total_items = total;
      }
      changed_.notify_all();
    };

    const ScoredDataset scored = score_dataset(dataset, catalog, *backend_ptr, cache, options, progress, stop);
    if (scored.manifest.cancelled) return;

    csv::write_text_file(dir / "results.csv", write_results_csv(scored));
    csv::write_text_file(dir / "results.json", write_results_json(scored));
    csv::write_text_file(dir / "manifest.json", write_manifest_json(scored.manifest));
    csv::write_text_file(dir / "merged.csv", write_merged_csv(dataset, scored));
    {
      std::lock_guard lock(mutex_);
      auto& s = job->snap;
      s.status = JobStatus::Done;
      s.completed_items = s.total_items = scored.manifest.items_total;
      s.flag_counts = scored.manifest.flag_counts;
      s.failures = scored.manifest.failures.size();
      s.result_ref = (dir / "results.csv").string();
      s.finished_at = utc_timestamp();
      job->api_key.reset();
      persist(*job);
    }
    changed_.notify_all();
  } catch (const Error& e) {
    fail(fmt::format("{}: {}", to_string(e.code()), e.what()));
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownJob: return 404;
    case ErrorCode::NotReady: return 409;
    case ErrorCode::PayloadTooLarge: return 413;
    case ErrorCode::UnhealthyBackend:
    case ErrorCode::EmptyCell:
    case ErrorCode::MissingSelfReports: return 422;
    case ErrorCode::AuthFailure: return 401;
    case ErrorCode::BackendUnavailable:
    case ErrorCode::Timeout:
    case ErrorCode::RateLimited: return 503;
    case ErrorCode::Io: return 500;
    default: return 400;
  }
}

namespace {

// Dataset validation problems all reach clients as InvalidCsv; the precise
// code goes in `detail`.
ErrorCode wire_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn:
    case ErrorCode::DuplicateItem:
    case ErrorCode::RatingOutOfRange:
    case ErrorCode::UnknownGroupLabel: return ErrorCode::InvalidCsv;
    default: return code;
  }
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  const ErrorCode wire = wire_code(code);
  ordered_json j;
  j["code"] = to_string(wire);
  j["message"] = message;
  j["detail"] = to_string(code);
  res.status = http_status(wire);
  res.set_content(j.dump(-1, ' ', false, ordered_json::error_handler_t::replace), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    send_error(res, e.code(), e.what());
  } catch (const std::exception& e) {
    send_error(res, ErrorCode::Io, e.what());
  }
}

std::optional<std::string> part(const httplib::Request& req, const char* name) {
  if (!req.has_file(name)) return std::nullopt;
  return req.get_file_value(name).content;
}

}  // namespace

Service::Service(ServiceConfig config)
    : jobs_(std::make_unique<JobManager>(std::move(config))), server_(std::make_unique<httplib::Server>()) {
  routes();
}

Service::~Service() { stop(); }

void Service::routes() {
  auto& srv = *server_;
  const auto& cfg = jobs_->config();
  // No SO_REUSEPORT: a second instance on the same port must fail to bind.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  // Multipart framing adds a little on top of the file itself.
  srv.set_payload_max_length(cfg.max_upload_bytes + 64U * 1024U);
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    ErrorCode code = ErrorCode::InvalidArgument;
    std::string message = "bad request";
    if (res.status == 404) {
      code = ErrorCode::UnknownJob;
      message = "no such endpoint";
    } else if (res.status == 413) {
      code = ErrorCode::PayloadTooLarge;
      message = "upload exceeds the size limit";
    }
    const int status = res.status;
    send_error(res, code, message);
    res.status = status;
    return httplib::Server::HandlerResponse::Handled;
  });

  srv.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });

  srv.Get("/api/backends", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      ordered_json arr = ordered_json::array();
      for (const auto& b : jobs_->config().backends) arr.push_back(ordered_json::parse(backend_summary_json(b)));
      res.set_content(arr.dump(), "application/json");
    });
  });

  srv.Post("/api/jobs", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto file = part(req, "file");
      if (!file) throw Error(ErrorCode::InvalidCsv, "multipart field 'file' is required");
      auto config = part(req, "config");
      if (!config) throw Error(ErrorCode::InvalidArgument, "multipart field 'config' is required");
      const JobRequest request = parse_job_request(*config);
      auto catalog = part(req, "catalog");
      const std::string id =
          catalog ? jobs_->create_job(*file, request, std::string_view(*catalog)) : jobs_->create_job(*file, request);
      res.status = 201;
      res.set_content(ordered_json{{"job_id", id}}.dump(), "application/json");
    });
  });

  srv.Get("/api/jobs/:id", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { res.set_content(jobs_->status(req.path_params.at("id")).to_json(), "application/json"); });
  });

  srv.Get("/api/jobs/:id/results", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string format = req.has_param("format") ? req.get_param_value("format") : "csv";
      const std::string body = jobs_->results(req.path_params.at("id"), format);
      res.set_content(body, format == "csv" ? "text/csv; charset=utf-8" : "application/json");
    });
  });

  srv.Post("/api/evaluate", [](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto file = part(req, "file");
      if (!file) throw Error(ErrorCode::InvalidCsv, "multipart field 'file' is required");
      EvaluationInput input = parse_evaluation_csv(*file);
      auto catalog_text = part(req, "catalog");
      const Catalog catalog = catalog_text ? parse_catalog_csv(*catalog_text) : catalog_from_dataset(input.dataset);
      EvaluationOptions options;
      if (auto opts = part(req, "options")) {
        const json j = json::parse(*opts, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::InvalidArgument, "options must be a JSON object");
        const std::string method = j.value("method", "welch");
        const std::string tail = j.value("tail", "greater");
        bool ok = false;
        for (auto m : {stats::TTestMethod::Student, stats::TTestMethod::Welch, stats::TTestMethod::Paired}) {
          if (stats::to_string(m) == method) options.method = m, ok = true;
        }
        if (!ok) throw Error(ErrorCode::InvalidArgument, fmt::format("unknown method '{}'", method));
        ok = false;
        for (auto t : {stats::Tail::OneTailedGreater, stats::Tail::TwoTailed}) {
          if (stats::to_string(t) == tail) options.tail = t, ok = true;
        }
        if (!ok) throw Error(ErrorCode::InvalidArgument, fmt::format("unknown tail '{}'", tail));
      }
      res.set_content(report_to_json(evaluate(input, catalog, options)), "application/json");
    });
  });

  if (cfg.static_dir) srv.set_mount_point("/", cfg.static_dir->string());
}

int Service::start() {
  const auto& cfg = jobs_->config();
  int port = cfg.port;
  if (port == 0) {
    port = server_->bind_to_any_port(cfg.host);
    if (port < 0) throw Error(ErrorCode::Io, fmt::format("cannot bind {}", cfg.host));
  } else if (!server_->bind_to_port(cfg.host, port)) {
    throw Error(ErrorCode::Io, fmt::format("cannot bind {}:{} (port in use?)", cfg.host, port));
  }
  thread_ = std::jthread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
  if (jobs_) jobs_->shutdown();
}

}  // namespace aihq
