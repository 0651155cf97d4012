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

#include "aihq/backend.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <set>
#include <thread>

#include "aihq/csv.hpp"
#include "aihq/strings.hpp"

namespace aihq {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(BackendKind k) noexcept {
  switch (k) {
    case BackendKind::RemoteChat: return "remote_chat";
    case BackendKind::MockTable: return "mock_table";
    case BackendKind::MockScript: return "mock_script";
  }
  return "?";
}

std::optional<BackendKind> parse_backend_kind(std::string_view s) noexcept {
  for (auto k : {BackendKind::RemoteChat, BackendKind::MockTable, BackendKind::MockScript}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::InvalidBackendConfig, message);
}

BackendConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) config_error("backend config must be a JSON object");
  static const std::set<std::string> kKnown{"backend_id",          "kind",           "endpoint_url",
                                            "model_id",            "api_key_env",    "fixture",
                                            "rate_limit_per_minute", "timeout_seconds", "retry_budget",
                                            "backoff_seconds"};
  for (const auto& [key, value] : j.items()) {
    if (key == "api_key" || key == "apiKey") {
      config_error("API keys are read from environment variables only; use \"api_key_env\"");
    }
    if (!kKnown.contains(key)) config_error("unknown backend config field '" + key + "'");
  }

  BackendConfig c;
  try {
    c.backend_id = j.at("backend_id").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    auto parsed = parse_backend_kind(kind);
    if (!parsed) config_error("unknown backend kind '" + kind + "'");
    c.kind = *parsed;
    if (j.contains("endpoint_url")) c.endpoint_url = j["endpoint_url"].get<std::string>();
    if (j.contains("model_id")) c.model_id = j["model_id"].get<std::string>();
    if (!j.contains("api_key_env")) {
      if (c.kind == BackendKind::RemoteChat) c.api_key_env = std::string(kDefaultApiKeyEnv);
    } else if (!j["api_key_env"].is_null()) {
      c.api_key_env = j["api_key_env"].get<std::string>();
    }
    if (j.contains("fixture")) {
      std::filesystem::path fixture = j["fixture"].get<std::string>();
      c.fixture = fixture.is_relative() && !base_dir.empty() ? base_dir / fixture : fixture;
    }
    if (j.contains("rate_limit_per_minute")) c.rate_limit_per_minute = j["rate_limit_per_minute"].get<double>();
    if (j.contains("timeout_seconds")) c.timeout_seconds = j["timeout_seconds"].get<double>();
    if (j.contains("retry_budget")) c.retry_budget = j["retry_budget"].get<int>();
    if (j.contains("backoff_seconds")) c.backoff_seconds = j["backoff_seconds"].get<double>();
  } catch (const json::exception& e) {
    config_error(std::string("malformed backend config: ") + e.what());
  }

  if (c.backend_id.empty()) config_error("backend_id must be non-empty");
  if (c.retry_budget < 0) config_error("retry_budget must be >= 0");
  if (!(c.timeout_seconds > 0.0)) config_error("timeout_seconds must be > 0");
  if (c.kind == BackendKind::RemoteChat) {
    if (c.endpoint_url.empty()) config_error("remote_chat backend '" + c.backend_id + "' needs endpoint_url");
    if (c.model_id.empty()) config_error("remote_chat backend '" + c.backend_id + "' needs model_id");
  } else if (c.fixture.empty()) {
    config_error("mock backend '" + c.backend_id + "' needs a fixture path");
  }
  return c;
}

}  // namespace

BackendConfig parse_backend_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("backend config is not valid JSON: ") + e.what());
  }
  return config_from_json(j, base_dir);
}

std::vector<BackendConfig> load_backend_configs(const std::filesystem::path& path) {
  const auto text = csv::read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error(path.string() + " is not valid JSON: " + e.what());
  }
  const auto base = path.parent_path();
  std::vector<BackendConfig> configs;
  if (j.is_object() && j.contains("backends")) {
    if (!j["backends"].is_array()) config_error("\"backends\" must be an array");
    for (const auto& entry : j["backends"]) configs.push_back(config_from_json(entry, base));
  } else {
    configs.push_back(config_from_json(j, base));
  }
  if (configs.empty()) config_error(path.string() + " defines no backends");
  std::set<std::string> ids;
  for (const auto& c : configs) {
    if (!ids.insert(c.backend_id).second) config_error("duplicate backend_id '" + c.backend_id + "'");
  }
  return configs;
}

std::string backend_summary_json(const BackendConfig& c) {
  ordered_json j;
  j["backend_id"] = c.backend_id;
  j["kind"] = to_string(c.kind);
  j["model_id"] = c.model_id;
  if (c.kind == BackendKind::RemoteChat) j["endpoint_url"] = c.endpoint_url;
  j["api_key_env"] = c.api_key_env ? json(*c.api_key_env) : json(nullptr);
  j["rate_limit_per_minute"] = c.rate_limit_per_minute;
  j["retry_budget"] = c.retry_budget;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Envelope

std::string RequestEnvelope::to_json() const {
  ordered_json j;
  j["model"] = model_id;
  j["messages"] = ordered_json::array({
      ordered_json{{"role", "system"}, {"content", system_text}},
      ordered_json{{"role", "user"}, {"content", user_text}},
  });
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

RequestEnvelope make_envelope(const PromptBundle& bundle, std::string_view model_id) {
  return {bundle.system_text, bundle.user_text, std::string(model_id), bundle.decoding.temperature,
          bundle.decoding.max_tokens};
}

// ---------------------------------------------------------------------------
// Rate limiting

RateLimiter::RateLimiter(std::size_t max_requests, Clock::duration window)
    : max_requests_(max_requests), window_(window) {}

RateLimiter RateLimiter::per_minute(double requests_per_minute) {
  if (!(requests_per_minute > 0.0)) return RateLimiter(0, Clock::duration::zero());
  const auto per_window = static_cast<std::size_t>(std::max(1.0, std::floor(requests_per_minute)));
  return RateLimiter(per_window, std::chrono::minutes(1));
}

void RateLimiter::acquire() {
  if (max_requests_ == 0) return;
  std::unique_lock lock(mutex_);
  for (;;) {
    const auto now = Clock::now();
    while (!recent_.empty() && recent_.front() + window_ <= now) recent_.pop_front();
    if (recent_.size() < max_requests_) {
      recent_.push_back(now);
      return;
    }
    const auto wake = recent_.front() + window_;
    lock.unlock();
    std::this_thread::sleep_until(wake);
    lock.lock();
  }
}

// ---------------------------------------------------------------------------
// Backends

std::string Backend::complete(const PromptBundle& bundle) {
  calls_.fetch_add(1);
  return do_complete(bundle);
}

namespace {

std::map<std::string, std::string> load_table(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::InvalidBackendConfig, "fixture not found: " + path.string());
  }
  const auto table = csv::read_file(path);
  const auto digest_col = table.column("digest");
  const auto output_col = table.column("output");
  if (!digest_col || !output_col) {
    throw Error(ErrorCode::InvalidBackendConfig, path.string() + ": mock table needs digest,output columns");
  }
  std::map<std::string, std::string> out;
  for (const auto& row : table.rows) out[std::string(trim(row[*digest_col]))] = row[*output_col];
  return out;
}

std::vector<std::string> load_transcript(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::InvalidBackendConfig, "fixture not found: " + path.string());
  }
  const auto text = csv::read_text_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

}  // namespace

MockTableBackend::MockTableBackend(BackendConfig config, std::map<std::string, std::string> table)
    : Backend(std::move(config)), table_(std::move(table)) {}

MockTableBackend::MockTableBackend(BackendConfig config)
    : Backend(std::move(config)), table_(load_table(this->config().fixture)) {}

std::string MockTableBackend::do_complete(const PromptBundle& bundle) {
  const auto digest = prompt_digest(bundle);
  if (auto it = table_.find(digest); it != table_.end()) return it->second;
  if (auto it = table_.find("*"); it != table_.end()) return it->second;
  throw Error(ErrorCode::MalformedResponse, "mock table has no entry for prompt digest " + digest);
}

MockScriptBackend::MockScriptBackend(BackendConfig config, std::vector<std::string> transcript)
    : Backend(std::move(config)), transcript_(std::move(transcript)) {}

MockScriptBackend::MockScriptBackend(BackendConfig config)
    : Backend(std::move(config)), transcript_(load_transcript(this->config().fixture)) {}

std::string MockScriptBackend::do_complete(const PromptBundle&) {
  std::lock_guard lock(mutex_);
  if (position_ >= transcript_.size()) {
    throw Error(ErrorCode::BackendUnavailable, "mock transcript exhausted after " +
                                                   std::to_string(transcript_.size()) + " replies");
  }
  return transcript_[position_++];
}

// ---------------------------------------------------------------------------
// Remote chat

struct RemoteChatBackend::Attempt {
  std::optional<std::string> content;
  ErrorCode code = ErrorCode::BackendUnavailable;
  bool retryable = false;
  std::string message;
};

namespace {

std::optional<std::string> resolve_key(const BackendConfig& config, std::optional<std::string> override_key) {
  if (override_key) return override_key;
  if (!config.api_key_env) return std::string{};
  if (const char* v = std::getenv(config.api_key_env->c_str()); v != nullptr && *v != '\0') {
    return std::string(v);
  }
  return std::nullopt;
}

void split_endpoint(const std::string& url, std::string& scheme_host_port, std::string& path) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidBackendConfig, "endpoint_url must start with http:// or https://");
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::InvalidBackendConfig, "unsupported endpoint scheme '" + scheme + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port = url.substr(0, path_start);
  path = path_start == std::string::npos ? std::string{} : url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";
}

}  // namespace

RemoteChatBackend::RemoteChatBackend(BackendConfig config, std::optional<std::string> api_key)
    : Backend(std::move(config)), limiter_(RateLimiter::per_minute(this->config().rate_limit_per_minute)) {
  split_endpoint(this->config().endpoint_url, scheme_host_port_, path_);
  auto key = resolve_key(this->config(), std::move(api_key));
  if (!key) {
    throw Error(ErrorCode::AuthFailure, "credential unavailable: environment variable " +
                                            *this->config().api_key_env + " is not set");
  }
  api_key_ = std::move(*key);
}

RemoteChatBackend::~RemoteChatBackend() {
  // Scrub the credential before the allocation is released.
  std::fill(api_key_.begin(), api_key_.end(), '\0');
}

RemoteChatBackend::Attempt RemoteChatBackend::send_once(const std::string& body) {
  Attempt attempt;
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(config().timeout_seconds);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client.set_connection_timeout(usec);
  client.set_read_timeout(usec);
  client.set_write_timeout(usec);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) {
    const auto err = res.error();
    attempt.retryable = true;
    attempt.code = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                    err == httplib::Error::Write)
                       ? ErrorCode::Timeout
                       : ErrorCode::BackendUnavailable;
    attempt.message = "transport error: " + httplib::to_string(err);
    return attempt;
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    attempt.code = ErrorCode::AuthFailure;
    attempt.message = "credential rejected (HTTP " + std::to_string(status) + ")";
    return attempt;
  }
  if (status == 429) {
    attempt.code = ErrorCode::RateLimited;
    attempt.retryable = true;
    attempt.message = "server throttled the request (HTTP 429)";
    return attempt;
  }
  if (status == 408 || status >= 500) {
    attempt.code = status == 408 ? ErrorCode::Timeout : ErrorCode::BackendUnavailable;
    attempt.retryable = true;
    attempt.message = "server error (HTTP " + std::to_string(status) + ")";
    return attempt;
  }
  if (status < 200 || status >= 300) {
    attempt.code = ErrorCode::BackendUnavailable;
    attempt.message = "unexpected HTTP " + std::to_string(status);
    return attempt;
  }
  try {
    const auto j = json::parse(res->body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw std::runtime_error("content is not a string");
    attempt.content = content.get<std::string>();
  } catch (const std::exception& e) {
    attempt.code = ErrorCode::MalformedResponse;
    attempt.message = std::string("malformed chat completion response: ") + e.what();
  }
  return attempt;
}

std::string RemoteChatBackend::do_complete(const PromptBundle& bundle) {
  const auto body = make_envelope(bundle, config().model_id).to_json();
  auto delay = std::chrono::duration<double>(config().backoff_seconds);
  Attempt last;
  for (int attempt = 0; attempt <= config().retry_budget; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    limiter_.acquire();
    last = send_once(body);
    if (last.content) return *last.content;
    if (!last.retryable) break;
  }
  throw Error(last.code, config().backend_id + ": " + last.message);
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config, std::optional<std::string> api_key) {
  switch (config.kind) {
    case BackendKind::RemoteChat: return std::make_unique<RemoteChatBackend>(config, std::move(api_key));
    case BackendKind::MockTable: return std::make_unique<MockTableBackend>(config);
    case BackendKind::MockScript: return std::make_unique<MockScriptBackend>(config);
  }
  throw Error(ErrorCode::InvalidBackendConfig, "unknown backend kind");
}

std::string complete(const PromptBundle& bundle, const BackendConfig& config) {
  return make_backend(config)->complete(bundle);
}

HealthReport validate_backend(const BackendConfig& config, const std::optional<std::string>& api_key) {
  if (config.kind != BackendKind::RemoteChat) {
    if (config.fixture.empty() || !std::filesystem::exists(config.fixture)) {
      return {false, "fixture not found"};
    }
    try {
      make_backend(config);
    } catch (const std::exception& e) {
      return {false, std::string("fixture unreadable: ") + e.what()};
    }
    return {true, "ok"};
  }

  if (config.endpoint_url.empty() || config.model_id.empty()) {
    return {false, "endpoint_url and model_id are required"};
  }
  if (!resolve_key(config, api_key)) return {false, "credential unavailable"};
  try {
    auto ping_config = config;
    ping_config.retry_budget = 0;
    RemoteChatBackend backend(ping_config, api_key);
    PromptBundle ping;
    ping.system_text = kSystemPrompt;
    ping.user_text = "ping";
    ping.decoding.max_tokens = 1;
    backend.complete(ping);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AuthFailure) return {false, "credential rejected"};
    return {false, std::string("endpoint unhealthy: ") + std::string(to_string(e.code()))};
  } catch (const std::exception& e) {
    return {false, std::string("endpoint unhealthy: ") + e.what()};
  }
  return {true, "ok"};
}

}  // namespace aihq
