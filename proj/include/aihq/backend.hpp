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

#include <atomic>
#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aihq/error.hpp"
#include "aihq/prompts.hpp"

namespace aihq {

enum class BackendKind { RemoteChat, MockTable, MockScript };

std::string_view to_string(BackendKind k) noexcept;
std::optional<BackendKind> parse_backend_kind(std::string_view s) noexcept;

inline constexpr std::string_view kDefaultApiKeyEnv = "AIHQ_API_KEY";

/// API keys never live in a config; `api_key_env` names the environment
/// variable that holds one. Remote backends default to AIHQ_API_KEY; an
/// explicit null means the endpoint takes no credential.
struct BackendConfig {
  std::string backend_id;
  BackendKind kind = BackendKind::MockTable;
  std::string endpoint_url;
  std::string model_id = "mock";
  std::optional<std::string> api_key_env;
  std::filesystem::path fixture;
  double rate_limit_per_minute = 60.0;
  double timeout_seconds = 30.0;
  int retry_budget = 2;
  /// First transport back-off; doubles on every retry.
  double backoff_seconds = 0.5;
};

/// JSON object form; relative fixture paths resolve against `base_dir`.
/// Throws InvalidBackendConfig, including when an inline "api_key" is present.
BackendConfig parse_backend_config(std::string_view json_text,
                                   const std::filesystem::path& base_dir = {});
/// Accepts a single backend object or {"backends": [...]}.
std::vector<BackendConfig> load_backend_configs(const std::filesystem::path& path);
/// Secret-free JSON rendering.
std::string backend_summary_json(const BackendConfig& config);

struct RequestEnvelope {
  std::string system_text;
  std::string user_text;
  std::string model_id;
  double temperature = 0.0;
  int max_tokens = 10;

  /// Body of POST {endpoint}/chat/completions, keys in a fixed order.
  [[nodiscard]] std::string to_json() const;
};

RequestEnvelope make_envelope(const PromptBundle& bundle, std::string_view model_id);

/// Sliding-window limiter: no window of `window` length ever contains more
/// than `max_requests` acquisitions. Shared by all workers of a backend.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  RateLimiter(std::size_t max_requests, Clock::duration window);
  /// requests_per_minute <= 0 disables limiting.
  static RateLimiter per_minute(double requests_per_minute);

  void acquire();

 private:
  std::size_t max_requests_;
  Clock::duration window_;
  std::mutex mutex_;
  std::deque<Clock::time_point> recent_;
};

class Backend {
 public:
  explicit Backend(BackendConfig config) : config_(std::move(config)) {}
  virtual ~Backend() = default;
  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;

  [[nodiscard]] const BackendConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::uint64_t calls() const noexcept { return calls_.load(); }

  /// Returns the first text candidate. Errors: AuthFailure, RateLimited,
  /// Timeout, MalformedResponse, BackendUnavailable.
  std::string complete(const PromptBundle& bundle);

 protected:
  virtual std::string do_complete(const PromptBundle& bundle) = 0;

 private:
  BackendConfig config_;
  std::atomic<std::uint64_t> calls_{0};
};

/// Replies by prompt digest; a "*" row is the fallback for unknown digests.
class MockTableBackend final : public Backend {
 public:
  MockTableBackend(BackendConfig config, std::map<std::string, std::string> table);
  /// Loads `digest,output` rows from config.fixture.
  explicit MockTableBackend(BackendConfig config);

 protected:
  std::string do_complete(const PromptBundle& bundle) override;

 private:
  std::map<std::string, std::string> table_;
};

/// Replays a transcript line by line, whatever the prompt.
class MockScriptBackend final : public Backend {
 public:
  MockScriptBackend(BackendConfig config, std::vector<std::string> transcript);
  explicit MockScriptBackend(BackendConfig config);

 protected:
  std::string do_complete(const PromptBundle& bundle) override;

 private:
  std::mutex mutex_;
  std::vector<std::string> transcript_;
  std::size_t position_ = 0;
};

/// OpenAI-compatible chat completions over HTTP(S) with bearer auth.
class RemoteChatBackend final : public Backend {
 public:
  /// The key comes from `api_key` when given, else from the environment
  /// variable named by config.api_key_env. Throws AuthFailure when a key is
  /// required but unavailable.
  RemoteChatBackend(BackendConfig config, std::optional<std::string> api_key = std::nullopt);
  ~RemoteChatBackend() override;

 protected:
  std::string do_complete(const PromptBundle& bundle) override;

 private:
  struct Attempt;
  Attempt send_once(const std::string& body);

  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
  RateLimiter limiter_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& config,
                                      std::optional<std::string> api_key = std::nullopt);

/// One-shot convenience around make_backend.
std::string complete(const PromptBundle& bundle, const BackendConfig& config);

struct HealthReport {
  bool healthy = false;
  std::string reason;
};

/// Never throws. Remote backends get a one-token ping; mocks a fixture check.
HealthReport validate_backend(const BackendConfig& config,
                              const std::optional<std::string>& api_key = std::nullopt);

}  // namespace aihq
