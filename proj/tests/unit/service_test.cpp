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

#include <httplib.h>

#include <json.hpp>
#include <thread>

#include "aihq/service.hpp"
#include "test_support.hpp"

namespace aihq {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;
using testing::fixture;
using testing::slurp;

/// Chat-completions stub answering "3" after a fixed delay.
class SlowChatServer {
 public:
  explicit SlowChatServer(std::chrono::milliseconds delay) {
    server_.Post("/v1/chat/completions", [this, delay](const httplib::Request& req, httplib::Response& res) {
      std::this_thread::sleep_for(delay);
      ++requests_;
      last_auth_ = req.get_header_value("Authorization");
      res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"3"}}]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::jthread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~SlowChatServer() { server_.stop(); }
  [[nodiscard]] std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  [[nodiscard]] int requests() const { return requests_.load(); }

 private:
  httplib::Server server_;
  std::atomic<int> requests_{0};
  std::string last_auth_;
  int port_ = 0;
  std::jthread thread_;
};

BackendConfig mock_backend() { return load_backend_configs(fixture("backends.json")).front(); }

BackendConfig remote_backend(const std::string& url) {
  BackendConfig c;
  c.backend_id = "remote";
  c.kind = BackendKind::RemoteChat;
  c.endpoint_url = url;
  c.model_id = "stub-model";
  c.api_key_env = "AIHQ_TEST_SERVICE_KEY";
  c.rate_limit_per_minute = 0;
  c.backoff_seconds = 0.001;
  return c;
}

ServiceConfig service_config(const std::filesystem::path& root, std::vector<BackendConfig> backends) {
  ServiceConfig c;
  c.data_root = root;
  c.port = 0;
  c.backends = std::move(backends);
  c.default_catalog = load_catalog_csv(fixture("catalog.csv"));
  c.default_parallelism = 1;
  return c;
}

/// Fails the test if any file under `root` contains `needle`.
void expect_absent_everywhere(const std::filesystem::path& root, const std::string& needle) {
  std::size_t scanned = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    ++scanned;
    EXPECT_EQ(slurp(e.path()).find(needle), std::string::npos) << "credential found in " << e.path();
  }
  EXPECT_GT(scanned, 0u);
}

TEST(JobRequest, Parsing) {
  const auto r = parse_job_request(
      R"({"backend_id":"mock","decoding":{"temperature":0.2,"max_tokens":5},"parallelism":3,"retry_budget":1})");
  EXPECT_EQ(r.backend_id, "mock");
  EXPECT_EQ(r.decoding.max_tokens, 5);
  EXPECT_EQ(r.parallelism, 3u);
  EXPECT_EQ(r.retry_budget, 1);
  EXPECT_FALSE(r.api_key);
  EXPECT_AIHQ_ERROR(parse_job_request("{}"), InvalidArgument);
  EXPECT_AIHQ_ERROR(parse_job_request("[1]"), InvalidArgument);
  EXPECT_AIHQ_ERROR(parse_job_request(R"({"backend_id":"m","parallelism":0})"), InvalidArgument);
}

TEST(JobSnapshot, JsonRoundTripCarriesNoKey) {
  JobSnapshot s;
  s.job_id = std::string(32, 'a');
  s.status = JobStatus::Running;
  s.ephemeral_key = true;
  s.flag_counts["lenient"] = 2;
  const auto back = JobSnapshot::from_json(s.to_json());
  EXPECT_EQ(back.job_id, s.job_id);
  EXPECT_EQ(back.status, JobStatus::Running);
  EXPECT_TRUE(back.ephemeral_key);
  EXPECT_EQ(back.flag_counts.at("lenient"), 2u);
  EXPECT_EQ(json::parse(s.to_json())["config"].count("api_key"), 0u);
}

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status(ErrorCode::UnknownJob), 404);
  EXPECT_EQ(http_status(ErrorCode::NotReady), 409);
  EXPECT_EQ(http_status(ErrorCode::PayloadTooLarge), 413);
  EXPECT_EQ(http_status(ErrorCode::UnhealthyBackend), 422);
  EXPECT_EQ(http_status(ErrorCode::InvalidCsv), 400);
  EXPECT_EQ(http_status(ErrorCode::BackendUnavailable), 503);
}

TEST(JobManager, ValidationErrors) {
  testing::TempDir dir;
  auto cfg = service_config(dir.path(), {mock_backend()});
  cfg.max_upload_bytes = 4096;
  JobManager jobs(cfg);
  const auto csv = slurp(fixture("two_participants.csv"));
  JobRequest req;
  req.backend_id = "mock";
  EXPECT_AIHQ_ERROR(jobs.create_job(std::string(5000, 'x'), req), PayloadTooLarge);
  EXPECT_AIHQ_ERROR(jobs.create_job("participant_id,group\n", req), MissingColumn);
  req.backend_id = "nope";
  EXPECT_AIHQ_ERROR(jobs.create_job(csv, req), InvalidBackendConfig);
  req.backend_id = "mock";
  EXPECT_AIHQ_ERROR(jobs.create_job(csv, req, std::string_view("scenario_id,scenario_type,text\n1,accidental,x\n")),
                    ScenarioTypeMismatch);
  EXPECT_AIHQ_ERROR(jobs.status("0123"), UnknownJob);
  EXPECT_AIHQ_ERROR(jobs.status("../etc"), UnknownJob);
  EXPECT_TRUE(jobs.jobs().empty());
}

TEST(JobManager, UnhealthyBackendRejected) {
  testing::TempDir dir;
  ::unsetenv("AIHQ_TEST_SERVICE_KEY");
  JobManager jobs(service_config(dir.path(), {remote_backend("http://127.0.0.1:9/v1")}));
  JobRequest req;
  req.backend_id = "remote";
  EXPECT_AIHQ_ERROR(jobs.create_job(slurp(fixture("two_participants.csv")), req), UnhealthyBackend);
}

TEST(JobManager, RunsToDoneWithArtifacts) {
  testing::TempDir dir;
  JobManager jobs(service_config(dir.path(), {mock_backend()}));
  JobRequest req;
  req.backend_id = "mock";
  const auto id = jobs.create_job(slurp(fixture("two_participants.csv")), req);
  EXPECT_EQ(id.size(), 32u);
  ASSERT_TRUE(jobs.wait(id, 10s));
  const auto s = jobs.status(id);
  EXPECT_EQ(s.status, JobStatus::Done) << s.reason;
  EXPECT_EQ(s.completed_items, 20u);
  EXPECT_EQ(s.total_items, 20u);
  EXPECT_EQ(s.flag_counts.at("lenient"), 1u);
  EXPECT_TRUE(std::filesystem::exists(s.result_ref));
  EXPECT_EQ(jobs.results(id, "csv"), slurp(s.result_ref));
  EXPECT_TRUE(json::accept(jobs.results(id, "json")));
  EXPECT_AIHQ_ERROR(jobs.results(id, "xml"), InvalidArgument);
  for (const char* f : {"job.json", "input.csv", "catalog.csv", "progress.jsonl", "manifest.json", "merged.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "jobs" / id / f)) << f;
  }
}

TEST(JobManager, RestartResumesInterruptedJob) {
  testing::TempDir dir;
  ::setenv("AIHQ_TEST_SERVICE_KEY", "sk-service-env-secret", 1);
  std::string id;
  int first_calls = 0;
  {
    SlowChatServer slow(40ms);
    JobManager jobs(service_config(dir.path(), {remote_backend(slow.url())}));
    JobRequest req;
    req.backend_id = "remote";
    id = jobs.create_job(slurp(fixture("two_participants.csv")), req);
    const auto deadline = std::chrono::steady_clock::now() + 10s;
    while (jobs.status(id).completed_items < 5 && std::chrono::steady_clock::now() < deadline) {
      std::this_thread::sleep_for(5ms);
    }
    jobs.shutdown();
    EXPECT_EQ(jobs.status(id).status, JobStatus::Running);
    first_calls = slow.requests();
  }
  EXPECT_GE(first_calls, 5);
  EXPECT_LT(first_calls, 21);  // one health ping plus fewer than 20 items

  SlowChatServer fast(0ms);
  JobManager jobs(service_config(dir.path(), {remote_backend(fast.url())}));
  ASSERT_TRUE(jobs.wait(id, 10s));
  const auto s = jobs.status(id);
  EXPECT_EQ(s.status, JobStatus::Done) << s.reason;
  EXPECT_EQ(s.completed_items, 20u);
  // Items finished before the restart come from the job's cache.
  EXPECT_LE(fast.requests(), 20 - (first_calls - 1));
  const auto manifest = json::parse(slurp(dir.path() / "jobs" / id / "manifest.json"));
  EXPECT_EQ(manifest["cache_hits"].get<int>() + fast.requests(), 20);
  expect_absent_everywhere(dir.path(), "sk-service-env-secret");
}

TEST(JobManager, EphemeralKeyJobsFailOnRestart) {
  testing::TempDir dir;
  ::unsetenv("AIHQ_TEST_SERVICE_KEY");
  std::string id;
  {
    SlowChatServer slow(40ms);
    JobManager jobs(service_config(dir.path(), {remote_backend(slow.url())}));
    JobRequest req;
    req.backend_id = "remote";
    req.api_key = "sk-ephemeral-request-secret";
    id = jobs.create_job(slurp(fixture("two_participants.csv")), req);
    const auto deadline = std::chrono::steady_clock::now() + 10s;
    while (jobs.status(id).completed_items < 2 && std::chrono::steady_clock::now() < deadline) {
      std::this_thread::sleep_for(5ms);
    }
    jobs.shutdown();
  }
  JobManager jobs(service_config(dir.path(), {mock_backend()}));
  const auto s = jobs.status(id);
  EXPECT_EQ(s.status, JobStatus::Failed);
  EXPECT_EQ(s.reason, "interrupted");
  expect_absent_everywhere(dir.path(), "sk-ephemeral-request-secret");
}

TEST(JobManager, UnreadableRecordBecomesFailed) {
  testing::TempDir dir;
  const std::string id(32, 'b');
  std::filesystem::create_directories(dir.path() / "jobs" / id);
  testing::write_file(dir.path() / "jobs" / id / "job.json", "{not json");
  JobManager jobs(service_config(dir.path(), {mock_backend()}));
  EXPECT_EQ(jobs.status(id).status, JobStatus::Failed);
  EXPECT_EQ(jobs.status(id).reason, "unreadable job record");
}

class HttpFixture : public ::testing::Test {
 protected:
  void start(std::vector<BackendConfig> backends) {
    auto cfg = service_config(dir_.path(), std::move(backends));
    cfg.max_upload_bytes = 64 * 1024;
    service_ = std::make_unique<Service>(cfg);
    port_ = service_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    if (service_) service_->stop();
  }
  httplib::Result submit(const std::string& csv, const std::string& config) {
    httplib::MultipartFormDataItems items{{"file", csv, "data.csv", "text/csv"},
                                          {"config", config, "", "application/json"}};
    return client_->Post("/api/jobs", items);
  }
  testing::TempDir dir_;
  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(HttpFixture, JobLifecycle) {
  start({mock_backend()});
  auto health = client_->Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(json::parse(health->body)["status"], "ok");
  auto backends = client_->Get("/api/backends");
  ASSERT_TRUE(backends);
  EXPECT_NE(backends->body.find("\"mock\""), std::string::npos);

  auto res = submit(slurp(fixture("two_participants.csv")), R"({"backend_id":"mock"})");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  const std::string id = json::parse(res->body)["job_id"];

  std::size_t last = 0;
  std::string status;
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  while (std::chrono::steady_clock::now() < deadline) {
    auto s = client_->Get("/api/jobs/" + id);
    ASSERT_TRUE(s);
    ASSERT_EQ(s->status, 200);
    const auto j = json::parse(s->body);
    const auto done = j["completed_items"].get<std::size_t>();
    EXPECT_GE(done, last);
    last = done;
    status = j["status"];
    if (status == "Done" || status == "Failed") break;
    std::this_thread::sleep_for(5ms);
  }
  ASSERT_EQ(status, "Done");
  auto csv = client_->Get("/api/jobs/" + id + "/results?format=csv");
  ASSERT_TRUE(csv);
  EXPECT_EQ(csv->status, 200);
  EXPECT_EQ(csv->body.rfind("participant_id,group,scenario_id", 0), 0u);
  auto js = client_->Get("/api/jobs/" + id + "/results?format=json");
  ASSERT_TRUE(js);
  EXPECT_EQ(json::parse(js->body)["items"].size(), 20u);
}

TEST_F(HttpFixture, ErrorResponses) {
  start({mock_backend()});
  auto unknown = client_->Get("/api/jobs/" + std::string(32, 'f'));
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
  EXPECT_EQ(json::parse(unknown->body)["code"], "UnknownJob");

  auto bad = submit("participant_id,group\nP,TBI\n", R"({"backend_id":"mock"})");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto j = json::parse(bad->body);
  EXPECT_EQ(j["code"], "InvalidCsv");
  EXPECT_EQ(j["detail"], "MissingColumn");

  auto big = submit(std::string(100 * 1024, 'x'), R"({"backend_id":"mock"})");
  ASSERT_TRUE(big);
  EXPECT_EQ(big->status, 413);
  EXPECT_FALSE(big->body.empty());

  auto no_backend = submit(slurp(fixture("two_participants.csv")), R"({"backend_id":"ghost"})");
  ASSERT_TRUE(no_backend);
  EXPECT_EQ(no_backend->status, 400);
  EXPECT_EQ(json::parse(no_backend->body)["code"], "InvalidBackendConfig");
}

TEST_F(HttpFixture, NotReadyWhileRunning) {
  SlowChatServer slow(30ms);
  ::setenv("AIHQ_TEST_SERVICE_KEY", "k", 1);
  start({remote_backend(slow.url())});
  auto res = submit(slurp(fixture("two_participants.csv")), R"({"backend_id":"remote"})");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  const std::string id = json::parse(res->body)["job_id"];
  auto early = client_->Get("/api/jobs/" + id + "/results?format=csv");
  ASSERT_TRUE(early);
  EXPECT_EQ(early->status, 409);
  EXPECT_EQ(json::parse(early->body)["code"], "NotReady");
}

TEST_F(HttpFixture, RequestKeyNeverPersisted) {
  SlowChatServer stub(0ms);
  ::unsetenv("AIHQ_TEST_SERVICE_KEY");
  start({remote_backend(stub.url())});
  const std::string secret = "sk-http-upload-secret-0123456789";
  auto res = submit(slurp(fixture("two_participants.csv")),
                    json{{"backend_id", "remote"}, {"api_key", secret}}.dump());
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  const std::string id = json::parse(res->body)["job_id"];
  ASSERT_TRUE(service_->jobs().wait(id, 10s));
  EXPECT_EQ(service_->jobs().status(id).status, JobStatus::Done);
  auto s = client_->Get("/api/jobs/" + id);
  EXPECT_EQ(s->body.find(secret), std::string::npos);
  expect_absent_everywhere(dir_.path(), secret);
}

TEST_F(HttpFixture, EvaluateEndpoint) {
  start({mock_backend()});
  auto& jobs = service_->jobs();
  JobRequest req;
  req.backend_id = "mock";
  const auto id = jobs.create_job(slurp(fixture("two_participants.csv")), req);
  ASSERT_TRUE(jobs.wait(id, 10s));
  const auto merged = slurp(dir_.path() / "jobs" / id / "merged.csv");
  httplib::MultipartFormDataItems items{{"file", merged, "merged.csv", "text/csv"},
                                        {"options", R"({"method":"student","tail":"two-sided"})", "", ""}};
  auto res = client_->Post("/api/evaluate", items);
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto j = json::parse(res->body);
  EXPECT_EQ(j["participants"], 2);
  EXPECT_EQ(j["human_groups"]["method"], "student");
}

TEST(Service, BusyPortIsAnIoError) {
  testing::TempDir a;
  testing::TempDir b;
  Service first(service_config(a.path(), {mock_backend()}));
  const int port = first.start();
  auto cfg = service_config(b.path(), {mock_backend()});
  cfg.port = port;
  Service second(cfg);
  EXPECT_AIHQ_ERROR(second.start(), Io);
  first.stop();
}

}  // namespace
}  // namespace aihq
