#include <gtest/gtest.h>

#include <chrono>
#include <httplib.h>
#include <json.hpp>
#include <filesystem>
#include <fstream>
#include <thread>

#include "corpus_support.hpp"
#include "elfe/backend.hpp"
#include "elfe/pipeline.hpp"
#include "elfe/service.hpp"

namespace elfe {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class ServiceTest : public ::testing::Test {
 protected:
  void start(ServiceConfig config = {}) {
    config.port = 0;
    config.corpus_dir = ELFE_CORPUS_DIR;
    service_ = std::make_unique<Service>(config);
    port_ = service_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(30);
  }

  void TearDown() override {
    client_.reset();
    service_.reset();
  }

  std::string submit(const json& body) {
    auto res = client_->Post("/api/verify", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 202) << res->body;
    return json::parse(res->body)["id"];
  }

  json wait_done(const std::string& id) {
    for (int i = 0; i < 600; ++i) {
      auto res = client_->Get("/api/jobs/" + id);
      EXPECT_EQ(res->status, 200);
      json j = json::parse(res->body);
      if (j["state"] == "done" || j["state"] == "error") return j;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    ADD_FAILURE() << "job did not finish";
    return {};
  }

  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(ServiceTest, ReportMatchesLibraryReport) {
  start();
  const std::string text = testing::corpus_text("line_extension.elfe");
  std::string id = submit({{"text", text}, {"options", {{"deterministic", true}}}});
  json status = wait_done(id);
  EXPECT_EQ(status["state"], "done");
  EXPECT_EQ(status["status"], "verified");
  auto res = client_->Get("/api/jobs/" + id + "/report");
  ASSERT_EQ(res->status, 200);
  LibraryStore store;
  VerifyOptions options;
  options.deterministic = true;
  EXPECT_EQ(res->body, report_json(verify_text(text, store, options)));
}

TEST_F(ServiceTest, FrontEndErrorIsReportedWithLocation) {
  start();
  std::string id = submit({{"text", "Lemma L: p.\nProof:\n  Note q:\n"}});
  json status = wait_done(id);
  EXPECT_EQ(status["state"], "error");
  ASSERT_FALSE(status["diagnostics"].empty());
  EXPECT_EQ(status["diagnostics"][0]["line"], 3);
  auto res = client_->Get("/api/jobs/" + id + "/report");
  EXPECT_EQ(res->status, 422);
}

TEST_F(ServiceTest, InlineLibraries) {
  start();
  std::string id = submit({{"text", "Include mine.\nLemma L: q(a).\nProof:\n  Hence q(a) by A.\nqed.\n"},
                           {"libraries", {{"mine", "Axiom A: for all x. q(x)."}}},
                           {"options", {{"deterministic", true}}}});
  EXPECT_EQ(wait_done(id)["status"], "verified");
}

TEST_F(ServiceTest, BadRequests) {
  start();
  EXPECT_EQ(client_->Post("/api/verify", "{nope", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/verify", "[1]", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/verify", R"({"text": 3})", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/verify", R"({"text": "x", "libraries": []})", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/api/verify", R"({"text": "x", "options": {"timeout": -1}})", "application/json")->status,
            400);
  EXPECT_EQ(client_->Post("/api/verify", R"({"text": "x", "options": {"backends": ["zz"]}})", "application/json")
                ->status,
            400);
  EXPECT_EQ(client_->Get("/api/jobs/nosuch")->status, 404);
  EXPECT_EQ(client_->Get("/api/jobs/nosuch/report")->status, 404);
  EXPECT_EQ(client_->Get("/api/examples/Nope")->status, 404);
  EXPECT_EQ(client_->Get("/api/libraries/nope")->status, 404);
}

TEST_F(ServiceTest, OversizedBody) {
  ServiceConfig config;
  config.max_body = 1024;
  start(config);
  json body{{"text", std::string(4096, 'a')}};
  EXPECT_EQ(client_->Post("/api/verify", body.dump(), "application/json")->status, 413);
}

TEST_F(ServiceTest, ReportOfUnfinishedJobIsConflict) {
  ServiceConfig config;
  config.runners = 1;
  start(config);
  // The first job holds the only runner long enough for the second to wait.
  std::string slow = submit({{"text", testing::corpus_text("midpoint_extension.elfe")},
                             {"options", {{"timeout", 1.0}, {"jobs", 1}}}});
  std::string queued = submit({{"text", testing::corpus_text("line_extension.elfe")}});
  auto res = client_->Get("/api/jobs/" + queued + "/report");
  EXPECT_EQ(res->status, 409);
  json state = json::parse(client_->Get("/api/jobs/" + queued)->body);
  EXPECT_EQ(state["state"], "queued");
  json running = json::parse(client_->Get("/api/jobs/" + slow)->body);
  EXPECT_EQ(running["status"], "pending");
}

TEST_F(ServiceTest, ExamplesAndLibraries) {
  start();
  json examples = json::parse(client_->Get("/api/examples")->body);
  ASSERT_GE(examples.size(), 4u);
  EXPECT_EQ(examples[0]["name"], "Line Extension");
  auto one = client_->Get("/api/examples/Midpoint%20Extension");
  ASSERT_EQ(one->status, 200);
  EXPECT_EQ(json::parse(one->body)["text"], testing::corpus_text("midpoint_extension.elfe"));
  json libs = json::parse(client_->Get("/api/libraries")->body);
  bool geometry = false;
  for (const auto& l : libs) geometry |= l["name"] == "geometry";
  EXPECT_TRUE(geometry);
  json lib = json::parse(client_->Get("/api/libraries/geometry")->body);
  EXPECT_EQ(lib["notations"], 4);
  EXPECT_EQ(lib["declarations"].size(), 14u);
}

TEST(ServiceEnvironment, Overrides) {
  ::setenv("PORT", "9123", 1);
  ::setenv("TIMEOUT_S", "2.5", 1);
  ::setenv("LIB_DIR", "/tmp/libs", 1);
  ServiceConfig c = apply_environment({});
  EXPECT_EQ(c.port, 9123);
  EXPECT_EQ(c.timeout_s, 2.5);
  ASSERT_FALSE(c.lib_paths.empty());
  EXPECT_EQ(c.lib_paths[0], "/tmp/libs");
  ::setenv("PORT", "http", 1);
  EXPECT_THROW(apply_environment({}), std::invalid_argument);
  ::setenv("PORT", "70000", 1);
  EXPECT_THROW(apply_environment({}), std::invalid_argument);
  ::unsetenv("PORT");
  ::setenv("TIMEOUT_S", "0", 1);
  EXPECT_THROW(apply_environment({}), std::invalid_argument);
  ::unsetenv("TIMEOUT_S");
  ::unsetenv("LIB_DIR");
  EXPECT_EQ(apply_environment({}).port, ServiceConfig{}.port);
}

// ------------------------------------------------------------- command line

ProcessResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), ELFE_CLI_PATH);
  return run_process(args, 120);
}

std::string corpus_path(const char* file) { return std::string(ELFE_CORPUS_DIR "/") + file; }

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"verify", corpus_path("line_extension.elfe")}).exit_code, 0);
  EXPECT_EQ(cli({"verify", corpus_path("broken.elfe")}).exit_code, 1);
  EXPECT_EQ(cli({"verify", "/nonexistent/missing.elfe"}).exit_code, 3);
  EXPECT_EQ(cli({"verify"}).exit_code, 3);
  EXPECT_EQ(cli({"verify", corpus_path("line_extension.elfe"), "--backend", "zz"}).exit_code, 3);
}

TEST(Cli, HumanOutput) {
  auto r = cli({"verify", corpus_path("broken.elfe"), "--deterministic"});
  EXPECT_NE(r.output.find("ASSUMED BetwIdent (axiom, line 2)"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("CHECK Broken/6/1 line 6 ... FAILED"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("countermodel (found by modelfinder)"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("status: failed"), std::string::npos) << r.output;
}

TEST(Cli, SyntaxErrorNamesTheFile) {
  fs::path file = fs::temp_directory_path() / "elfe-cli-bad.elfe";
  std::ofstream(file) << "Axiom A: p\n";
  auto r = cli({"verify", file.string()});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.output.find(file.string() + ":"), std::string::npos) << r.output;
  fs::remove(file);
}

TEST(Cli, JsonEqualsServiceReport) {
  ServiceConfig config;
  config.port = 0;
  config.corpus_dir = ELFE_CORPUS_DIR;
  Service service(config);
  httplib::Client client("127.0.0.1", service.start());
  for (const char* file : {"line_extension.elfe", "broken.elfe"}) {
    auto r = cli({"verify", corpus_path(file), "--json", "--deterministic"});
    auto posted = client.Post("/api/verify",
                              json{{"text", testing::corpus_text(file)}, {"options", {{"deterministic", true}}}}.dump(),
                              "application/json");
    std::string id = json::parse(posted->body)["id"];
    std::string report;
    for (int i = 0; i < 600; ++i) {
      auto res = client.Get("/api/jobs/" + id + "/report");
      if (res->status == 200) {
        report = res->body;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    EXPECT_EQ(r.output, report) << file;
  }
}

}  // namespace
}  // namespace elfe
