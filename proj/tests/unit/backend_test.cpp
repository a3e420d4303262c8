#include <gtest/gtest.h>

#include <signal.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "elfe/backend.hpp"
#include "elfe/model.hpp"
#include "oracle.hpp"

namespace elfe {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

Term v(const char* n) { return Term::variable(n); }
Term c(const char* n) { return Term::constant(n); }
Formula P(const char* name, std::vector<Term> args = {}) { return Formula::predicate(name, std::move(args)); }

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct ScriptDir {
  fs::path path;
  ScriptDir() {
    path = fs::temp_directory_path() /
           (std::string("elfe-backend-") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path);
  }
  ~ScriptDir() { fs::remove_all(path); }
  std::string script(const std::string& name, const std::string& body) const {
    fs::path p = path / name;
    std::ofstream(p) << "#!/bin/sh\n" << body << "\n";
    fs::permissions(p, fs::perms::owner_all);
    return p.string();
  }
};

Obligation modus_ponens() {
  Obligation ob;
  ob.id = "T/1/1";
  ob.premises.push_back({"A", Formula::forall({"x"}, Formula::implication(P("p", {v("x")}), P("q", {v("x")}))),
                         false});
  ob.premises.push_back({"S1", P("p", {c("a")}), true});
  ob.goal = P("q", {c("a")});
  return ob;
}

Obligation between_symmetry() {
  Obligation ob;
  ob.id = "T/2/1";
  ob.goal = Formula::forall({"a", "b", "c"}, Formula::implication(P("between", {v("a"), v("b"), v("c")}),
                                                                  P("between", {v("c"), v("b"), v("a")})));
  return ob;
}

BackendConfig external(const std::string& name, const std::string& command, double timeout = 5) {
  return {name, BackendConfig::Kind::kExternalTptp, command, timeout, true};
}

// ------------------------------------------------------------- parsing

TEST(Szs, StatusLines) {
  EXPECT_EQ(parse_szs("% SZS status Theorem for x.p\n"), SzsStatus::kTheorem);
  EXPECT_EQ(parse_szs("# SZS status Unsatisfiable"), SzsStatus::kTheorem);
  EXPECT_EQ(parse_szs("SZS status ContradictoryAxioms"), SzsStatus::kTheorem);
  EXPECT_EQ(parse_szs("% SZS status CounterSatisfiable"), SzsStatus::kCounterSatisfiable);
  EXPECT_EQ(parse_szs("% SZS status Satisfiable"), SzsStatus::kCounterSatisfiable);
  EXPECT_EQ(parse_szs("% SZS status Timeout"), SzsStatus::kTimeout);
  EXPECT_EQ(parse_szs("% SZS status ResourceOut"), SzsStatus::kTimeout);
  EXPECT_EQ(parse_szs("% SZS status GaveUp"), SzsStatus::kUnknown);
  EXPECT_EQ(parse_szs("no status here"), SzsStatus::kUnknown);
  EXPECT_EQ(parse_szs("SZS status Theorem\nSZS status CounterSatisfiable"), SzsStatus::kTheorem);
}

TEST(Backends, FromSpec) {
  EXPECT_EQ(backend_from_spec("resolution").kind, BackendConfig::Kind::kBuiltinResolution);
  EXPECT_EQ(backend_from_spec("modelfinder").kind, BackendConfig::Kind::kBuiltinModelFinder);
  auto e = backend_from_spec("eprover", 7);
  EXPECT_EQ(e.kind, BackendConfig::Kind::kExternalTptp);
  EXPECT_EQ(e.timeout_s, 7);
  auto custom = backend_from_spec("mine=/opt/p -t {timeout} {file}");
  EXPECT_EQ(custom.name, "mine");
  EXPECT_EQ(custom.command, "/opt/p -t {timeout} {file}");
  EXPECT_THROW(backend_from_spec("nosuch"), std::invalid_argument);
  EXPECT_THROW(backend_from_spec("mine=prover"), std::invalid_argument);
  EXPECT_THROW(backend_from_spec("=x {file}"), std::invalid_argument);
  EXPECT_THROW(backend_from_spec("resolution", 0), std::invalid_argument);
  auto defaults = default_backends();
  ASSERT_EQ(defaults.size(), 2u);
  EXPECT_EQ(defaults[0].timeout_s, kDefaultTimeoutSeconds);
}

TEST(Backends, ExpandCommand) {
  EXPECT_EQ(expand_command("p --cpu={timeout}  -s {file} {file}x", "/t/a.p", 2.5),
            (std::vector<std::string>{"p", "--cpu=3", "-s", "/t/a.p", "/t/a.px"}));
  EXPECT_EQ(expand_command("p {timeout}", "f", 0.2), (std::vector<std::string>{"p", "1"}));
}

TEST(Backends, TptpFileName) {
  Obligation ob;
  ob.id = "Midpoint Extension/5/2";
  EXPECT_EQ(tptp_file_name(ob), "Midpoint_Extension_5_2.p");
}

// ------------------------------------------------------------- processes

TEST(Process, CapturesOutputAndExitCode) {
  auto r = run_process({"sh", "-c", "echo out; echo err >&2; exit 4"}, 5);
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_FALSE(r.timed_out);
  EXPECT_NE(r.output.find("out"), std::string::npos);
  EXPECT_NE(r.output.find("err"), std::string::npos);
}

TEST(Process, StdinIsClosed) {
  auto r = run_process({"sh", "-c", "cat; echo done"}, 5);
  EXPECT_FALSE(r.timed_out);
  EXPECT_NE(r.output.find("done"), std::string::npos);
}

TEST(Process, MissingBinary) {
  EXPECT_THROW(run_process({"elfe-no-such-prover"}, 1), BackendSpawnError);
  EXPECT_THROW(run_process({}, 1), BackendSpawnError);
}

bool process_gone(pid_t pid) {
  std::ifstream stat("/proc/" + std::to_string(pid) + "/stat");
  if (!stat) return true;
  std::string text((std::istreambuf_iterator<char>(stat)), {});
  auto close = text.rfind(')');
  return close != std::string::npos && close + 2 < text.size() && text[close + 2] == 'Z';
}

TEST(Process, TimeoutKillsTheWholeGroup) {
  ScriptDir dir;
  fs::path pidfile = dir.path / "child.pid";
  std::string script = dir.script("slow.sh", "sleep 30 &\necho $! > " + pidfile.string() + "\nwait");
  auto start = Clock::now();
  auto r = run_process({script}, 0.5);
  EXPECT_TRUE(r.timed_out);
  EXPECT_LT(seconds_since(start), 3.0);
  pid_t child = 0;
  std::ifstream(pidfile) >> child;
  ASSERT_GT(child, 0);
  for (int i = 0; i < 50 && !process_gone(child); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  EXPECT_TRUE(process_gone(child)) << "orphan " << child;
}

TEST(Process, CancelStopsEarly) {
  std::atomic<bool> cancel{false};
  std::thread trigger([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    cancel = true;
  });
  auto start = Clock::now();
  auto r = run_process({"sleep", "30"}, 20, &cancel);
  trigger.join();
  EXPECT_TRUE(r.cancelled);
  EXPECT_LT(seconds_since(start), 3.0);
}

// ------------------------------------------------------------- dispatch

TEST(Dispatch, BuiltinProves) {
  Verdict v = dispatch(modus_ponens(), default_backends(5));
  EXPECT_EQ(v.kind, Verdict::Kind::kProved);
  EXPECT_EQ(v.backend, "resolution");
}

TEST(Dispatch, BuiltinDisprovesWithVerifiedModel) {
  Obligation ob = between_symmetry();
  auto start = Clock::now();
  Verdict v = dispatch(ob, default_backends(5));
  EXPECT_LT(seconds_since(start), 1.0);
  ASSERT_EQ(v.kind, Verdict::Kind::kDisproved);
  ASSERT_TRUE(v.countermodel.has_value());
  EXPECT_EQ(v.countermodel->size, 2);
  EXPECT_TRUE(is_countermodel(*v.countermodel, ob.premise_formulas(), ob.goal));
}

TEST(Dispatch, NoEnabledBackend) {
  auto backends = default_backends();
  for (auto& b : backends) b.enabled = false;
  EXPECT_THROW(dispatch(modus_ponens(), backends), std::invalid_argument);
}

TEST(Dispatch, ExternalTheoremSeesTheProblemFile) {
  ScriptDir dir;
  std::string prover = dir.script(
      "fake.sh", "grep -q 'fof(goal, conjecture' \"$1\" && echo '% SZS status Theorem' || echo nothing");
  std::vector<BackendConfig> backends{external("fake", prover + " {file}")};
  Verdict v = dispatch(modus_ponens(), backends);
  EXPECT_EQ(v.kind, Verdict::Kind::kProved);
  EXPECT_EQ(v.backend, "fake");
}

TEST(Dispatch, ExternalMissingBinaryIsUnknownError) {
  std::vector<BackendConfig> backends{external("ghost", "elfe-no-such-prover {file}")};
  Verdict v = dispatch(modus_ponens(), backends);
  EXPECT_EQ(v.kind, Verdict::Kind::kUnknown);
  EXPECT_EQ(v.reason, Verdict::Reason::kError);
  EXPECT_NE(v.details.find("ghost"), std::string::npos);
}

TEST(Dispatch, ExternalWithoutStatusIsUnknownError) {
  ScriptDir dir;
  std::vector<BackendConfig> backends{external("mute", dir.script("mute.sh", "exit 0") + " {file}")};
  Verdict v = dispatch(modus_ponens(), backends);
  EXPECT_EQ(v.kind, Verdict::Kind::kUnknown);
  EXPECT_EQ(v.reason, Verdict::Reason::kError);
}

// Sleeps regardless of its arguments.
std::string slow_command() { return "sh -c sleep${IFS}30 {file}"; }

TEST(Dispatch, ExternalTimeoutIsUnknownTimeout) {
  std::vector<BackendConfig> backends{external("slow", slow_command(), 0.5)};
  auto start = Clock::now();
  Verdict v = dispatch(modus_ponens(), backends);
  EXPECT_LT(seconds_since(start), 3.0);
  EXPECT_EQ(v.kind, Verdict::Kind::kUnknown);
  EXPECT_EQ(v.reason, Verdict::Reason::kTimeout);
}

TEST(Dispatch, ExternalCounterSatisfiableNeedsAModel) {
  ScriptDir dir;
  std::string liar = dir.script("liar.sh", "echo '% SZS status CounterSatisfiable'");
  std::vector<BackendConfig> backends{external("liar", liar + " {file}")};
  // Valid goal: no countermodel exists, so the claim cannot become Disproved.
  Verdict valid = dispatch(modus_ponens(), backends);
  EXPECT_EQ(valid.kind, Verdict::Kind::kUnknown);
  EXPECT_EQ(valid.reason, Verdict::Reason::kSaturated);
  // Invalid goal: a model is rebuilt and checked.
  Obligation ob = between_symmetry();
  Verdict invalid = dispatch(ob, backends);
  ASSERT_EQ(invalid.kind, Verdict::Kind::kDisproved);
  EXPECT_TRUE(is_countermodel(*invalid.countermodel, ob.premise_formulas(), ob.goal));
}

TEST(Dispatch, FirstDecisiveVerdictWinsTheRace) {
  std::vector<BackendConfig> backends = default_backends(10);
  backends.push_back(external("slow", slow_command(), 10));
  auto start = Clock::now();
  Verdict v = dispatch(modus_ponens(), backends);
  EXPECT_EQ(v.kind, Verdict::Kind::kProved);
  EXPECT_LT(seconds_since(start), 3.0);
}

TEST(Dispatch, KeepsTptpFile) {
  ScriptDir dir;
  DispatchOptions options;
  options.tptp_dir = dir.path / "keep";
  Obligation ob = modus_ponens();
  dispatch(ob, default_backends(5), options);
  EXPECT_TRUE(fs::exists(*options.tptp_dir / tptp_file_name(ob)));
}

TEST(Dispatch, PreCancelledReturnsQuickly) {
  std::atomic<bool> cancel{true};
  DispatchOptions options;
  options.cancel = &cancel;
  auto start = Clock::now();
  Verdict v = dispatch(modus_ponens(), std::vector<BackendConfig>{external("slow", slow_command(), 20)},
                       options);
  EXPECT_LT(seconds_since(start), 3.0);
  EXPECT_EQ(v.kind, Verdict::Kind::kUnknown);
}

Obligation random_obligation(testing::FormulaGen& gen, int i) {
  Obligation ob;
  ob.id = "R/" + std::to_string(i) + "/1";
  ob.premises.push_back({"H", gen.closed(), true});
  ob.goal = gen.closed();
  return ob;
}

TEST(DispatchProperties, DisprovedAlwaysCarriesAVerifiedModel) {
  testing::GenConfig cfg;
  cfg.constants = {"a", "b"};
  testing::FormulaGen gen(41, cfg);
  int disproved = 0;
  for (int i = 0; i < 80; ++i) {
    Obligation ob = random_obligation(gen, i);
    Verdict v = dispatch(ob, default_backends(0.5));
    if (v.kind == Verdict::Kind::kDisproved) {
      ++disproved;
      ASSERT_TRUE(v.countermodel.has_value());
      EXPECT_TRUE(is_countermodel(*v.countermodel, ob.premise_formulas(), ob.goal));
      EXPECT_TRUE(testing::brute_force_countermodel(ob.premise_formulas(), ob.goal, v.countermodel->size));
    }
    if (v.kind == Verdict::Kind::kProved) {
      for (int n = 1; n <= 2; ++n) EXPECT_FALSE(testing::brute_force_countermodel(ob.premise_formulas(), ob.goal, n));
    }
  }
  EXPECT_GT(disproved, 5);
}

TEST(DispatchProperties, ExtraPremisesKeepProofs) {
  testing::GenConfig cfg;
  cfg.constants = {"a", "b"};
  testing::FormulaGen gen(43, cfg);
  int proved = 0;
  for (int i = 0; i < 80; ++i) {
    Obligation ob = random_obligation(gen, i);
    if (dispatch(ob, default_backends(0.5)).kind != Verdict::Kind::kProved) continue;
    ++proved;
    ob.premises.push_back({"Extra", gen.closed(), false});
    EXPECT_EQ(dispatch(ob, default_backends(2)).kind, Verdict::Kind::kProved) << ob.id;
  }
  EXPECT_GT(proved, 5);
}

}  // namespace
}  // namespace elfe
