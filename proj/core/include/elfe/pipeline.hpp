#ifndef ELFE_PIPELINE_HPP_
#define ELFE_PIPELINE_HPP_

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "elfe/backend.hpp"
#include "elfe/library.hpp"
#include "elfe/obligation.hpp"

namespace elfe {

struct VerifyOptions {
  std::vector<BackendConfig> backends;  // empty: default_backends(timeout_s)
  double timeout_s = kDefaultTimeoutSeconds;
  int jobs = 0;  // 0: hardware concurrency
  bool case_completeness = true;
  // One worker, builtin backends only, all timings reported as 0.
  bool deterministic = false;
  std::optional<std::filesystem::path> keep_tptp;
};

struct AssumedEntry {
  std::string label;
  std::string kind;  // axiom, definition, library, assumption
  int line = 0;      // 0 for libraries
  std::string detail;
};

struct VerifyResult {
  std::vector<AssumedEntry> assumed;
  std::vector<int> statement_lines;
  VerificationReport report;
};

struct VerifyEvents {
  std::function<void(const AssumedEntry&)> assumed;
  // Called once with every obligation before checking starts.
  std::function<void(const std::vector<Obligation>&, const std::vector<int>& statement_lines)>
      planned;
  // Serialized; called in completion order.
  std::function<void(const CheckedObligation&)> checked;
};

// Backends actually used for the given options.
std::vector<BackendConfig> effective_backends(const VerifyOptions& options);

// Parses, desugars and checks a whole document. Front-end problems raise
// ElfeError before any obligation is checked. With `cancel` set mid-run,
// obligations not yet started stay pending.
VerifyResult verify_text(const std::string& text, LibraryStore& libraries,
                         const VerifyOptions& options = {}, const VerifyEvents& events = {},
                         const std::atomic<bool>* cancel = nullptr);

// The machine-readable report: status, lines[], obligations[], stats. The
// CLI's --json output and the service's report are both this string.
std::string report_json(const VerifyResult& result);

}  // namespace elfe

#endif  // ELFE_PIPELINE_HPP_
