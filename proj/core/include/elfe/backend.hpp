#ifndef ELFE_BACKEND_HPP_
#define ELFE_BACKEND_HPP_

#include <atomic>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elfe/obligation.hpp"

namespace elfe {

struct BackendConfig {
  enum class Kind { kExternalTptp, kBuiltinResolution, kBuiltinModelFinder };

  std::string name;
  Kind kind = Kind::kBuiltinResolution;
  std::string command;  // external only; `{file}` and `{timeout}` are substituted
  double timeout_s = 10.0;
  bool enabled = true;
};

std::string_view to_string(BackendConfig::Kind kind);

inline constexpr double kDefaultTimeoutSeconds = 10.0;

// Built-in resolution prover plus model finder.
std::vector<BackendConfig> default_backends(double timeout_s = kDefaultTimeoutSeconds);

// "resolution", "modelfinder", "eprover", "vampire", or "<name>=<command
// template>" for any other TPTP prover. Throws std::invalid_argument.
BackendConfig backend_from_spec(std::string_view spec, double timeout_s = kDefaultTimeoutSeconds);

enum class SzsStatus { kTheorem, kCounterSatisfiable, kTimeout, kUnknown };

std::string_view to_string(SzsStatus status);

// First `SZS status <S>` line wins.
SzsStatus parse_szs(std::string_view output);

class BackendSpawnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool cancelled = false;
  std::string output;  // stdout and stderr interleaved
};

// Runs argv[0] (PATH lookup) in its own process group with stdin closed.
// The whole group is killed on timeout or cancellation and always reaped.
ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s,
                          const std::atomic<bool>* cancel = nullptr);

// Splits on whitespace, then substitutes placeholders in each word.
std::vector<std::string> expand_command(std::string_view command_template,
                                        const std::string& file, double timeout_s);

struct DispatchOptions {
  // Directory for the obligation's .p file; a private temp directory that is
  // removed afterwards when empty.
  std::optional<std::filesystem::path> tptp_dir;
  int model_max_size = 3;
  const std::atomic<bool>* cancel = nullptr;
};

// File name used for an obligation's TPTP problem.
std::string tptp_file_name(const Obligation& ob);

// Races the enabled backends. The first proof or verified countermodel wins
// and cancels the others; every worker is joined before returning.
// Throws std::invalid_argument when no backend is enabled.
Verdict dispatch(const Obligation& ob, std::span<const BackendConfig> backends,
                 const DispatchOptions& options = {});

}  // namespace elfe

#endif  // ELFE_BACKEND_HPP_
