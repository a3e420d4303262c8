#ifndef ELFE_ERROR_HPP_
#define ELFE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elfe {

struct SourceLocation {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class ErrorCode {
  kInvalidCharacter,
  kSyntaxError,
  kUnclosedBlock,
  kDuplicateLabel,
  kDuplicateSlot,
  kInvalidNotation,
  kConflictingNotation,
  kUnmatchedAtom,
  kAmbiguousMatch,
  kUnknownLabel,
  kUnknownName,
  kNameInUse,
  kArityMismatch,
  kStructureError,
  kLibraryNotFound,
  kCyclicInclude,
  kIoError,
};

std::string_view to_string(ErrorCode code);

struct Diagnostic {
  ErrorCode code;
  SourceLocation where;
  std::string message;

  // "line:column: Code: message"
  std::string format() const;
};

// Thrown by every front-end stage. Desugaring aggregates several diagnostics
// into one error; the lexer and parser stop at the first.
class ElfeError : public std::runtime_error {
 public:
  explicit ElfeError(Diagnostic diagnostic);
  explicit ElfeError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  ErrorCode code() const { return diagnostics_.front().code; }
  SourceLocation where() const { return diagnostics_.front().where; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace elfe

#endif  // ELFE_ERROR_HPP_
