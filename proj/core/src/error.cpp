#include "elfe/error.hpp"

#include <fmt/format.h>

namespace elfe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidCharacter: return "InvalidCharacter";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnclosedBlock: return "UnclosedBlock";
    case ErrorCode::kDuplicateLabel: return "DuplicateLabel";
    case ErrorCode::kDuplicateSlot: return "DuplicateSlot";
    case ErrorCode::kInvalidNotation: return "InvalidNotation";
    case ErrorCode::kConflictingNotation: return "ConflictingNotation";
    case ErrorCode::kUnmatchedAtom: return "UnmatchedAtom";
    case ErrorCode::kAmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kUnknownName: return "UnknownName";
    case ErrorCode::kNameInUse: return "NameInUse";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kStructureError: return "StructureError";
    case ErrorCode::kLibraryNotFound: return "LibraryNotFound";
    case ErrorCode::kCyclicInclude: return "CyclicInclude";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Error";
}

std::string Diagnostic::format() const {
  return fmt::format("{}:{}: {}: {}", where.line, where.column, to_string(code), message);
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += '\n';
    out += d.format();
  }
  return out;
}

}  // namespace

ElfeError::ElfeError(Diagnostic diagnostic)
    : ElfeError(std::vector<Diagnostic>{std::move(diagnostic)}) {}

ElfeError::ElfeError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

}  // namespace elfe
