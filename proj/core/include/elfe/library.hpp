#ifndef ELFE_LIBRARY_HPP_
#define ELFE_LIBRARY_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "elfe/desugar.hpp"

namespace elfe {

struct Library {
  std::string name;
  std::filesystem::path source;  // empty for in-memory libraries
  Document document;             // the library's own declarations
  LibraryScope scope;            // what `Include <name>.` brings in, transitively
  std::vector<NotationPattern> own_notations;
  std::set<std::string> preverified;
  // Lemmas with proofs that the manifest does not mark as verified.
  std::vector<std::string> unverified_lemmas;

  std::size_t count(DeclKind kind) const;
};

// Directory of the libraries shipped with the build.
std::filesystem::path bundled_library_dir();

// Reads `preverified: <label>` lines; '#' starts a comment.
std::set<std::string> parse_manifest(std::string_view text);

// Resolves and caches libraries. Search order: the given paths, then the
// bundled directory. In-memory sources registered with add_source win over
// files. Safe to share between threads.
class LibraryStore {
 public:
  explicit LibraryStore(std::vector<std::filesystem::path> search_paths = {},
                        bool use_bundled = true);

  void add_source(const std::string& name, std::string text);

  // Throws kLibraryNotFound, kCyclicInclude, or the library's own errors.
  std::shared_ptr<const Library> load(const std::string& name);

  IncludeResolver resolver();

  std::optional<std::filesystem::path> find(const std::string& name) const;
  // Names of every library visible through the search path, sorted.
  std::vector<std::string> available() const;
  const std::vector<std::filesystem::path>& search_paths() const { return paths_; }

 private:
  std::shared_ptr<const Library> load_locked(const std::string& name, SourceLocation where);

  std::vector<std::filesystem::path> paths_;
  std::map<std::string, std::string> sources_;
  std::map<std::string, std::shared_ptr<const Library>> cache_;
  std::vector<std::string> loading_;
  mutable std::recursive_mutex mutex_;
};

std::shared_ptr<const Library> load_library(const std::string& name,
                                            const std::vector<std::filesystem::path>& search_paths);

std::string read_file(const std::filesystem::path& path);

}  // namespace elfe

#endif  // ELFE_LIBRARY_HPP_
