#ifndef ELFE_CORPUS_HPP_
#define ELFE_CORPUS_HPP_

#include <filesystem>
#include <optional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace elfe {

struct CorpusExample {
  std::string name;  // display name, e.g. "Midpoint Extension"
  std::string file;  // relative to the corpus directory
};

// corpus.manifest, one directive per line, '#' comments:
//   example: <name> = <file>
//   requires-external: <file> <obligation id>
//   expect-failed: <file>
struct CorpusManifest {
  std::vector<CorpusExample> examples;
  // file -> obligation ids; ids of unlabeled lemmas repeat across files
  std::map<std::string, std::set<std::string>> requires_external;
  std::set<std::string> expect_failed;

  const CorpusExample* find(std::string_view name) const;
  bool tagged(const std::string& file, const std::string& obligation_id) const;
};

// Throws std::invalid_argument on an unknown directive.
CorpusManifest parse_corpus_manifest(std::string_view text);

struct Corpus {
  std::filesystem::path dir;
  CorpusManifest manifest;
};

// Directory of the corpus shipped with the build.
std::filesystem::path bundled_corpus_dir();

Corpus load_corpus(const std::filesystem::path& dir = bundled_corpus_dir());

}  // namespace elfe

#endif  // ELFE_CORPUS_HPP_
