#include "elfe/corpus.hpp"

#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "elfe/library.hpp"

namespace elfe {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const CorpusExample* CorpusManifest::find(std::string_view name) const {
  for (const auto& e : examples) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

bool CorpusManifest::tagged(const std::string& file, const std::string& obligation_id) const {
  auto it = requires_external.find(file);
  return it != requires_external.end() && it->second.contains(obligation_id);
}

CorpusManifest parse_corpus_manifest(std::string_view text) {
  CorpusManifest m;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string l = trim(raw.substr(0, raw.find('#')));
    if (l.empty()) continue;
    auto colon = l.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument(fmt::format("corpus manifest line {}: missing ':'", line));
    }
    std::string key = trim(l.substr(0, colon));
    std::string value = trim(l.substr(colon + 1));
    if (key == "example") {
      auto eq = value.rfind('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument(fmt::format("corpus manifest line {}: expected name = file", line));
      }
      m.examples.push_back({trim(value.substr(0, eq)), trim(value.substr(eq + 1))});
    } else if (key == "requires-external") {
      auto space = value.find_first_of(" \t");
      if (space == std::string::npos) {
        throw std::invalid_argument(fmt::format("corpus manifest line {}: expected file and obligation id", line));
      }
      m.requires_external[value.substr(0, space)].insert(trim(value.substr(space)));
    } else if (key == "expect-failed") {
      m.expect_failed.insert(value);
    } else {
      throw std::invalid_argument(fmt::format("corpus manifest line {}: unknown key '{}'", line, key));
    }
  }
  return m;
}

std::filesystem::path bundled_corpus_dir() {
#ifdef ELFE_INSTALLED_CORPUS_DIR
  if (!std::filesystem::exists(ELFE_BUNDLED_CORPUS_DIR)) return ELFE_INSTALLED_CORPUS_DIR;
#endif
  return ELFE_BUNDLED_CORPUS_DIR;
}

Corpus load_corpus(const std::filesystem::path& dir) {
  Corpus c;
  c.dir = dir;
  auto manifest = dir / "corpus.manifest";
  if (std::filesystem::exists(manifest)) c.manifest = parse_corpus_manifest(read_file(manifest));
  return c;
}

}  // namespace elfe
