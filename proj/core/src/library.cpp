#include "elfe/library.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "elfe/surface.hpp"

#ifndef ELFE_BUNDLED_LIB_DIR
#define ELFE_BUNDLED_LIB_DIR "lib"
#endif

namespace elfe {

namespace fs = std::filesystem;

std::size_t Library::count(DeclKind kind) const {
  return static_cast<std::size_t>(std::count_if(document.decls.begin(), document.decls.end(),
                                                [&](const Decl& d) { return d.kind == kind; }));
}

fs::path bundled_library_dir() {
#ifdef ELFE_INSTALLED_LIB_DIR
  if (!std::filesystem::exists(ELFE_BUNDLED_LIB_DIR)) return ELFE_INSTALLED_LIB_DIR;
#endif
  return ELFE_BUNDLED_LIB_DIR;
}

std::set<std::string> parse_manifest(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    constexpr std::string_view key = "preverified:";
    auto pos = line.find(key);
    if (pos == std::string::npos) continue;
    std::string label = line.substr(pos + key.size());
    label.erase(0, label.find_first_not_of(" \t"));
    label.erase(label.find_last_not_of(" \t\r") + 1);
    if (!label.empty()) out.insert(label);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ElfeError(Diagnostic{ErrorCode::kIoError, {}, fmt::format("cannot read {}", path.string())});
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LibraryStore::LibraryStore(std::vector<fs::path> search_paths, bool use_bundled)
    : paths_(std::move(search_paths)) {
  if (use_bundled) paths_.push_back(bundled_library_dir());
}

void LibraryStore::add_source(const std::string& name, std::string text) {
  std::lock_guard lock(mutex_);
  sources_[name] = std::move(text);
  cache_.clear();
}

std::optional<fs::path> LibraryStore::find(const std::string& name) const {
  for (const auto& dir : paths_) {
    fs::path candidate = dir / (name + ".elfe");
    std::error_code ec;
    if (fs::is_regular_file(candidate, ec)) return candidate;
  }
  return std::nullopt;
}

std::vector<std::string> LibraryStore::available() const {
  std::set<std::string> names;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [name, _] : sources_) names.insert(name);
  }
  for (const auto& dir : paths_) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (entry.path().extension() == ".elfe") names.insert(entry.path().stem().string());
    }
  }
  return {names.begin(), names.end()};
}

std::shared_ptr<const Library> LibraryStore::load(const std::string& name) {
  std::lock_guard lock(mutex_);
  return load_locked(name, {});
}

IncludeResolver LibraryStore::resolver() {
  return [this](const std::string& name, SourceLocation where) {
    std::lock_guard lock(mutex_);
    return load_locked(name, where)->scope;
  };
}

std::shared_ptr<const Library> LibraryStore::load_locked(const std::string& name,
                                                         SourceLocation where) {
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  if (std::find(loading_.begin(), loading_.end(), name) != loading_.end()) {
    std::string chain;
    for (const auto& n : loading_) chain += n + " -> ";
    throw ElfeError(Diagnostic{ErrorCode::kCyclicInclude, where,
                               fmt::format("include cycle {}{}", chain, name)});
  }

  auto lib = std::make_shared<Library>();
  lib->name = name;
  std::string text;
  if (auto src = sources_.find(name); src != sources_.end()) {
    text = src->second;
  } else if (auto path = find(name)) {
    lib->source = *path;
    text = read_file(*path);
    fs::path manifest = fs::path(*path).replace_extension(".manifest");
    std::error_code ec;
    if (fs::is_regular_file(manifest, ec)) lib->preverified = parse_manifest(read_file(manifest));
  } else {
    throw ElfeError(Diagnostic{ErrorCode::kLibraryNotFound, where,
                               fmt::format("library '{}' not found", name)});
  }

  loading_.push_back(name);
  try {
    auto raw = parse_document(text);
    lib->document = desugar(raw, [&](const std::string& inner, SourceLocation at) {
      return load_locked(inner, at)->scope;
    });
    loading_.pop_back();
  } catch (const ElfeError& e) {
    loading_.pop_back();
    if (e.code() == ErrorCode::kCyclicInclude || e.code() == ErrorCode::kLibraryNotFound) throw;
    std::vector<Diagnostic> wrapped;
    for (const auto& d : e.diagnostics()) {
      wrapped.push_back({d.code, where,
                         fmt::format("in library '{}' at {}:{}: {}", name, d.where.line,
                                     d.where.column, d.message)});
    }
    throw ElfeError(std::move(wrapped));
  }

  const Document& doc = lib->document;
  lib->scope.notations = doc.notations;
  lib->scope.premises = doc.library_premises;
  for (const auto& d : doc.decls) {
    lib->scope.premises.push_back({d.label, d.kind, d.formula});
    if (d.kind == DeclKind::kLemma && d.proof && !lib->preverified.contains(d.label)) {
      lib->unverified_lemmas.push_back(d.label);
    }
  }
  for (const auto& n : doc.notations.patterns()) {
    bool from_include = false;
    for (const auto& inc : doc.includes) {
      auto it = cache_.find(inc);
      if (it == cache_.end()) continue;
      for (const auto& m : it->second->scope.notations.patterns()) {
        if (m.same_as(n)) from_include = true;
      }
    }
    if (!from_include) lib->own_notations.push_back(n);
  }
  cache_.emplace(name, lib);
  return lib;
}

std::shared_ptr<const Library> load_library(const std::string& name,
                                            const std::vector<fs::path>& search_paths) {
  LibraryStore store(search_paths);
  return store.load(name);
}

}  // namespace elfe
