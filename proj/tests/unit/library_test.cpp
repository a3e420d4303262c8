#include <gtest/gtest.h>

#include <fstream>

#include "elfe/error.hpp"
#include "elfe/library.hpp"
#include "elfe/tptp.hpp"
#include "oracle.hpp"

namespace elfe {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           (std::string("elfe-lib-") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
  }
};

ErrorCode load_error(LibraryStore& store, const std::string& name) {
  try {
    store.load(name);
  } catch (const ElfeError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error loading " << name;
  return ErrorCode::kSyntaxError;
}

TEST(Library, GeometryCounts) {
  LibraryStore store;
  auto lib = store.load("geometry");
  EXPECT_EQ(lib->own_notations.size(), 4u);
  EXPECT_EQ(lib->count(DeclKind::kAxiom), 9u);
  EXPECT_EQ(lib->count(DeclKind::kDefinition), 5u);
  EXPECT_EQ(lib->count(DeclKind::kLemma), 0u);
}

TEST(Library, GeometryMatchesHandTranscription) {
  LibraryStore store;
  auto lib = store.load("geometry");
  auto golden = parse_tptp(read_file(fs::path(ELFE_GOLDEN_DIR) / "geometry.p"));
  ASSERT_EQ(golden.size(), lib->scope.premises.size());
  for (std::size_t i = 0; i < golden.size(); ++i) {
    const Premise& p = lib->scope.premises[i];
    std::string lower;
    for (char ch : p.label) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    EXPECT_EQ(golden[i].name, lower);
    EXPECT_EQ(p.formula, golden[i].formula) << p.label;
    EXPECT_EQ(p.kind == DeclKind::kDefinition, golden[i].role == "definition") << p.label;
  }
}

TEST(Library, PaschGoldenString) {
  LibraryStore store;
  auto lib = store.load("geometry");
  const Premise& pasch = lib->scope.premises[6];
  EXPECT_EQ(pasch.label, "Pasch");
  EXPECT_EQ(to_string(pasch.formula),
            "∀a,b,c,p,q. between(a,p,c) ∧ between(b,q,c) → ∃x. between(p,x,b) ∧ between(q,x,a)");
}

TEST(Library, LemmasLibraryIsTransitive) {
  LibraryStore store;
  auto lib = store.load("geometry_lemmas");
  EXPECT_EQ(lib->scope.premises.size(), 14u + 5u);
  EXPECT_EQ(lib->scope.notations.patterns().size(), 4u);
  for (const char* label : {"MidpointCol", "BetweenCong", "ColTrans", "ColPerm", "Bsymmetry"}) {
    EXPECT_TRUE(lib->preverified.contains(label)) << label;
  }
  EXPECT_TRUE(lib->unverified_lemmas.empty());
}

TEST(Library, CachedInstances) {
  LibraryStore store;
  EXPECT_EQ(store.load("geometry"), store.load("geometry"));
}

TEST(Library, ManifestParsing) {
  EXPECT_EQ(parse_manifest("# note\npreverified: A\n\npreverified:B\n"),
            (std::set<std::string>{"A", "B"}));
}

TEST(Library, NotFound) {
  LibraryStore store;
  EXPECT_EQ(load_error(store, "nosuch"), ErrorCode::kLibraryNotFound);
}

TEST(Library, CyclicInclude) {
  LibraryStore store({}, false);
  store.add_source("a", "Include b.\nAxiom A: p.");
  store.add_source("b", "Include a.\nAxiom B: q.");
  EXPECT_EQ(load_error(store, "a"), ErrorCode::kCyclicInclude);
}

TEST(Library, SearchPathsComeBeforeBundled) {
  TempDir dir;
  dir.write("geometry.elfe", "Axiom Only: for all a. p(a).\n");
  LibraryStore store({dir.path});
  auto lib = store.load("geometry");
  ASSERT_EQ(lib->scope.premises.size(), 1u);
  EXPECT_EQ(lib->scope.premises[0].label, "Only");
  EXPECT_EQ(store.find("geometry_lemmas")->parent_path(), bundled_library_dir());
}

TEST(Library, UnverifiedLemmasAreListed) {
  LibraryStore store({}, false);
  store.add_source("mini", "Axiom A: for all x. p(x).\nLemma L: for all x. p(x).\nProof: Then p(x). qed.");
  auto lib = store.load("mini");
  EXPECT_EQ(lib->unverified_lemmas, (std::vector<std::string>{"L"}));
  EXPECT_EQ(lib->count(DeclKind::kLemma), 1u);
}

TEST(Library, AvailableListsBundled) {
  LibraryStore store;
  auto names = store.available();
  EXPECT_NE(std::find(names.begin(), names.end(), "geometry"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "geometry_lemmas"), names.end());
}

TEST(Library, ReadFileMissing) {
  try {
    read_file("/nonexistent/file.elfe");
    FAIL();
  } catch (const ElfeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace elfe
