#include <gtest/gtest.h>

#include "elfe/error.hpp"
#include "elfe/library.hpp"
#include "elfe/lexer.hpp"
#include "elfe/surface.hpp"
#include "oracle.hpp"

namespace elfe {
namespace {

std::vector<std::string> texts(std::string_view source) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(source)) out.push_back(t.text);
  return out;
}

ErrorCode parse_error(std::string_view source) {
  try {
    parse_document(source);
  } catch (const ElfeError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << source;
  return ErrorCode::kIoError;
}

const char* kMidpointExtension = R"(Include geometry.
Lemma MidpointExtension: for all a,b,c,d,m. midpoint(m,b,c) and a-b-c and b-c-d and a-b ≡ c-d and b ≠ c implies midpoint(m,a,d).
Proof:
  Assume midpoint(m,b,c) and a-b-c and b-c-d and a-b ≡ c-d and b ≠ c.
  Then a-m ≡ m-d since b-m ≡ m-c and a-b ≡ c-d.
  Note a-m-d:
    Then b-m-c by DefMidpoint.
    Then a-b-m since a-b-c and b-m-c.
    Then m-c-d since b-m-c and b-c-d.
  qed.
  Hence midpoint(m,a,d).
qed.
)";

TEST(Tokenize, EquidistantNotation) {
  EXPECT_EQ(texts("a-b ≡ c-d"), (std::vector<std::string>{"a", "-", "b", "≡", "c", "-", "d"}));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, MaximalMunchOnBars) {
  EXPECT_EQ(texts("a-b|-|c-d"), (std::vector<std::string>{"a", "-", "b", "|-|", "c", "-", "d"}));
  EXPECT_EQ(texts("a-b||c-d"), (std::vector<std::string>{"a", "-", "b", "||", "c", "-", "d"}));
}

TEST(Tokenize, PrimesBelongToIdentifiers) {
  EXPECT_EQ(texts("m-a' ≡ m-b'"), (std::vector<std::string>{"m", "-", "a'", "≡", "m", "-", "b'"}));
}

TEST(Tokenize, QuantifierDot) {
  auto tokens = tokenize("for all a,b. p(a). exists x. q(x).");
  std::vector<bool> dots;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::kPeriod) dots.push_back(t.quantifier_dot);
  }
  EXPECT_EQ(dots, (std::vector<bool>{true, false, true, false}));
}

TEST(Tokenize, InvalidCharacterHasLocation) {
  try {
    tokenize("Axiom A: p.\n  q € r.");
    FAIL();
  } catch (const ElfeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidCharacter);
    EXPECT_EQ(e.where(), (SourceLocation{2, 5}));
  }
}

TEST(Tokenize, LocationsAreMonotone) {
  auto tokens = tokenize(kMidpointExtension);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    auto a = tokens[i - 1].location(), b = tokens[i].location();
    EXPECT_TRUE(a.line < b.line || (a.line == b.line && a.column < b.column));
  }
}

TEST(Parse, MidpointExtensionShape) {
  RawDocument doc = parse_document(kMidpointExtension);
  ASSERT_EQ(doc.items.size(), 2u);
  EXPECT_EQ(doc.items[0].kind, RawItem::Kind::kInclude);
  EXPECT_EQ(doc.items[0].label, "geometry");
  const RawItem& lemma = doc.items[1];
  EXPECT_EQ(lemma.kind, RawItem::Kind::kLemma);
  EXPECT_EQ(lemma.label, "MidpointExtension");
  ASSERT_TRUE(lemma.proof.has_value());
  const auto& steps = lemma.proof->steps;
  ASSERT_EQ(steps.size(), 4u);
  EXPECT_EQ(steps[0].kind, RawStep::Kind::kAssume);
  EXPECT_EQ(steps[1].kind, RawStep::Kind::kThen);
  EXPECT_TRUE(steps[1].since.has_value());
  EXPECT_EQ(steps[2].kind, RawStep::Kind::kNote);
  EXPECT_EQ(steps[2].steps.size(), 3u);
  ASSERT_TRUE(steps[2].steps[0].by.has_value());
  EXPECT_EQ(*steps[2].steps[0].by, (std::vector<std::string>{"DefMidpoint"}));
  EXPECT_EQ(steps[3].kind, RawStep::Kind::kHence);
  EXPECT_EQ(steps[3].where.line, 11);
}

TEST(Parse, AxiomDeclaration) {
  RawDocument doc = parse_document("Axiom A: for all a,b. a-b ≡ b-a.");
  ASSERT_EQ(doc.items.size(), 1u);
  EXPECT_EQ(doc.items[0].kind, RawItem::Kind::kAxiom);
  EXPECT_EQ(doc.items[0].label, "A");
  EXPECT_EQ(doc.items[0].sentence->kind, RawSentence::Kind::kForall);
}

TEST(Parse, MissingHenceIsNotASyntaxError) {
  RawDocument doc = parse_document("Lemma: p implies q.\nProof: Assume p. qed.");
  ASSERT_EQ(doc.items.size(), 1u);
  EXPECT_TRUE(doc.items[0].auto_label);
  EXPECT_EQ(doc.items[0].proof->steps.size(), 1u);
}

TEST(Parse, ByListAndSinceTogether) {
  RawDocument doc = parse_document(
      "Lemma L: p implies q.\nProof: Assume p. Hence q since p by A, B. qed.");
  const RawStep& step = doc.items[0].proof->steps[1];
  ASSERT_TRUE(step.since.has_value());
  EXPECT_EQ(*step.by, (std::vector<std::string>{"A", "B"}));
}

TEST(Parse, PrecedenceAndAssociativity) {
  RawDocument doc = parse_document("Axiom A: p iff q implies r implies s or t and not u.");
  const RawSentence& s = *doc.items[0].sentence;
  ASSERT_EQ(s.kind, RawSentence::Kind::kIff);
  const RawSentence& imp = s.children[1];
  ASSERT_EQ(imp.kind, RawSentence::Kind::kImplies);
  EXPECT_EQ(imp.children[0].kind, RawSentence::Kind::kAtom);
  ASSERT_EQ(imp.children[1].kind, RawSentence::Kind::kImplies);  // right-associative
  const RawSentence& disj = imp.children[1].children[1];
  ASSERT_EQ(disj.kind, RawSentence::Kind::kOr);
  ASSERT_EQ(disj.children[1].kind, RawSentence::Kind::kAnd);
  EXPECT_EQ(disj.children[1].children[1].kind, RawSentence::Kind::kNot);
}

TEST(Parse, QuantifierScopesOverRest) {
  RawDocument doc = parse_document("Axiom A: for all a. p(a) and q(a) implies r(a).");
  const RawSentence& s = *doc.items[0].sentence;
  ASSERT_EQ(s.kind, RawSentence::Kind::kForall);
  EXPECT_EQ(s.children[0].kind, RawSentence::Kind::kImplies);
}

TEST(Parse, CaseAndTakeSteps) {
  RawDocument doc = parse_document(R"(Lemma L: p.
Proof:
  Case q:
    Hence p.
  qed.
  Case not q:
    Take x such that r(x).
    Hence p.
  qed.
qed.)");
  const auto& steps = doc.items[0].proof->steps;
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[0].kind, RawStep::Kind::kCase);
  EXPECT_EQ(steps[1].steps[0].kind, RawStep::Kind::kTake);
  EXPECT_EQ(steps[1].steps[0].vars, (std::vector<std::string>{"x"}));
}

TEST(Parse, HenceContradiction) {
  RawDocument doc = parse_document("Lemma L: not p.\nProof: Assume p. Hence contradiction. qed.");
  const auto& atom = doc.items[0].proof->steps[1].sentence;
  EXPECT_EQ(atom.kind, RawSentence::Kind::kAtom);
  EXPECT_EQ(atom.atom.text(), "contradiction");
}

TEST(ParseErrors, UnclosedBlockPointsAtOpening) {
  try {
    parse_document("Lemma L: p.\nProof:\n  Note q:\n    Then q.\n");
    FAIL();
  } catch (const ElfeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnclosedBlock);
    EXPECT_EQ(e.where().line, 3);
  }
}

TEST(ParseErrors, MissingPeriod) { EXPECT_EQ(parse_error("Axiom A: p"), ErrorCode::kSyntaxError); }

TEST(ParseErrors, DuplicateLabel) {
  EXPECT_EQ(parse_error("Axiom A: p.\nAxiom A: q."), ErrorCode::kDuplicateLabel);
}

TEST(ParseErrors, StrayQed) { EXPECT_EQ(parse_error("qed."), ErrorCode::kSyntaxError); }

TEST(ParseErrors, SkolemNamesAreReserved) {
  EXPECT_NE(parse_error("Axiom A: p(__sk1)."), ErrorCode::kIoError);
}

TEST(RoundTrip, PrintThenReparse) {
  for (const std::string& source : {std::string(kMidpointExtension),
                                    read_file(bundled_library_dir() / "geometry.elfe"),
                                    read_file(bundled_library_dir() / "geometry_lemmas.elfe")}) {
    RawDocument doc = parse_document(source);
    std::string printed = print_document(doc);
    RawDocument again = parse_document(printed);
    EXPECT_TRUE(same_structure(doc, again)) << printed;
    EXPECT_EQ(print_document(again), printed);
  }
}

TEST(Parse, GeometryLibraryItemCounts) {
  RawDocument doc = parse_document(read_file(bundled_library_dir() / "geometry.elfe"));
  int notations = 0, axioms = 0, definitions = 0;
  for (const auto& item : doc.items) {
    notations += item.kind == RawItem::Kind::kNotation;
    axioms += item.kind == RawItem::Kind::kAxiom;
    definitions += item.kind == RawItem::Kind::kDefinition;
  }
  EXPECT_EQ(notations, 4);
  EXPECT_EQ(axioms, 9);
  EXPECT_EQ(definitions, 5);
}

}  // namespace
}  // namespace elfe
