#include <benchmark/benchmark.h>

#include "elfe/cnf.hpp"
#include "elfe/library.hpp"
#include "elfe/model.hpp"
#include "elfe/pipeline.hpp"
#include "elfe/resolution.hpp"
#include "elfe/sequence.hpp"
#include "elfe/surface.hpp"
#include "elfe/tptp.hpp"

namespace {

using namespace elfe;

std::string corpus(const char* file) { return read_file(std::string(ELFE_CORPUS_DIR "/") + file); }

Formula between(const char* a, const char* b, const char* c) {
  return Formula::predicate("between", {Term::variable(a), Term::variable(b), Term::variable(c)});
}

std::vector<Formula> geometry_axioms() {
  LibraryStore store;
  std::vector<Formula> out;
  for (const auto& p : store.load("geometry")->scope.premises) out.push_back(p.formula);
  return out;
}

void BM_ParseDesugar(benchmark::State& state) {
  const std::string text = corpus("midpoint_theorem.elfe");
  LibraryStore store;
  store.load("geometry");
  for (auto _ : state) {
    Document doc = desugar(parse_document(text), store.resolver());
    benchmark::DoNotOptimize(doc);
  }
}
BENCHMARK(BM_ParseDesugar);

void BM_Obligations(benchmark::State& state) {
  LibraryStore store;
  Document doc = desugar(parse_document(corpus("midpoint_theorem.elfe")), store.resolver());
  for (auto _ : state) {
    auto obs = derive_obligations(build_sequence(doc.decls[0], doc.ambient_for(0)));
    benchmark::DoNotOptimize(obs);
  }
}
BENCHMARK(BM_Obligations);

void BM_ClausifyGeometry(benchmark::State& state) {
  auto axioms = geometry_axioms();
  for (auto _ : state) {
    std::size_t n = 0;
    for (const auto& f : axioms) n += clausify(f).size();
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_ClausifyGeometry);

void BM_TptpRoundTrip(benchmark::State& state) {
  LibraryStore store;
  Document doc = desugar(parse_document(corpus("midpoint_extension.elfe")), store.resolver());
  auto obs = derive_obligations(build_sequence(doc.decls[0], doc.ambient_for(0)));
  for (auto _ : state) {
    for (const auto& ob : obs) benchmark::DoNotOptimize(parse_tptp(to_tptp(ob)));
  }
}
BENCHMARK(BM_TptpRoundTrip);

void BM_ProveDefMidpointStep(benchmark::State& state) {
  // Line 8 of the midpoint extension: between(b,m,c) from midpoint(m,b,c).
  LibraryStore store;
  Document doc = desugar(parse_document(corpus("midpoint_extension.elfe")), store.resolver());
  auto obs = derive_obligations(build_sequence(doc.decls[0], doc.ambient_for(0)));
  const Obligation* line8 = nullptr;
  for (const auto& ob : obs) {
    if (ob.origin.line == 8) line8 = &ob;
  }
  auto premises = line8->premise_formulas();
  for (auto _ : state) benchmark::DoNotOptimize(prove(premises, line8->goal));
}
BENCHMARK(BM_ProveDefMidpointStep)->Unit(benchmark::kMicrosecond);

void BM_CountermodelBetweenSymmetry(benchmark::State& state) {
  Formula goal = Formula::forall({"a", "b", "c"}, Formula::implication(between("a", "b", "c"), between("c", "b", "a")));
  for (auto _ : state) benchmark::DoNotOptimize(find_countermodel({}, goal));
}
BENCHMARK(BM_CountermodelBetweenSymmetry)->Unit(benchmark::kMicrosecond);

void BM_NoCountermodelGeometry(benchmark::State& state) {
  // Exhausts sizes 1..n against the full axiom set.
  auto axioms = geometry_axioms();
  Formula goal = Formula::forall({"a", "b"}, Formula::equal(Term::variable("a"), Term::variable("a")));
  ModelSearchLimits limits;
  limits.max_size = static_cast<int>(state.range(0));
  limits.budget_ms = 60000;
  for (auto _ : state) benchmark::DoNotOptimize(find_countermodel(axioms, goal, limits));
}
BENCHMARK(BM_NoCountermodelGeometry)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_VerifyLineExtension(benchmark::State& state) {
  const std::string text = corpus("line_extension.elfe");
  LibraryStore store;
  VerifyOptions options;
  options.deterministic = true;
  for (auto _ : state) benchmark::DoNotOptimize(verify_text(text, store, options));
}
BENCHMARK(BM_VerifyLineExtension)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
