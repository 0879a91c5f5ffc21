#include <benchmark/benchmark.h>

#include "corpus_gen.hpp"
#include "mdpattern/analysis.hpp"
#include "mdpattern/archive.hpp"
#include "mdpattern/similarity.hpp"

using namespace mdpattern;

namespace {

const RtxCodeTable& table() {
  static const RtxCodeTable t = RtxCodeTable::builtin();
  return t;
}

// Roughly `n` expressions built from 20-expression random corpora.
std::string corpus_text(std::int64_t n, std::uint64_t seed) {
  std::string md;
  gen::Generator g(seed);
  for (std::int64_t made = 0; made < n;) {
    const auto exprs = g.corpus(20);
    made += static_cast<std::int64_t>(exprs.size());
    md += gen::to_md(exprs);
  }
  return md;
}

void BM_Parse(benchmark::State& state) {
  const std::string md = corpus_text(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(parse_md(md, "bench.md"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * md.size()));
}
BENCHMARK(BM_Parse)->Arg(200)->Arg(2000);

void BM_Analyze(benchmark::State& state) {
  const auto forms = parse_md(corpus_text(state.range(0), 2), "bench.md");
  for (auto _ : state) benchmark::DoNotOptimize(analyze("bench", forms, table()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Analyze)->Arg(200)->Arg(2000);

void BM_Similarity(benchmark::State& state) {
  const MdAnalysis a = analyze("a", parse_md(corpus_text(state.range(0), 3), "a.md"), table());
  const MdAnalysis b = analyze("b", parse_md(corpus_text(state.range(0), 4), "b.md"), table());
  for (auto _ : state) {
    benchmark::DoNotOptimize(expression_similarity(a, b));
    benchmark::DoNotOptimize(target_coverage(a, b));
  }
}
BENCHMARK(BM_Similarity)->Arg(200)->Arg(2000);

void BM_RoundTrip(benchmark::State& state) {
  const auto forms = parse_md(corpus_text(state.range(0), 5), "bench.md");
  for (auto _ : state) benchmark::DoNotOptimize(verify_round_trip("bench", forms, table()));
}
BENCHMARK(BM_RoundTrip)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
