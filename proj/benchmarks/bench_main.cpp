#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "answersum/centrality.hpp"
#include "answersum/dump_ingest.hpp"
#include "answersum/pipeline.hpp"
#include "answersum/redundancy.hpp"
#include "answersum/rouge.hpp"
#include "answersum/scoring.hpp"

using namespace answersum;

namespace {

const char* const kWords[] = {"parse", "string", "int",    "java",   "exception", "number", "convert", "use",
                              "value", "method", "return", "input",  "the",       "a",      "of",      "to",
                              "list",  "set",    "order",  "python", "unique",    "map",    "loop",    "entry"};

std::vector<std::string> random_sentences(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    const std::size_t len = 6 + rng() % 20;
    for (std::size_t k = 0; k < len; ++k) s += std::string(k ? " " : "") + kWords[rng() % std::size(kWords)];
    out.push_back(s + ".");
  }
  return out;
}

std::vector<AnswerSentence> as_sentences(const std::vector<std::string>& texts) {
  std::vector<AnswerSentence> out;
  for (std::size_t i = 0; i < texts.size(); ++i)
    out.push_back({SentenceId(static_cast<int>(i / 10), static_cast<int>(i % 10) + 1), texts[i]});
  return out;
}

void BM_TextRank(benchmark::State& state) {
  const auto sentences = as_sentences(random_sentences(static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(rank_by_centrality(sentences));
}
BENCHMARK(BM_TextRank)->Arg(10)->Arg(30)->Arg(100);

void BM_TfidfFit(benchmark::State& state) {
  const auto corpus = random_sentences(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(TfidfEmbedder::fit(corpus).embed(corpus));
}
BENCHMARK(BM_TfidfFit)->Arg(30)->Arg(200);

void BM_GreedySelect(benchmark::State& state) {
  const auto texts = random_sentences(static_cast<std::size_t>(state.range(0)), 3);
  const auto embeddings = TfidfEmbedder::fit(texts).embed(texts);
  const auto sentences = as_sentences(texts);
  std::vector<RankedEmbedding> ranked;
  for (std::size_t i = 0; i < texts.size(); ++i) ranked.push_back({sentences[i], embeddings[i]});
  for (auto _ : state) benchmark::DoNotOptimize(greedy_select_traced(ranked));
}
BENCHMARK(BM_GreedySelect)->Arg(30);

void BM_Rouge(benchmark::State& state) {
  const auto texts = random_sentences(10, 4);
  const auto cand = rouge_tokens(std::vector<std::string>(texts.begin(), texts.begin() + 5));
  std::vector<std::vector<std::string>> refs;
  for (int r = 0; r < 3; ++r)
    refs.push_back(rouge_tokens(random_sentences(5, 10 + static_cast<std::uint64_t>(r))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rouge_n(cand, refs, 1));
    benchmark::DoNotOptimize(rouge_n(cand, refs, 2));
    benchmark::DoNotOptimize(rouge_l(cand, refs));
  }
}
BENCHMARK(BM_Rouge);

void BM_PipelineFull(benchmark::State& state) {
  const auto sentences = as_sentences(random_sentences(60, 5));
  const auto query = TechnicalQuery::make("how to parse a string to int in java");
  const auto config = PipelineConfig::baseline();
  for (auto _ : state) benchmark::DoNotOptimize(summarize_sentences(query, sentences, config));
}
BENCHMARK(BM_PipelineFull);

void BM_PostsParse(benchmark::State& state) {
  std::string xml = "<?xml version=\"1.0\"?>\n<posts>\n";
  const auto bodies = random_sentences(5000, 6);
  for (std::size_t i = 0; i < bodies.size(); ++i)
    xml += "  <row Id=\"" + std::to_string(i + 1) + "\" PostTypeId=\"2\" ParentId=\"1\" Score=\"2\" Body=\"&lt;p&gt;" +
           bodies[i] + "&lt;/p&gt;\" />\n";
  xml += "</posts>\n";
  for (auto _ : state) {
    std::istringstream in(xml);
    PostsReader reader(in);
    std::size_t n = 0;
    while (reader.next()) ++n;
    benchmark::DoNotOptimize(n);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(xml.size()));
}
BENCHMARK(BM_PostsParse);

}  // namespace

BENCHMARK_MAIN();
