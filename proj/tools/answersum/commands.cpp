#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "answersum/corpus.hpp"
#include "answersum/dump_ingest.hpp"
#include "answersum/error.hpp"
#include "answersum/pipeline.hpp"
#include "answersum/remote_scorer.hpp"
#include "answersum/rouge.hpp"
#include "answersum/text.hpp"
#include "json.hpp"

namespace answersum::cli {
namespace {

struct CommonOptions {
  std::string scorer = "lexical";
  std::string endpoint;
  std::size_t remote_batch = kDefaultRemoteBatch;
  PipelineSettings settings;
  std::uint64_t seed = 42;
};

void add_pipeline_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scorer", o.scorer,
                  "lexical: lexical usefulness + TF-IDF embeddings; tfidf: TF-IDF usefulness + TF-IDF embeddings; "
                  "remote: scorer service for both")
      ->check(CLI::IsMember({"lexical", "tfidf", "remote"}))
      ->capture_default_str();
  cmd->add_option("--endpoint", o.endpoint,
                  std::string("scorer service URL for --scorer remote (env ") + kEndpointEnvVar + ")");
  cmd->add_option("--remote-batch", o.remote_batch, "max sentences per remote request")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--top-k", o.settings.top_k, "usefulness pre-selection size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--damping", o.settings.textrank.damping, "TextRank damping factor")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--convergence", o.settings.textrank.convergence_threshold, "TextRank convergence threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iterations", o.settings.textrank.max_iterations, "TextRank iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--threshold", o.settings.redundancy.threshold, "redundancy cosine threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--budget", o.settings.redundancy.budget, "summary length in sentences")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "seed for random choices (the built-in scorers draw none)")->capture_default_str();
}

// Returns an error message when remote mode lacks an endpoint.
std::optional<std::string> resolve_endpoint(CommonOptions& o) {
  if (o.endpoint.empty()) {
    if (const char* env = std::getenv(kEndpointEnvVar)) o.endpoint = env;
  }
  if (o.scorer == "remote" && o.endpoint.empty())
    return std::string("--scorer remote needs --endpoint or ") + kEndpointEnvVar;
  return std::nullopt;
}

PipelineConfig make_config(const CommonOptions& o) {
  PipelineConfig config;
  config.settings = o.settings;
  if (o.scorer == "remote") {
    RemoteOptions ro;
    ro.max_batch = o.remote_batch;
    auto client = std::make_shared<const RemoteScorerClient>(o.endpoint, ro);
    config.usefulness_scorer = std::make_shared<RemoteUsefulnessScorer>(client);
    config.embedder = fixed_embedder(std::make_shared<RemoteEmbedder>(client));
  } else if (o.scorer == "tfidf") {
    config.usefulness_scorer = std::make_shared<TfidfUsefulnessScorer>();
    config.embedder = tfidf_per_unit();
  } else {
    config.usefulness_scorer = std::make_shared<LexicalUsefulnessScorer>();
    config.embedder = tfidf_per_unit();
  }
  return config;
}

std::set<std::string> parse_languages(const std::string& csv) {
  std::set<std::string> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto trimmed = text::to_lower(text::trim(item));
    if (!trimmed.empty()) out.insert(trimmed);
  }
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

int cmd_summarize(CommonOptions& o, const std::string& unit_path, std::size_t unit_index,
                  const std::string& query_text, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (auto msg = resolve_endpoint(o)) {
    err << "error: " << *msg << "\nRun with --help for usage.\n";
    return kExitUserError;
  }
  const auto units = load_units(unit_path);
  if (unit_index >= units.size()) {
    err << "error: " << unit_path << " holds " << units.size() << " unit(s); index " << unit_index
        << " is out of range\n";
    return kExitUserError;
  }
  const auto& unit = units[unit_index];
  const auto query = query_text.empty() ? unit.query : TechnicalQuery::make(query_text, unit.query.tags);

  const auto result = summarize(query, unit, make_config(o));
  for (const auto& s : result.sentences) out << s.id.str() << '\t' << s.text << '\n';
  if (!out_path.empty()) write_file(out_path, summary_to_json(result));
  return kExitOk;
}

int cmd_evaluate(CommonOptions& o, const std::string& benchmark_path, const std::string& ablation,
                 const std::string& out_path, const std::string& summaries_path, const std::string& system,
                 int jobs, std::ostream& out, std::ostream& err) {
  if (auto msg = resolve_endpoint(o)) {
    err << "error: " << *msg << "\nRun with --help for usage.\n";
    return kExitUserError;
  }
  o.settings.mode = parse_ablation_mode(ablation);
  const auto entries = load_benchmark(benchmark_path);
  const auto config = make_config(o);
  const auto outcomes = summarize_benchmark(entries, config, jobs);
  const auto report = evaluate_outcomes(outcomes, entries, o.settings, system.empty() ? ablation : system);

  bool scorer_failed = false;
  bool other_failed = false;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].ok()) continue;
    err << "warning: entry " << i << " failed: " << outcomes[i].error << '\n';
    (outcomes[i].scorer_failure ? scorer_failed : other_failed) = true;
  }

  out << report_to_table(report);
  if (!out_path.empty()) {
    write_file(out_path, report_to_json(report));
  } else {
    out << report_to_json(report);
  }
  if (!summaries_path.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].ok()) {
        arr.push_back(nlohmann::json::parse(summary_to_json(*outcomes[i].result)));
      } else {
        arr.push_back({{"entry", i}, {"error", outcomes[i].error}});
      }
    }
    write_file(summaries_path, arr.dump(2) + "\n");
  }
  if (scorer_failed) return kExitScorerError;
  return other_failed ? kExitUserError : kExitOk;
}

struct DumpInputs {
  std::string posts;
  std::string postlinks;
  std::string languages = "java,python";
  std::string out;
};

int cmd_extract_units(const DumpInputs& in, std::ostream& out) {
  auto posts_stream = open_input(in.posts);
  auto links_stream = open_input(in.postlinks);
  PostsStats post_stats;
  PostLinksStats link_stats;
  const auto store = PostStore::load(posts_stream, &post_stats);
  const auto links = read_all_links(links_stream, &link_stats);

  ExtractionOptions opts;
  opts.languages = parse_languages(in.languages);
  ExtractionStats st;
  const auto units = extract_annotation_units(links, store, opts, &st);
  save_units(in.out, units);

  out << "posts read: " << post_stats.rows << " (skipped: " << post_stats.skipped_missing_body << " without body, "
      << post_stats.skipped_other_post_type << " other type, " << post_stats.skipped_malformed << " malformed)\n"
      << "duplicate links: " << link_stats.links << " (skipped: " << link_stats.skipped_other_link_type
      << " other link type, " << link_stats.skipped_self_link << " self, " << link_stats.skipped_malformed
      << " malformed)\n"
      << "original questions: " << st.originals << '\n'
      << "units kept: " << st.units_kept << '\n'
      << "dropped, original missing: " << st.dropped_missing_original << '\n'
      << "dropped, language: " << st.dropped_language << '\n'
      << "dropped, too few answers: " << st.dropped_too_few_answers << '\n'
      << "dropped, too many answers: " << st.dropped_too_many_answers << '\n'
      << "answers without votes: " << st.answers_without_votes << '\n'
      << "answers with code only: " << st.answers_code_only << '\n'
      << "missing duplicate posts: " << st.missing_duplicates << '\n';
  return kExitOk;
}

int cmd_build_triplets(const DumpInputs& in, std::uint64_t seed, bool negatives_from_all, std::ostream& out,
                       std::ostream& err) {
  auto posts_stream = open_input(in.posts);
  auto links_stream = open_input(in.postlinks);
  const auto store = PostStore::load(posts_stream);
  const auto links = read_all_links(links_stream);

  TripletOptions opts;
  opts.languages = parse_languages(in.languages);
  opts.seed = seed;
  opts.negatives_from_all_questions = negatives_from_all;

  std::ofstream file(in.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + in.out);
  TripletStats st;
  build_contrastive_triplets(
      links, store, opts, [&](const SentenceTriplet& t) { file << triplet_to_jsonl(t) << '\n'; }, &st);
  if (!file) throw Error("write failed for " + in.out);

  out << "duplicate pairs: " << st.pairs << '\n'
      << "triplets written: " << st.emitted << '\n'
      << "skipped, missing post: " << st.skipped_missing_post << '\n'
      << "skipped, language: " << st.skipped_language << '\n'
      << "skipped, no tag-disjoint negative: " << st.skipped_no_negative << '\n';
  if (st.skipped_no_negative > 0)
    err << "warning: " << st.skipped_no_negative << " pair(s) had no tag-disjoint negative\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Query-focused extractive summarisation of technical answers", "answersum"};
  app.require_subcommand(1);

  CommonOptions summarize_opts;
  std::string unit_path, query_text, summary_out;
  std::size_t unit_index = 0;
  auto* summarize_cmd = app.add_subcommand("summarize", "summarise one annotation unit");
  summarize_cmd->add_option("--unit", unit_path, "annotation unit JSON file")->required();
  summarize_cmd->add_option("--unit-index", unit_index, "which unit when the file holds several")
      ->capture_default_str();
  summarize_cmd->add_option("--query", query_text, "query text (defaults to the unit's query)");
  summarize_cmd->add_option("--out", summary_out, "write the SummaryResult JSON here");
  add_pipeline_flags(summarize_cmd, summarize_opts);

  CommonOptions evaluate_opts;
  std::string benchmark_path, ablation = "full", report_out, summaries_out, system;
  int jobs = 1;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "summarise a benchmark and score it with ROUGE");
  evaluate_cmd->add_option("--benchmark", benchmark_path, "benchmark JSON file")->required();
  evaluate_cmd->add_option("--ablation", ablation, "pipeline stages to run")
      ->check(CLI::IsMember({"stage1", "stage12", "full"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--out", report_out, "write the ROUGE report JSON here (default: stdout)");
  evaluate_cmd->add_option("--summaries", summaries_out, "write every SummaryResult as a JSON array here");
  evaluate_cmd->add_option("--system", system, "system name in the report (default: the ablation mode)");
  evaluate_cmd->add_option("--jobs", jobs, "entries summarised in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_pipeline_flags(evaluate_cmd, evaluate_opts);

  DumpInputs units_in;
  auto* units_cmd = app.add_subcommand("extract-units", "mine annotation units from dump files");
  units_cmd->add_option("--posts", units_in.posts, "Posts.xml")->required();
  units_cmd->add_option("--postlinks", units_in.postlinks, "PostLinks.xml")->required();
  units_cmd->add_option("--languages", units_in.languages, "comma-separated language tags")->capture_default_str();
  units_cmd->add_option("--out", units_in.out, "output units JSON")->required();

  DumpInputs triplets_in;
  std::uint64_t triplet_seed = 42;
  bool negatives_from_all = false;
  auto* triplets_cmd = app.add_subcommand("build-triplets", "mine contrastive title triplets from dump files");
  triplets_cmd->add_option("--posts", triplets_in.posts, "Posts.xml")->required();
  triplets_cmd->add_option("--postlinks", triplets_in.postlinks, "PostLinks.xml")->required();
  triplets_cmd->add_option("--languages", triplets_in.languages, "comma-separated language tags")
      ->capture_default_str();
  triplets_cmd->add_option("--seed", triplet_seed, "seed for negative sampling")->capture_default_str();
  triplets_cmd->add_flag("--negatives-from-all", negatives_from_all,
                         "sample negatives from every question, not only language-tagged ones");
  triplets_cmd->add_option("--out", triplets_in.out, "output JSON-lines file")->required();

  std::vector<std::string> reversed;
  if (args.size() > 1) reversed.assign(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUserError;
  }

  try {
    if (*summarize_cmd) {
      return cmd_summarize(summarize_opts, unit_path, unit_index, query_text, summary_out, out, err);
    }
    if (*evaluate_cmd) {
      return cmd_evaluate(evaluate_opts, benchmark_path, ablation, report_out, summaries_out, system, jobs, out,
                          err);
    }
    if (*units_cmd) return cmd_extract_units(units_in, out);
    if (*triplets_cmd) return cmd_build_triplets(triplets_in, triplet_seed, negatives_from_all, out, err);
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << '\n';
    return e.scorer_failure() ? kExitScorerError : kExitUserError;
  } catch (const ProtocolError& e) {
    err << "error: scorer protocol: " << e.what() << '\n';
    return kExitScorerError;
  } catch (const TransportError& e) {
    err << "error: scorer transport: " << e.what() << '\n';
    return kExitScorerError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  }
  return kExitUserError;
}

}  // namespace answersum::cli
