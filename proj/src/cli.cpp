#include "interpeval/cli.hpp"

#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "interpeval/config.hpp"
#include "interpeval/corpus.hpp"
#include "interpeval/csv.hpp"
#include "interpeval/error.hpp"
#include "interpeval/judge.hpp"
#include "interpeval/ratings.hpp"
#include "interpeval/similarity.hpp"
#include "interpeval/stats.hpp"
#include "interpeval/study.hpp"
#include "interpeval/windowing.hpp"

namespace interpeval {

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::vector<int> window_sizes;
  std::string policy;
  std::string granularity;
  std::string dimension;
  std::string unit;
  std::string method_id;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

// Flags win over the config file.
void apply_overrides(StudyConfig& config, const CommonFlags& flags) {
  if (!flags.window_sizes.empty()) {
    config.window_sizes = flags.window_sizes;
  }
  if (!flags.policy.empty()) {
    const auto parsed = parse_window_policy(flags.policy);
    if (!parsed) {
      throw ConfigError("unknown window policy \"" + flags.policy + "\"");
    }
    config.policy = *parsed;
  }
  if (!flags.granularity.empty()) {
    const auto parsed = parse_granularity(flags.granularity);
    if (!parsed) {
      throw ConfigError("unknown granularity \"" + flags.granularity + "\"");
    }
    config.granularity = *parsed;
  }
  if (!flags.dimension.empty()) {
    const auto parsed = parse_dimension(flags.dimension);
    if (!parsed) {
      throw ConfigError("unknown dimension \"" + flags.dimension + "\"");
    }
    config.dimension = *parsed;
  }
  if (!flags.unit.empty()) {
    const auto parsed = parse_correlation_unit(flags.unit);
    if (!parsed) {
      throw ConfigError("unknown correlation unit \"" + flags.unit + "\"");
    }
    config.unit = *parsed;
  }
  if (flags.seed) {
    config.seed = *flags.seed;
  }
  if (!flags.out_path.empty()) {
    config.output_dir = flags.out_path;
  }
}

const MethodSpec& find_method(const StudyConfig& config, const std::string& method_id) {
  for (const auto& m : config.methods) {
    if (m.method_id == method_id) {
      return m;
    }
  }
  throw ConfigError("config defines no method \"" + method_id + "\"");
}

// Windows for every (speech, kind, size) of the corpus, grouped per cell so
// scoring stays batched the same way the study runner batches it.
std::vector<std::vector<WindowedPair>> corpus_windows(const Corpus& corpus,
                                                      const std::vector<int>& sizes,
                                                      WindowPolicy policy) {
  std::vector<std::vector<WindowedPair>> groups;
  for (const auto& speech : corpus.speeches) {
    for (TranslationKind kind : {TranslationKind::H, TranslationKind::M}) {
      const auto segments = corpus.segments_of(speech.speech_id, kind);
      if (segments.empty()) {
        continue;
      }
      for (int k : sizes) {
        auto windows = build_windows(segments, {k, policy});
        if (!windows.empty()) {
          groups.push_back(std::move(windows));
        }
      }
    }
  }
  return groups;
}

int cmd_validate(const std::string& corpus_path, const std::string& ratings_path,
                 std::ostream& out) {
  const Corpus corpus = load_corpus(corpus_path);
  out << "OK, " << corpus.segments.size() << " segments\n";
  if (!ratings_path.empty()) {
    const RatingTable ratings = load_ratings(ratings_path);
    for (const auto& rating : ratings.ratings) {
      if (corpus.find_speech(rating.speech_id) == nullptr) {
        throw DataError("rating by " + rating.rater_id + " references unknown speech \"" +
                        rating.speech_id + "\"");
      }
      if (!rating.unit.is_speech()) {
        const auto segments =
            corpus.segments_of(rating.speech_id, rating.translation_kind);
        const int index = *rating.unit.segment_index;
        const bool known =
            index >= 0 && static_cast<std::size_t>(index) < segments.size();
        if (!known) {
          throw DataError("rating by " + rating.rater_id + " references segment " +
                          std::to_string(index) + " missing from speech \"" +
                          rating.speech_id + "\" (" +
                          to_string(rating.translation_kind) + ")");
        }
      }
    }
    out << "OK, " << ratings.ratings.size() << " ratings from "
        << ratings.raters.size() << " raters\n";
  }
  return 0;
}

int cmd_stats(const std::string& corpus_path, std::ostream& out) {
  const Corpus corpus = load_corpus(corpus_path);
  out << corpus_stats(corpus);
  return 0;
}

int cmd_score(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  StudyConfig config = load_study_config(flags.config_path);
  apply_overrides(config, flags);
  validate_study_config(config);
  const MethodSpec& method = find_method(config, flags.method_id);
  if (method.mode != MethodMode::embedding_cosine) {
    throw ConfigError("method \"" + method.method_id +
                      "\" is not an embedding_cosine method; use the judge subcommand");
  }
  if (flags.out_path.empty()) {
    throw ConfigError("score needs --out FILE");
  }

  const Corpus corpus = load_corpus(config.corpus_path);
  BackendSet backends(resolve_backend_seeds(config));
  Backend& backend = backends.at(method.backend_id);

  std::vector<SimilarityScore> scores;
  for (const auto& group : corpus_windows(corpus, config.window_sizes, config.policy)) {
    if (flags.verbose) {
      err << "scoring speech " << group.front().speech_id << " ("
          << to_string(group.front().translation_kind) << ", k="
          << group.front().window_size << ", " << group.size() << " windows)\n";
    }
    auto batch = score_windows(backend, group, method.method_id);
    scores.insert(scores.end(), batch.begin(), batch.end());
  }
  sort_scores(scores);
  write_scores_csv(scores, flags.out_path);
  out << "wrote " << scores.size() << " scores to " << flags.out_path << "\n";
  return 0;
}

int cmd_judge(const CommonFlags& flags, const std::string& failures_path,
              std::ostream& out, std::ostream& err) {
  StudyConfig config = load_study_config(flags.config_path);
  apply_overrides(config, flags);
  validate_study_config(config);
  const MethodSpec& method = find_method(config, flags.method_id);
  if (method.mode != MethodMode::llm_judge) {
    throw ConfigError("method \"" + method.method_id +
                      "\" is not an llm_judge method; use the score subcommand");
  }
  if (flags.out_path.empty()) {
    throw ConfigError("judge needs --out FILE");
  }

  const Corpus corpus = load_corpus(config.corpus_path);
  BackendSet backends(resolve_backend_seeds(config));
  Backend& backend = backends.at(method.backend_id);
  PromptTemplate tmpl = default_prompt_template();
  if (method.prompt_template) {
    tmpl = {method.method_id, *method.prompt_template};
  }

  std::vector<JudgedWindow> judged;
  for (const auto& group : corpus_windows(corpus, config.window_sizes, config.policy)) {
    if (flags.verbose) {
      err << "judging speech " << group.front().speech_id << " ("
          << to_string(group.front().translation_kind) << ", k="
          << group.front().window_size << ", " << group.size() << " windows)\n";
    }
    auto batch = judge_windows(backend, tmpl, group, config.judge_retries);
    judged.insert(judged.end(), batch.begin(), batch.end());
  }

  auto scores = judged_scores(judged, method.method_id);
  sort_scores(scores);
  write_scores_csv(scores, flags.out_path);

  std::string sidecar = failures_path;
  if (sidecar.empty()) {
    std::filesystem::path p(flags.out_path);
    p.replace_extension();
    sidecar = p.string() + "_failures.csv";
  }
  write_failures_csv(judged, method.method_id, sidecar);

  const std::size_t failed = judged.size() - scores.size();
  out << "wrote " << scores.size() << " scores to " << flags.out_path << ", " << failed
      << " failures to " << sidecar << "\n";
  return 0;
}

int cmd_kappa(const std::string& ratings_path, const CommonFlags& flags,
              std::ostream& out) {
  const RatingTable ratings = load_ratings(ratings_path);
  RatingGranularity granularity = RatingGranularity::segment;
  if (!flags.granularity.empty()) {
    const auto parsed = parse_granularity(flags.granularity);
    if (!parsed) {
      throw ConfigError("unknown granularity \"" + flags.granularity + "\"");
    }
    granularity = *parsed;
  }
  Dimension dimension = Dimension::accuracy;
  if (!flags.dimension.empty()) {
    const auto parsed = parse_dimension(flags.dimension);
    if (!parsed) {
      throw ConfigError("unknown dimension \"" + flags.dimension + "\"");
    }
    dimension = *parsed;
  }

  AgreementMatrix matrix =
      equalize_rater_counts(rating_matrix(ratings, granularity, dimension));
  std::vector<std::vector<int>> counts;
  counts.reserve(matrix.counts.size());
  for (const auto& row : matrix.counts) {
    counts.emplace_back(row.begin(), row.end());
  }
  const KappaResult result = fleiss_kappa(counts);
  out << "fleiss_kappa=" << csv::format_double(result.kappa)
      << " items=" << result.n_items << " raters_per_item=" << result.n_raters
      << " categories=" << result.n_categories << " excluded_items="
      << matrix.excluded.size() << "\n";
  if (flags.verbose) {
    for (const auto& [item, reason] : matrix.excluded) {
      out << "excluded: " << item.describe() << " (" << reason << ")\n";
    }
  }
  return 0;
}

int cmd_correlate(const std::string& matrix_path, const CommonFlags& flags,
                  std::ostream& out) {
  if (flags.out_path.empty()) {
    throw ConfigError("correlate needs --out FILE");
  }
  CorrelationUnit unit = CorrelationUnit::per_speech;
  if (!flags.unit.empty()) {
    const auto parsed = parse_correlation_unit(flags.unit);
    if (!parsed) {
      throw ConfigError("unknown correlation unit \"" + flags.unit + "\"");
    }
    unit = *parsed;
  }
  const EvaluationMatrix matrix = read_matrix_csv(matrix_path);
  const auto records = correlate(matrix, unit);
  write_correlations_csv(records, flags.out_path);
  std::size_t ok = 0;
  for (const auto& record : records) {
    if (record.r) {
      ++ok;
    }
  }
  out << "wrote " << records.size() << " correlation cells (" << ok << " ok) to "
      << flags.out_path << "\n";
  return 0;
}

int cmd_report(const std::string& study_dir, std::ostream& out) {
  const std::filesystem::path dir(study_dir);
  const auto records = read_correlations_csv(dir / "correlations.csv");

  std::vector<int> sizes;
  for (const auto& record : records) {
    sizes.push_back(record.window_size);
  }

  write_summary_csv(summarize_by_method(records), dir / "summary_by_method.csv");
  write_kind_comparison_csv(compare_kinds(records), dir / "kind_comparison.csv");
  write_window_series_csv(window_series(records, sizes), dir / "window_series.csv");
  out << "wrote summary_by_method.csv, kind_comparison.csv, window_series.csv under "
      << dir.string() << "\n";
  return 0;
}

int cmd_run(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  StudyConfig config = load_study_config(flags.config_path);
  apply_overrides(config, flags);
  const StudyResult result = run_study(config);

  std::size_t ok = 0;
  for (const auto& record : result.correlations) {
    if (record.r) {
      ++ok;
    }
  }
  out << "study complete: " << result.matrix.rows.size() << " matrix rows, "
      << result.matrix.omissions.size() << " omissions, " << result.correlations.size()
      << " correlation cells (" << ok << " ok)\n";
  out << "outputs under " << config.output_dir.string() << "\n";
  if (flags.verbose) {
    for (const auto& note : result.notes) {
      err << "note: " << note << "\n";
    }
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reference-free accuracy scoring for simultaneous interpretation"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string corpus_path;
  std::string ratings_path;
  std::string matrix_path;
  std::string study_dir;
  std::string failures_path;

  app.add_flag("-v,--verbose", flags.verbose, "Progress and notes on stderr");

  auto* validate = app.add_subcommand("validate", "Check a corpus (and optional ratings)");
  validate->add_option("--corpus", corpus_path, "Corpus JSONL file")->required();
  validate->add_option("--ratings", ratings_path, "Ratings CSV to cross-check");

  auto* stats = app.add_subcommand("stats", "Corpus segment and token statistics");
  stats->add_option("--corpus", corpus_path, "Corpus JSONL file")->required();

  auto* score = app.add_subcommand("score", "Cosine-score windows with an embeddings method");
  score->add_option("--config", flags.config_path, "Study config file")->required();
  score->add_option("--method", flags.method_id, "method_id from the config")->required();
  score->add_option("--out", flags.out_path, "Output scores CSV")->required();
  score->add_option("--window-sizes", flags.window_sizes, "Override window sizes")
      ->delimiter(',');
  score->add_option("--policy", flags.policy, "tumbling or sliding");
  score->add_option("--seed", flags.seed, "Override the study seed");

  auto* judge = app.add_subcommand("judge", "Judge windows with an LLM chat method");
  judge->add_option("--config", flags.config_path, "Study config file")->required();
  judge->add_option("--method", flags.method_id, "method_id from the config")->required();
  judge->add_option("--out", flags.out_path, "Output scores CSV")->required();
  judge->add_option("--failures", failures_path, "Failures sidecar CSV");
  judge->add_option("--window-sizes", flags.window_sizes, "Override window sizes")
      ->delimiter(',');
  judge->add_option("--policy", flags.policy, "tumbling or sliding");
  judge->add_option("--seed", flags.seed, "Override the study seed");

  auto* kappa = app.add_subcommand("kappa", "Fleiss' kappa over human ratings");
  kappa->add_option("--ratings", ratings_path, "Ratings CSV file")->required();
  kappa->add_option("--granularity", flags.granularity, "segment or speech");
  kappa->add_option("--dimension", flags.dimension, "accuracy or intelligibility");

  auto* correlate = app.add_subcommand("correlate", "Pearson r over an evaluation matrix");
  correlate->add_option("--matrix", matrix_path, "matrix.csv produced by run")->required();
  correlate->add_option("--unit", flags.unit, "per_speech or pooled");
  correlate->add_option("--out", flags.out_path, "Output correlations CSV")->required();

  auto* report = app.add_subcommand("report", "Regenerate plot-ready summaries");
  report->add_option("--study-dir", study_dir, "Directory holding correlations.csv")
      ->required();

  auto* run = app.add_subcommand("run", "Execute the full study pipeline");
  run->add_option("--config", flags.config_path, "Study config file")->required();
  run->add_option("--out", flags.out_path, "Override the output directory");
  run->add_option("--seed", flags.seed, "Override the study seed");
  run->add_option("--unit", flags.unit, "Override the correlation unit");
  run->add_option("--policy", flags.policy, "Override the window policy");
  run->add_option("--granularity", flags.granularity, "Override the rating granularity");
  run->add_option("--window-sizes", flags.window_sizes, "Override window sizes")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    nlohmann::json line = {{"error", "config"}, {"message", e.what()}};
    err << line.dump() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) {
      return cmd_validate(corpus_path, ratings_path, out);
    }
    if (stats->parsed()) {
      return cmd_stats(corpus_path, out);
    }
    if (score->parsed()) {
      return cmd_score(flags, out, err);
    }
    if (judge->parsed()) {
      return cmd_judge(flags, failures_path, out, err);
    }
    if (kappa->parsed()) {
      return cmd_kappa(ratings_path, flags, out);
    }
    if (correlate->parsed()) {
      return cmd_correlate(matrix_path, flags, out);
    }
    if (report->parsed()) {
      return cmd_report(study_dir, out);
    }
    if (run->parsed()) {
      return cmd_run(flags, out, err);
    }
    throw ConfigError("no subcommand given");
  } catch (const Error& e) {
    nlohmann::json line = {{"error", error_kind_name(e.kind())}, {"message", e.what()}};
    err << line.dump() << "\n";
    switch (e.kind()) {
      case ErrorKind::data: return 1;
      case ErrorKind::config: return 2;
      case ErrorKind::backend: return 3;
    }
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json line = {{"error", "data"}, {"message", e.what()}};
    err << line.dump() << "\n";
    return 1;
  }
}

}  // namespace interpeval
