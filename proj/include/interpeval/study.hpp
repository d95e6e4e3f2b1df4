#ifndef INTERPEVAL_STUDY_HPP_
#define INTERPEVAL_STUDY_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interpeval/backends.hpp"
#include "interpeval/corpus.hpp"
#include "interpeval/judge.hpp"
#include "interpeval/ratings.hpp"
#include "interpeval/similarity.hpp"
#include "interpeval/stats.hpp"
#include "interpeval/windowing.hpp"

namespace interpeval {

inline constexpr std::string_view kVersion = "0.1.0";

enum class MethodMode { embedding_cosine, llm_judge };

const char* to_string(MethodMode m);
std::optional<MethodMode> parse_method_mode(std::string_view s);

struct MethodSpec {
  std::string method_id;
  std::string backend_id;
  MethodMode mode = MethodMode::embedding_cosine;
  // llm_judge only; the built-in template is used when absent.
  std::optional<std::string> prompt_template;
};

enum class CorrelationUnit { per_speech, pooled };

const char* to_string(CorrelationUnit u);
std::optional<CorrelationUnit> parse_correlation_unit(std::string_view s);

struct StudyConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path ratings_path;
  RatingGranularity granularity = RatingGranularity::segment;
  Dimension dimension = Dimension::accuracy;
  std::vector<MethodSpec> methods;
  std::vector<BackendConfig> backends;
  std::vector<int> window_sizes = {1, 2, 3, 4, 5};
  WindowPolicy policy = WindowPolicy::tumbling;
  CorrelationUnit unit = CorrelationUnit::per_speech;
  std::filesystem::path output_dir;
  // Seeds mock backends: a mock backend whose own mock_seed is 0 (the
  // default) gets hash64(seed, backend_id). Remote backends are
  // cache-reproducible, not seed-reproducible.
  std::uint64_t seed = 0;
  int judge_retries = 2;
  // Fraction of judge windows allowed to fail before the run aborts.
  double judge_failure_threshold = 0.05;
};

// Structural checks only (methods nonempty and unique, backends resolvable,
// modes compatible with backend kinds, window sizes distinct and positive).
void validate_study_config(const StudyConfig& config);

struct MatrixRow {
  std::string speech_id;
  TranslationKind translation_kind = TranslationKind::H;
  std::string method_id;
  int window_size = 1;
  int window_index = 0;
  double machine_score = 0.0;
  double human_score = 0.0;
};

struct Omission {
  std::string speech_id;
  TranslationKind translation_kind = TranslationKind::H;
  std::string method_id;
  int window_size = 1;
  int window_index = 0;
  // missing_rating | judge_unparseable | judge_out_of_range |
  // judge_backend_error
  std::string reason;
};

// Joined machine and human scores. Every candidate window lands in exactly
// one of rows / omissions, so counts are conserved.
struct EvaluationMatrix {
  std::vector<MatrixRow> rows;
  std::vector<Omission> omissions;
};

// Scores every (speech, kind, method, window size) combination and joins the
// machine scores with windowed human consensus ratings. Rows are produced in
// canonical order (method_id, speech_id, kind, window_size, window_index).
// Throws ConfigError when the join yields zero rows and DataError when judge
// failures exceed the configured threshold.
EvaluationMatrix assemble_matrix(const StudyConfig& config, const Corpus& corpus,
                                 const RatingTable& ratings, BackendSet& backends);

inline constexpr std::string_view kPooledSpeechId = "pooled";

struct CorrelationRecord {
  std::string method_id;
  TranslationKind translation_kind = TranslationKind::H;
  int window_size = 1;
  std::string speech_id;     // kPooledSpeechId under the pooled unit
  std::optional<double> r;   // present iff status == "ok"
  std::size_t n = 0;
  std::string status;        // ok | insufficient_n | zero_variance
};

// One Pearson r per (method, kind, window size[, speech]) cell. Cells with
// fewer than 3 rows or a constant side are flagged, never silently skipped.
std::vector<CorrelationRecord> correlate(const EvaluationMatrix& matrix,
                                         CorrelationUnit unit);

struct MethodSummary {
  std::string method_id;
  std::size_t n = 0;  // correlation cells contributing
  FiveNumberSummary summary;
};

// Distribution of r per method over all ok cells, ordered by method_id.
// Methods without ok cells are omitted (run_study records a note).
std::vector<MethodSummary> summarize_by_method(
    const std::vector<CorrelationRecord>& records);

struct KindMean {
  std::string method_id;
  TranslationKind translation_kind = TranslationKind::H;
  double mean_r = 0.0;
  std::size_t n = 0;
};

// Mean r per (method, translation kind) over ok cells.
std::vector<KindMean> compare_kinds(const std::vector<CorrelationRecord>& records);

struct WindowPoint {
  std::string method_id;
  TranslationKind translation_kind = TranslationKind::H;
  int window_size = 1;
  std::optional<double> mean_r;  // absent marks an explicit gap
  std::size_t n = 0;
};

// Mean r by window size per (method, kind), ascending in size. Every size in
// `sizes` yields a point; sizes without ok cells are explicit gaps.
std::vector<WindowPoint> window_series(const std::vector<CorrelationRecord>& records,
                                       std::vector<int> sizes);

struct StudyResult {
  EvaluationMatrix matrix;
  std::vector<CorrelationRecord> correlations;
  std::vector<MethodSummary> method_summaries;
  std::vector<KindMean> kind_means;
  std::vector<WindowPoint> series;
  std::vector<std::string> notes;
};

// Full pipeline: load, score, join, correlate, summarize, and write every
// output file (matrix.csv, correlations.csv, summary_by_method.csv,
// kind_comparison.csv, window_series.csv, omissions.csv, study.json) under
// config.output_dir. Outputs are byte-stable for a fixed config, seed and
// warm cache.
StudyResult run_study(const StudyConfig& config);

// Backend configs with mock seeds resolved: a mock backend whose mock_seed
// is 0 gets hash64(config.seed, backend_id).
std::vector<BackendConfig> resolve_backend_seeds(const StudyConfig& config);

void write_matrix_csv(const EvaluationMatrix& matrix, const std::filesystem::path& path);
// Reads rows back from matrix.csv; omissions are not round-tripped.
EvaluationMatrix read_matrix_csv(const std::filesystem::path& path);
void write_omissions_csv(const EvaluationMatrix& matrix,
                         const std::filesystem::path& path);
void write_correlations_csv(const std::vector<CorrelationRecord>& records,
                            const std::filesystem::path& path);
std::vector<CorrelationRecord> read_correlations_csv(const std::filesystem::path& path);
void write_summary_csv(const std::vector<MethodSummary>& summaries,
                       const std::filesystem::path& path);
void write_kind_comparison_csv(const std::vector<KindMean>& means,
                               const std::filesystem::path& path);
void write_window_series_csv(const std::vector<WindowPoint>& points,
                             const std::filesystem::path& path);
void write_study_json(const StudyConfig& config, const StudyResult& result,
                      const std::filesystem::path& path);

}  // namespace interpeval

#endif  // INTERPEVAL_STUDY_HPP_
