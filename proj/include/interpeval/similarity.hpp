#ifndef INTERPEVAL_SIMILARITY_HPP_
#define INTERPEVAL_SIMILARITY_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interpeval/backends.hpp"
#include "interpeval/windowing.hpp"

namespace interpeval {

enum class ScoreScale { cosine, likert5 };

const char* to_string(ScoreScale s);
std::optional<ScoreScale> parse_score_scale(std::string_view s);

// One machine judgment of one window. cosine values lie in [-1,1], likert5
// values in {1..5}.
struct SimilarityScore {
  std::string speech_id;
  TranslationKind translation_kind = TranslationKind::H;
  std::string method_id;
  int window_size = 1;
  int window_index = 0;
  ScoreScale scale = ScoreScale::cosine;
  double value = 0.0;
};

// Normalized dot product, accumulated in long double and clamped to [-1,1]
// to absorb rounding. Throws DataError on dimension mismatch or a zero-norm
// input.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Embeds every window's source and target and records their cosine, tagged
// with method_id. Output order matches input order; backend errors are
// rethrown annotated with the window that failed.
std::vector<SimilarityScore> score_windows(Backend& backend,
                                           const std::vector<WindowedPair>& windows,
                                           const std::string& method_id);

// CSV schema shared by cosine and judge scores:
// speech_id,translation_kind,method_id,window_size,window_index,scale,value
void write_scores_csv(const std::vector<SimilarityScore>& scores,
                      const std::filesystem::path& path);
std::vector<SimilarityScore> read_scores_csv(const std::filesystem::path& path);

// Canonical row order for deterministic exports: method_id, speech_id,
// translation_kind, window_size, window_index.
void sort_scores(std::vector<SimilarityScore>& scores);

}  // namespace interpeval

#endif  // INTERPEVAL_SIMILARITY_HPP_
