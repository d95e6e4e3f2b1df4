#ifndef INTERPEVAL_RATINGS_HPP_
#define INTERPEVAL_RATINGS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "interpeval/corpus.hpp"

namespace interpeval {

enum class RaterKind { professional, bilingual, unknown };

struct RaterMeta {
  std::string rater_id;
  RaterKind rater_kind = RaterKind::unknown;
};

enum class Dimension { accuracy, intelligibility };

const char* to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);

// Rated unit: a whole speech (no index) or one segment.
struct RatingUnit {
  std::optional<int> segment_index;

  bool is_speech() const { return !segment_index.has_value(); }
  static RatingUnit speech() { return {}; }
  static RatingUnit segment(int index) { return {index}; }

  friend bool operator==(const RatingUnit&, const RatingUnit&) = default;
  friend auto operator<=>(const RatingUnit&, const RatingUnit&) = default;
};

// One rater's six-point Likert judgment of one unit.
struct HumanRating {
  std::string rater_id;
  std::string speech_id;
  TranslationKind translation_kind = TranslationKind::H;
  RatingUnit unit;
  Dimension dimension = Dimension::accuracy;
  int score = 0;  // 1..6
};

struct RatingTable {
  std::vector<RaterMeta> raters;
  std::vector<HumanRating> ratings;
};

// CSV columns: rater_id,rater_kind,speech_id,translation_kind,segment_index,
// dimension,score. An empty segment_index marks a whole-speech rating.
RatingTable load_ratings(const std::filesystem::path& path);
RatingTable parse_ratings(std::string_view csv_text, std::string_view origin = "<input>");

std::string serialize_ratings(const RatingTable& table);
void save_ratings(const RatingTable& table, const std::filesystem::path& path);

struct MeanRating {
  double mean = 0.0;  // in [1, 6]
  std::size_t rater_count = 0;
};

// Arithmetic mean over every rater that judged the given unit. Throws
// DataError when no rating matches.
MeanRating mean_rating(const RatingTable& table, std::string_view speech_id,
                       TranslationKind kind, const RatingUnit& unit,
                       Dimension dimension = Dimension::accuracy);

enum class RatingGranularity { segment, speech };

const char* to_string(RatingGranularity g);
std::optional<RatingGranularity> parse_granularity(std::string_view s);

struct AgreementItem {
  std::string speech_id;
  TranslationKind translation_kind = TranslationKind::H;
  RatingUnit unit;

  std::string describe() const;
};

struct AgreementMatrix {
  std::vector<AgreementItem> items;
  // One row per item, columns are Likert categories 1..6; cell = number of
  // raters who assigned that category. Row sums equal per-item rater counts.
  std::vector<std::array<int, 6>> counts;
  // Items dropped for having fewer than 2 raters, with the reason.
  std::vector<std::pair<AgreementItem, std::string>> excluded;
};

// Builds the item x category agreement matrix at the requested granularity.
AgreementMatrix rating_matrix(const RatingTable& table, RatingGranularity granularity,
                              Dimension dimension = Dimension::accuracy);

// Restricts an agreement matrix to rows with the most common rater count so
// it satisfies the equal-rater-count requirement of Fleiss' kappa; dropped
// rows are moved to `excluded`. Ties prefer the larger count.
AgreementMatrix equalize_rater_counts(AgreementMatrix matrix);

}  // namespace interpeval

#endif  // INTERPEVAL_RATINGS_HPP_
