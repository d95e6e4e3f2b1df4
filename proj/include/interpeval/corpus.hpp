#ifndef INTERPEVAL_CORPUS_HPP_
#define INTERPEVAL_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace interpeval {

enum class TranslationKind { H, M };

const char* to_string(TranslationKind kind);
std::optional<TranslationKind> parse_translation_kind(std::string_view s);

enum class SpeakerGender { male, female, unknown };
enum class SpeakerAccent { native, nonnative, unknown };
enum class Genre { corporate, political, general, unknown };

struct SpeechMeta {
  std::string speech_id;
  SpeakerGender speaker_gender = SpeakerGender::unknown;
  SpeakerAccent speaker_accent = SpeakerAccent::unknown;
  Genre genre = Genre::unknown;
};

// One aligned source/target unit. source_text and target_text are stored
// normalized (NFC, control characters handled) and are never empty in a
// valid corpus.
struct SegmentPair {
  std::string speech_id;
  int segment_index = 0;
  std::string source_text;
  std::string target_text;
  TranslationKind translation_kind = TranslationKind::H;
};

struct Corpus {
  std::vector<SpeechMeta> speeches;
  std::vector<SegmentPair> segments;

  const SpeechMeta* find_speech(std::string_view speech_id) const;

  // Segments of one (speech, kind), ordered by segment_index.
  std::vector<const SegmentPair*> segments_of(std::string_view speech_id,
                                              TranslationKind kind) const;
};

struct Violation {
  std::string location;  // e.g. "speech=s1 kind=H segment=3"
  std::string message;
};

using ValidationReport = std::vector<Violation>;

enum class CorpusFormat { jsonl };

// Loads and fully validates a JSON Lines corpus. Any invariant violation is
// an error with the offending line number where one is known.
Corpus load_corpus(const std::filesystem::path& path,
                   CorpusFormat format = CorpusFormat::jsonl);

// Parses a corpus from an already-read JSONL payload; `origin` names the
// source in error messages.
Corpus parse_corpus(std::string_view jsonl, std::string_view origin = "<input>");

// Checks every corpus invariant and reports each violation with its
// location. An empty report means the corpus is valid. Violations are data,
// not exceptions.
ValidationReport validate_corpus(const Corpus& corpus);

// JSONL serialization; load_corpus(serialize_corpus(c)) round-trips valid
// corpora with order preserved.
std::string serialize_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct SideTotals {
  std::size_t segments = 0;
  std::size_t source_tokens = 0;
  std::size_t target_tokens = 0;
};

struct SpeechStats {
  std::string speech_id;
  std::map<TranslationKind, SideTotals> per_kind;
};

struct CorpusStats {
  std::vector<SpeechStats> per_speech;
  std::map<TranslationKind, SideTotals> totals_per_kind;
  // Source-side totals counted once per distinct (speech, segment_index),
  // not doubled across translation kinds.
  std::size_t distinct_source_segments = 0;
  std::size_t distinct_source_tokens = 0;
  double mean_source_segment_length = 0.0;  // tokens per distinct segment
};

CorpusStats corpus_stats(const Corpus& corpus);

std::ostream& operator<<(std::ostream& os, const CorpusStats& stats);

}  // namespace interpeval

#endif  // INTERPEVAL_CORPUS_HPP_
