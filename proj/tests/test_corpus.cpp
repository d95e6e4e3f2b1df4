#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "interpeval/corpus.hpp"
#include "interpeval/error.hpp"
#include "interpeval/text.hpp"
#include "test_util.hpp"

using interpeval::Corpus;
using interpeval::DataError;
using interpeval::TranslationKind;

namespace {

std::string speech_line(const std::string& id) {
  return R"({"type": "speech", "speech_id": ")" + id + R"("})" + "\n";
}

std::string segment_line(const std::string& speech, int index, const std::string& kind,
                         const std::string& source, const std::string& target) {
  return R"({"type": "segment", "speech_id": ")" + speech +
         R"(", "segment_index": )" + std::to_string(index) +
         R"(, "translation_kind": ")" + kind +
         R"(", "source_text": ")" + source +
         R"(", "target_text": ")" + target + R"("})" + "\n";
}

}  // namespace

TEST_CASE("toy corpus loads with every speech and segment") {
  const Corpus corpus = interpeval::load_corpus(testutil::data_dir() / "toy_corpus.jsonl");
  CHECK(corpus.speeches.size() == 2);
  CHECK(corpus.segments.size() == 12);
  CHECK(interpeval::validate_corpus(corpus).empty());

  REQUIRE(corpus.find_speech("s01") != nullptr);
  CHECK(corpus.find_speech("s01")->genre == interpeval::Genre::corporate);
  CHECK(corpus.find_speech("nope") == nullptr);

  const auto human = corpus.segments_of("s01", TranslationKind::H);
  const auto machine = corpus.segments_of("s01", TranslationKind::M);
  REQUIRE(human.size() == 3);
  REQUIRE(machine.size() == 3);
  for (std::size_t i = 0; i < human.size(); ++i) {
    CHECK(human[i]->segment_index == static_cast<int>(i));
    CHECK(human[i]->source_text == machine[i]->source_text);
    CHECK(human[i]->target_text != machine[i]->target_text);
  }
}

TEST_CASE("segment indices must be contiguous from zero") {
  const std::string jsonl = speech_line("s1") +
                            segment_line("s1", 0, "H", "a b", "c d") +
                            segment_line("s1", 2, "H", "e f", "g h");
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(jsonl),
                       doctest::Contains("non-contiguous"), DataError);
}

TEST_CASE("empty target text is a validation error") {
  const std::string jsonl =
      speech_line("s1") + segment_line("s1", 0, "H", "hello there", "");
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(jsonl),
                       doctest::Contains("empty target_text"), DataError);
}

TEST_CASE("segment count mismatch across kinds is rejected") {
  const std::string jsonl = speech_line("s1") +
                            segment_line("s1", 0, "H", "one", "uno") +
                            segment_line("s1", 1, "H", "two", "dos") +
                            segment_line("s1", 0, "M", "one", "uno auto");
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(jsonl),
                       doctest::Contains("segment count differs"), DataError);
}

TEST_CASE("source text must match across translation kinds") {
  const std::string jsonl = speech_line("s1") +
                            segment_line("s1", 0, "H", "one", "uno") +
                            segment_line("s1", 0, "M", "oneX", "uno auto");
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(jsonl),
                       doctest::Contains("source_text differs"), DataError);
}

TEST_CASE("malformed records carry their line number") {
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus("{not json}\n", "bad.jsonl"),
                       doctest::Contains("bad.jsonl:1"), DataError);
  const std::string unknown = speech_line("s1") + R"({"type": "mystery"})" + "\n";
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(unknown),
                       doctest::Contains("unknown record type"), DataError);
  const std::string undeclared = segment_line("ghost", 0, "H", "a", "b");
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(undeclared),
                       doctest::Contains("undeclared speech_id"), DataError);
  const std::string dup = speech_line("s1") +
                          segment_line("s1", 0, "H", "a", "b") +
                          segment_line("s1", 0, "H", "a", "b");
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(dup),
                       doctest::Contains("duplicate segment"), DataError);
  const std::string bad_kind = speech_line("s1") + segment_line("s1", 0, "X", "a", "b");
  CHECK_THROWS_WITH_AS(interpeval::parse_corpus(bad_kind),
                       doctest::Contains("unknown translation_kind"), DataError);
}

TEST_CASE("loading normalizes whitespace control characters") {
  const std::string jsonl =
      speech_line("s1") + segment_line("s1", 0, "H", "line\\none\\ttab", "uno dos");
  const Corpus corpus = interpeval::parse_corpus(jsonl);
  CHECK(corpus.segments.front().source_text == "line one tab");
}

TEST_CASE("token_count splits on whitespace runs") {
  CHECK(interpeval::token_count("") == 0);
  CHECK(interpeval::token_count("   \t ") == 0);
  CHECK(interpeval::token_count("hello") == 1);
  CHECK(interpeval::token_count("hello   world") == 2);
  CHECK(interpeval::token_count("  a b\tc ") == 3);
  // NBSP acts as a separator too.
  CHECK(interpeval::token_count("a\xc2\xa0z") == 2);
}

TEST_CASE("normalize_text applies NFC composition") {
  // "e" + COMBINING ACUTE ACCENT composes to U+00E9.
  const std::string decomposed = "caf\x65\xcc\x81";
  CHECK(interpeval::normalize_text(decomposed) == "caf\xc3\xa9");
}

TEST_CASE("corpus stats count source tokens once per distinct segment") {
  const std::string jsonl = speech_line("s1") +
                            segment_line("s1", 0, "H", "one two three", "uno dos") +
                            segment_line("s1", 1, "H", "four five", "tres") +
                            segment_line("s1", 0, "M", "one two three", "uno dos tres cuatro") +
                            segment_line("s1", 1, "M", "four five", "cinco");
  const Corpus corpus = interpeval::parse_corpus(jsonl);
  const auto stats = interpeval::corpus_stats(corpus);

  CHECK(stats.distinct_source_segments == 2);
  CHECK(stats.distinct_source_tokens == 5);
  CHECK(stats.mean_source_segment_length == doctest::Approx(2.5));

  const auto& human = stats.totals_per_kind.at(TranslationKind::H);
  CHECK(human.segments == 2);
  CHECK(human.source_tokens == 5);
  CHECK(human.target_tokens == 3);
  const auto& machine = stats.totals_per_kind.at(TranslationKind::M);
  CHECK(machine.segments == 2);
  CHECK(machine.target_tokens == 5);

  REQUIRE(stats.per_speech.size() == 1);
  CHECK(stats.per_speech.front().speech_id == "s1");
  CHECK(stats.per_speech.front().per_kind.at(TranslationKind::H).source_tokens == 5);
}

TEST_CASE("serialize round-trips a valid corpus") {
  const Corpus original = interpeval::load_corpus(testutil::data_dir() / "toy_corpus.jsonl");
  const std::string jsonl = interpeval::serialize_corpus(original);
  const Corpus reloaded = interpeval::parse_corpus(jsonl, "roundtrip");

  REQUIRE(reloaded.speeches.size() == original.speeches.size());
  REQUIRE(reloaded.segments.size() == original.segments.size());
  for (std::size_t i = 0; i < original.segments.size(); ++i) {
    CHECK(reloaded.segments[i].speech_id == original.segments[i].speech_id);
    CHECK(reloaded.segments[i].segment_index == original.segments[i].segment_index);
    CHECK(reloaded.segments[i].translation_kind == original.segments[i].translation_kind);
    CHECK(reloaded.segments[i].source_text == original.segments[i].source_text);
    CHECK(reloaded.segments[i].target_text == original.segments[i].target_text);
  }
  CHECK(interpeval::serialize_corpus(reloaded) == jsonl);
}

TEST_CASE("save and load through a file") {
  testutil::TempDir tmp;
  const Corpus original = interpeval::load_corpus(testutil::data_dir() / "toy_corpus.jsonl");
  const auto path = tmp / "copy.jsonl";
  interpeval::save_corpus(original, path);
  const Corpus reloaded = interpeval::load_corpus(path);
  CHECK(reloaded.segments.size() == original.segments.size());
  CHECK_THROWS_WITH_AS(interpeval::load_corpus(tmp / "missing.jsonl"),
                       doctest::Contains("cannot open"), DataError);
}
