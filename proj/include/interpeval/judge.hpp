#ifndef INTERPEVAL_JUDGE_HPP_
#define INTERPEVAL_JUDGE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interpeval/backends.hpp"
#include "interpeval/similarity.hpp"
#include "interpeval/windowing.hpp"

namespace interpeval {

// Chat prompt with {source} and {target} placeholders, each required
// exactly once.
struct PromptTemplate {
  std::string id;
  std::string text;
};

// The built-in template: a fixed English/Spanish similarity instruction on a
// 1..5 scale, followed by labeled source and target lines.
PromptTemplate default_prompt_template();

// Throws ConfigError unless both placeholders occur exactly once.
void validate_prompt_template(const PromptTemplate& tmpl);

// Substitutes the placeholders verbatim in a single pass; placeholder-like
// text inside the substituted values is left untouched.
std::string build_prompt(const PromptTemplate& tmpl, std::string_view source,
                         std::string_view target);

enum class JudgeFailure { unparseable, out_of_range, backend_error };

const char* to_string(JudgeFailure f);

struct ParsedScore {
  std::optional<int> score;            // 1..5 when parsing succeeded
  std::optional<JudgeFailure> failure; // unparseable or out_of_range otherwise
};

// The first maximal digit run in the response decides: value in 1..5 is the
// score, any other value is out_of_range, no digit run is unparseable.
ParsedScore try_parse_score(std::string_view raw);

// try_parse_score that throws DataError on failure.
int parse_score(std::string_view raw);

// Appended to the prompt (once) before re-asking after a parse failure.
inline constexpr std::string_view kJudgeClarification =
    "Answer with a single digit from 1 to 5.";

struct JudgeOutcome {
  std::optional<int> score;                   // exactly one of score /
  std::optional<JudgeFailure> failure_reason; // failure_reason is set
  std::string raw_response;                   // last response, or the error text
  int attempts = 0;                           // chat calls made for this window

  bool ok() const { return score.has_value(); }
};

struct JudgedWindow {
  std::string speech_id;
  TranslationKind translation_kind = TranslationKind::H;
  int window_size = 1;
  int window_index = 0;
  JudgeOutcome outcome;
};

// Scores every window with the chat backend, one outcome per window in input
// order. Parse failures (unparseable or out-of-range) are re-asked up to
// retry_on_unparseable times with the clarification appended; backend errors
// become backend_error outcomes immediately. Windows run in parallel bounded
// by the backend's in-flight cap.
std::vector<JudgedWindow> judge_windows(Backend& backend, const PromptTemplate& tmpl,
                                        const std::vector<WindowedPair>& windows,
                                        int retry_on_unparseable = 2);

// Successful outcomes as likert5 scores tagged with method_id.
std::vector<SimilarityScore> judged_scores(const std::vector<JudgedWindow>& judged,
                                           const std::string& method_id);

// Sidecar export for failed windows:
// speech_id,translation_kind,method_id,window_size,window_index,
// failure_reason,attempts
void write_failures_csv(const std::vector<JudgedWindow>& judged,
                        const std::string& method_id,
                        const std::filesystem::path& path);

}  // namespace interpeval

#endif  // INTERPEVAL_JUDGE_HPP_
