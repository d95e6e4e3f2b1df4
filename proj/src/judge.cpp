#include "interpeval/judge.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "interpeval/csv.hpp"
#include "interpeval/error.hpp"

namespace interpeval {

PromptTemplate default_prompt_template() {
  return {"default",
          "Given the two sentences in English and Spanish, rate from 1 to 5 their "
          "similarity, where 1 is not similar and 5 very similar.\n"
          "English: {source}\n"
          "Spanish: {target}"};
}

namespace {

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

void validate_prompt_template(const PromptTemplate& tmpl) {
  for (std::string_view placeholder : {"{source}", "{target}"}) {
    const std::size_t n = count_occurrences(tmpl.text, placeholder);
    if (n != 1) {
      throw ConfigError("prompt template \"" + tmpl.id + "\": placeholder " +
                        std::string(placeholder) + " must occur exactly once, found " +
                        std::to_string(n));
    }
  }
}

std::string build_prompt(const PromptTemplate& tmpl, std::string_view source,
                         std::string_view target) {
  validate_prompt_template(tmpl);
  std::string out;
  out.reserve(tmpl.text.size() + source.size() + target.size());
  std::size_t pos = 0;
  while (pos < tmpl.text.size()) {
    if (tmpl.text.compare(pos, 8, "{source}") == 0) {
      out.append(source);
      pos += 8;
    } else if (tmpl.text.compare(pos, 8, "{target}") == 0) {
      out.append(target);
      pos += 8;
    } else {
      out.push_back(tmpl.text[pos]);
      ++pos;
    }
  }
  return out;
}

const char* to_string(JudgeFailure f) {
  switch (f) {
    case JudgeFailure::unparseable: return "unparseable";
    case JudgeFailure::out_of_range: return "out_of_range";
    case JudgeFailure::backend_error: return "backend_error";
  }
  return "unknown";
}

ParsedScore try_parse_score(std::string_view raw) {
  std::size_t i = 0;
  while (i < raw.size()) {
    if (std::isdigit(static_cast<unsigned char>(raw[i]))) {
      std::size_t end = i;
      while (end < raw.size() && std::isdigit(static_cast<unsigned char>(raw[end]))) {
        ++end;
      }
      // The first maximal digit run decides; its value must be 1..5.
      unsigned long long value = 0;
      auto [ptr, ec] = std::from_chars(raw.data() + i, raw.data() + end, value);
      if (ec != std::errc() || ptr != raw.data() + end || value < 1 || value > 5) {
        return {std::nullopt, JudgeFailure::out_of_range};
      }
      return {static_cast<int>(value), std::nullopt};
    }
    ++i;
  }
  return {std::nullopt, JudgeFailure::unparseable};
}

int parse_score(std::string_view raw) {
  const ParsedScore parsed = try_parse_score(raw);
  if (parsed.score) {
    return *parsed.score;
  }
  if (*parsed.failure == JudgeFailure::out_of_range) {
    throw DataError("judge response has no standalone 1-5 score (out of range): \"" +
                    std::string(raw.substr(0, 80)) + "\"");
  }
  throw DataError("judge response contains no integer: \"" +
                  std::string(raw.substr(0, 80)) + "\"");
}

std::vector<JudgedWindow> judge_windows(Backend& backend, const PromptTemplate& tmpl,
                                        const std::vector<WindowedPair>& windows,
                                        int retry_on_unparseable) {
  if (!is_chat_kind(backend.config().kind)) {
    throw ConfigError("judge_windows: backend \"" + backend.config().backend_id +
                      "\" is not a chat backend");
  }
  if (retry_on_unparseable < 0) {
    throw ConfigError("judge_windows: retry_on_unparseable must be >= 0");
  }
  validate_prompt_template(tmpl);

  std::vector<JudgedWindow> judged(windows.size());
  parallel_for(
      windows.size(), static_cast<std::size_t>(backend.config().max_in_flight),
      [&](std::size_t i) {
        const WindowedPair& w = windows[i];
        JudgedWindow result;
        result.speech_id = w.speech_id;
        result.translation_kind = w.translation_kind;
        result.window_size = w.window_size;
        result.window_index = w.window_index;

        const std::string base_prompt = build_prompt(tmpl, w.source_text, w.target_text);
        std::string prompt = base_prompt;
        JudgeOutcome& outcome = result.outcome;
        const int max_attempts = 1 + retry_on_unparseable;
        for (int attempt = 1; attempt <= max_attempts; ++attempt) {
          outcome.attempts = attempt;
          std::string raw;
          try {
            raw = backend.chat_score(prompt);
          } catch (const Error& e) {
            outcome.failure_reason = JudgeFailure::backend_error;
            outcome.raw_response = e.what();
            break;
          }
          outcome.raw_response = raw;
          const ParsedScore parsed = try_parse_score(raw);
          if (parsed.score) {
            outcome.score = parsed.score;
            outcome.failure_reason.reset();
            break;
          }
          outcome.failure_reason = parsed.failure;
          if (attempt == 1) {
            prompt = base_prompt + "\n" + std::string(kJudgeClarification);
          }
        }
        judged[i] = std::move(result);
      });
  return judged;
}

std::vector<SimilarityScore> judged_scores(const std::vector<JudgedWindow>& judged,
                                           const std::string& method_id) {
  std::vector<SimilarityScore> scores;
  for (const auto& jw : judged) {
    if (!jw.outcome.ok()) {
      continue;
    }
    SimilarityScore s;
    s.speech_id = jw.speech_id;
    s.translation_kind = jw.translation_kind;
    s.method_id = method_id;
    s.window_size = jw.window_size;
    s.window_index = jw.window_index;
    s.scale = ScoreScale::likert5;
    s.value = *jw.outcome.score;
    scores.push_back(std::move(s));
  }
  return scores;
}

void write_failures_csv(const std::vector<JudgedWindow>& judged,
                        const std::string& method_id,
                        const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row({"speech_id", "translation_kind", "method_id", "window_size",
                    "window_index", "failure_reason", "attempts"});
  for (const auto& jw : judged) {
    if (jw.outcome.ok()) {
      continue;
    }
    writer.write_row({jw.speech_id, to_string(jw.translation_kind), method_id,
                      std::to_string(jw.window_size), std::to_string(jw.window_index),
                      to_string(*jw.outcome.failure_reason),
                      std::to_string(jw.outcome.attempts)});
  }
}

}  // namespace interpeval
