#include "interpeval/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

#include "interpeval/csv.hpp"
#include "interpeval/error.hpp"

namespace interpeval {

const char* to_string(ScoreScale s) {
  return s == ScoreScale::cosine ? "cosine" : "likert5";
}

std::optional<ScoreScale> parse_score_scale(std::string_view s) {
  if (s == "cosine") return ScoreScale::cosine;
  if (s == "likert5") return ScoreScale::likert5;
  return std::nullopt;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dim() != v.dim()) {
    throw DataError("cosine: dimension mismatch (" + std::to_string(u.dim()) + " vs " +
                    std::to_string(v.dim()) + ")");
  }
  if (u.dim() == 0) {
    throw DataError("cosine: empty vectors");
  }
  long double dot = 0.0L;
  long double norm_u = 0.0L;
  long double norm_v = 0.0L;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    const long double a = u.values[i];
    const long double b = v.values[i];
    dot += a * b;
    norm_u += a * a;
    norm_v += b * b;
  }
  if (norm_u == 0.0L || norm_v == 0.0L) {
    throw DataError("cosine: zero-norm input vector");
  }
  const long double value = dot / (std::sqrt(norm_u) * std::sqrt(norm_v));
  return static_cast<double>(std::clamp(value, -1.0L, 1.0L));
}

std::vector<SimilarityScore> score_windows(Backend& backend,
                                           const std::vector<WindowedPair>& windows,
                                           const std::string& method_id) {
  if (!is_embeddings_kind(backend.config().kind)) {
    throw ConfigError("score_windows: backend \"" + backend.config().backend_id +
                      "\" is not an embeddings backend");
  }
  if (windows.empty()) {
    return {};
  }
  std::vector<std::string> texts;
  texts.reserve(windows.size() * 2);
  for (const auto& w : windows) {
    texts.push_back(w.source_text);
    texts.push_back(w.target_text);
  }

  std::vector<EmbeddingVector> embeddings;
  try {
    embeddings = backend.embed_texts(texts);
  } catch (const Error& e) {
    const auto& w = windows.front();
    throw BackendError("scoring windows of speech \"" + w.speech_id + "\" (" +
                       to_string(w.translation_kind) + ", k=" +
                       std::to_string(w.window_size) + ") failed: " + e.what());
  }

  std::vector<SimilarityScore> scores;
  scores.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    SimilarityScore s;
    s.speech_id = w.speech_id;
    s.translation_kind = w.translation_kind;
    s.method_id = method_id;
    s.window_size = w.window_size;
    s.window_index = w.window_index;
    s.scale = ScoreScale::cosine;
    try {
      s.value = cosine(embeddings[2 * i], embeddings[2 * i + 1]);
    } catch (const Error& e) {
      throw DataError("window " + std::to_string(w.window_index) + " of speech \"" +
                      w.speech_id + "\" (" + to_string(w.translation_kind) +
                      "): " + e.what());
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

void sort_scores(std::vector<SimilarityScore>& scores) {
  std::sort(scores.begin(), scores.end(),
            [](const SimilarityScore& a, const SimilarityScore& b) {
              return std::tie(a.method_id, a.speech_id, a.translation_kind, a.window_size,
                              a.window_index) < std::tie(b.method_id, b.speech_id,
                                                         b.translation_kind, b.window_size,
                                                         b.window_index);
            });
}

void write_scores_csv(const std::vector<SimilarityScore>& scores,
                      const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row({"speech_id", "translation_kind", "method_id", "window_size",
                    "window_index", "scale", "value"});
  for (const auto& s : scores) {
    writer.write_row({s.speech_id, to_string(s.translation_kind), s.method_id,
                      std::to_string(s.window_size), std::to_string(s.window_index),
                      to_string(s.scale), csv::format_double(s.value)});
  }
}

namespace {

int parse_int_field(const std::string& text, const char* field, std::size_t row) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError("scores row " + std::to_string(row) + ": " + field +
                    " is not an integer: \"" + text + "\"");
  }
  return value;
}

}  // namespace

std::vector<SimilarityScore> read_scores_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  const std::vector<std::string> expected = {"speech_id",    "translation_kind",
                                             "method_id",    "window_size",
                                             "window_index", "scale",
                                             "value"};
  if (table.header != expected) {
    throw DataError("scores file " + path.string() + ": unexpected header");
  }
  std::vector<SimilarityScore> scores;
  scores.reserve(table.rows.size());
  for (const auto& parsed : table.rows) {
    const auto& row = parsed.fields;
    const std::size_t line = parsed.row_number;
    if (row.size() != expected.size()) {
      throw DataError("scores row " + std::to_string(line) + ": expected " +
                      std::to_string(expected.size()) + " fields, got " +
                      std::to_string(row.size()));
    }
    SimilarityScore s;
    s.speech_id = row[0];
    auto kind = parse_translation_kind(row[1]);
    if (!kind) {
      throw DataError("scores row " + std::to_string(line) +
                      ": unknown translation_kind \"" + row[1] + "\"");
    }
    s.translation_kind = *kind;
    s.method_id = row[2];
    s.window_size = parse_int_field(row[3], "window_size", line);
    s.window_index = parse_int_field(row[4], "window_index", line);
    auto scale = parse_score_scale(row[5]);
    if (!scale) {
      throw DataError("scores row " + std::to_string(line) + ": unknown scale \"" +
                      row[5] + "\"");
    }
    s.scale = *scale;
    try {
      s.value = std::stod(row[6]);
    } catch (const std::exception&) {
      throw DataError("scores row " + std::to_string(line) + ": bad value \"" + row[6] +
                      "\"");
    }
    if (!std::isfinite(s.value)) {
      throw DataError("scores row " + std::to_string(line) + ": non-finite value");
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace interpeval
