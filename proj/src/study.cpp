#include "interpeval/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "interpeval/csv.hpp"
#include "interpeval/error.hpp"
#include "interpeval/hash.hpp"

namespace interpeval {

using nlohmann::json;

const char* to_string(MethodMode m) {
  return m == MethodMode::embedding_cosine ? "embedding_cosine" : "llm_judge";
}

std::optional<MethodMode> parse_method_mode(std::string_view s) {
  if (s == "embedding_cosine") return MethodMode::embedding_cosine;
  if (s == "llm_judge") return MethodMode::llm_judge;
  return std::nullopt;
}

const char* to_string(CorrelationUnit u) {
  return u == CorrelationUnit::per_speech ? "per_speech" : "pooled";
}

std::optional<CorrelationUnit> parse_correlation_unit(std::string_view s) {
  if (s == "per_speech") return CorrelationUnit::per_speech;
  if (s == "pooled") return CorrelationUnit::pooled;
  return std::nullopt;
}

namespace {

const BackendConfig* find_backend(const StudyConfig& config, const std::string& id) {
  for (const auto& b : config.backends) {
    if (b.backend_id == id) {
      return &b;
    }
  }
  return nullptr;
}

int parse_int_cell(const std::string& text, const char* field, std::size_t row) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("row " + std::to_string(row) + ": " + field +
                    " is not an integer: \"" + text + "\"");
  }
  return value;
}

}  // namespace

void validate_study_config(const StudyConfig& config) {
  if (config.methods.empty()) {
    throw ConfigError("study needs at least one method");
  }
  std::set<std::string> backend_ids;
  for (const auto& b : config.backends) {
    validate_backend_config(b);
    if (!backend_ids.insert(b.backend_id).second) {
      throw ConfigError("duplicate backend_id \"" + b.backend_id + "\"");
    }
  }
  std::set<std::string> method_ids;
  for (const auto& m : config.methods) {
    if (m.method_id.empty()) {
      throw ConfigError("method_id must be nonempty");
    }
    if (!method_ids.insert(m.method_id).second) {
      throw ConfigError("duplicate method_id \"" + m.method_id + "\"");
    }
    const BackendConfig* backend = find_backend(config, m.backend_id);
    if (backend == nullptr) {
      throw ConfigError("method \"" + m.method_id + "\" references unknown backend \"" +
                        m.backend_id + "\"");
    }
    if (m.mode == MethodMode::embedding_cosine && !is_embeddings_kind(backend->kind)) {
      throw ConfigError("method \"" + m.method_id +
                        "\": embedding_cosine needs an embeddings backend, got " +
                        to_string(backend->kind));
    }
    if (m.mode == MethodMode::llm_judge && !is_chat_kind(backend->kind)) {
      throw ConfigError("method \"" + m.method_id +
                        "\": llm_judge needs a chat backend, got " +
                        to_string(backend->kind));
    }
    if (m.prompt_template) {
      if (m.mode != MethodMode::llm_judge) {
        throw ConfigError("method \"" + m.method_id +
                          "\": prompt_template only applies to llm_judge");
      }
      validate_prompt_template({m.method_id, *m.prompt_template});
    }
  }
  if (config.window_sizes.empty()) {
    throw ConfigError("window_sizes must be nonempty");
  }
  std::set<int> seen_sizes;
  for (int k : config.window_sizes) {
    if (k < 1 || k > kMaxWindowSize) {
      throw ConfigError("window size " + std::to_string(k) + " outside 1.." +
                        std::to_string(kMaxWindowSize));
    }
    if (!seen_sizes.insert(k).second) {
      throw ConfigError("duplicate window size " + std::to_string(k));
    }
  }
  if (config.judge_retries < 0) {
    throw ConfigError("judge_retries must be >= 0");
  }
  if (config.judge_failure_threshold < 0.0 || config.judge_failure_threshold > 1.0) {
    throw ConfigError("judge_failure_threshold must lie in [0, 1]");
  }
}

namespace {

struct RowKeyLess {
  static int kind_rank(TranslationKind k) { return k == TranslationKind::H ? 0 : 1; }

  template <typename T>
  static auto key(const T& row) {
    return std::tuple<const std::string&, const std::string&, int, int, int>(
        row.method_id, row.speech_id, kind_rank(row.translation_kind), row.window_size,
        row.window_index);
  }

  template <typename T>
  bool operator()(const T& a, const T& b) const {
    return key(a) < key(b);
  }
};

}  // namespace

EvaluationMatrix assemble_matrix(const StudyConfig& config, const Corpus& corpus,
                                 const RatingTable& ratings, BackendSet& backends) {
  validate_study_config(config);

  EvaluationMatrix matrix;
  std::map<std::string, std::pair<std::size_t, std::size_t>> judge_counts;

  for (const auto& method : config.methods) {
    Backend& backend = backends.at(method.backend_id);
    PromptTemplate tmpl = default_prompt_template();
    if (method.prompt_template) {
      tmpl = {method.method_id, *method.prompt_template};
    }

    for (const auto& speech : corpus.speeches) {
      for (TranslationKind kind : {TranslationKind::H, TranslationKind::M}) {
        const auto segments = corpus.segments_of(speech.speech_id, kind);
        if (segments.empty()) {
          continue;
        }
        for (int k : config.window_sizes) {
          const auto windows = build_windows(segments, {k, config.policy});

          std::vector<std::pair<const WindowedPair*, double>> scored;
          if (method.mode == MethodMode::embedding_cosine) {
            const auto scores = score_windows(backend, windows, method.method_id);
            for (std::size_t i = 0; i < windows.size(); ++i) {
              scored.emplace_back(&windows[i], scores[i].value);
            }
          } else {
            const auto judged =
                judge_windows(backend, tmpl, windows, config.judge_retries);
            auto& [total, failed] = judge_counts[method.method_id];
            total += judged.size();
            for (std::size_t i = 0; i < judged.size(); ++i) {
              const JudgeOutcome& outcome = judged[i].outcome;
              if (outcome.ok()) {
                scored.emplace_back(&windows[i],
                                    static_cast<double>(*outcome.score));
              } else {
                ++failed;
                matrix.omissions.push_back(
                    {speech.speech_id, kind, method.method_id, k,
                     judged[i].window_index,
                     std::string("judge_") + to_string(*outcome.failure_reason)});
              }
            }
          }

          for (const auto& [window, machine_score] : scored) {
            double human_score = 0.0;
            try {
              human_score = window_rating(ratings, *window, config.granularity,
                                          config.dimension);
            } catch (const DataError&) {
              matrix.omissions.push_back({speech.speech_id, kind, method.method_id, k,
                                          window->window_index, "missing_rating"});
              continue;
            }
            matrix.rows.push_back({speech.speech_id, kind, method.method_id, k,
                                   window->window_index, machine_score, human_score});
          }
        }
      }
    }
  }

  for (const auto& [method_id, counts] : judge_counts) {
    const auto& [total, failed] = counts;
    if (total == 0) {
      continue;
    }
    const double rate = static_cast<double>(failed) / static_cast<double>(total);
    if (rate > config.judge_failure_threshold) {
      throw DataError("judge method \"" + method_id + "\" failed on " +
                      std::to_string(failed) + " of " + std::to_string(total) +
                      " windows (" + csv::format_double(rate * 100.0) +
                      "%), above the configured threshold of " +
                      csv::format_double(config.judge_failure_threshold * 100.0) +
                      "%; see the omission reasons for details");
    }
  }

  if (matrix.rows.empty()) {
    std::string detail = matrix.omissions.empty()
                             ? "no windows were produced; check that the corpus and "
                               "window sizes are compatible"
                             : "every window was omitted (" +
                                   std::to_string(matrix.omissions.size()) +
                                   " omissions, first reason: " +
                                   matrix.omissions.front().reason + ")";
    throw ConfigError("corpus and ratings joined to zero rows: " + detail);
  }

  std::sort(matrix.rows.begin(), matrix.rows.end(), RowKeyLess{});
  std::sort(matrix.omissions.begin(), matrix.omissions.end(), RowKeyLess{});
  return matrix;
}

std::vector<CorrelationRecord> correlate(const EvaluationMatrix& matrix,
                                         CorrelationUnit unit) {
  if (matrix.rows.empty()) {
    throw DataError("correlate: empty evaluation matrix");
  }

  using CellKey = std::tuple<std::string, int, int, std::string>;
  std::map<CellKey, std::pair<std::vector<double>, std::vector<double>>> cells;
  for (const auto& row : matrix.rows) {
    const std::string speech_key = unit == CorrelationUnit::per_speech
                                       ? row.speech_id
                                       : std::string(kPooledSpeechId);
    CellKey key{row.method_id, RowKeyLess::kind_rank(row.translation_kind),
                row.window_size, speech_key};
    auto& [x, y] = cells[key];
    x.push_back(row.machine_score);
    y.push_back(row.human_score);
  }

  std::vector<CorrelationRecord> records;
  records.reserve(cells.size());
  for (const auto& [key, xy] : cells) {
    const auto& [method_id, kind_rank, window_size, speech_id] = key;
    const auto& [x, y] = xy;
    CorrelationRecord record;
    record.method_id = method_id;
    record.translation_kind = kind_rank == 0 ? TranslationKind::H : TranslationKind::M;
    record.window_size = window_size;
    record.speech_id = speech_id;
    record.n = x.size();
    try {
      const PearsonResult result = pearson(x, y);
      record.r = result.r;
      record.status = "ok";
    } catch (const StatError& e) {
      record.status = e.reason() == StatErrorReason::zero_variance ? "zero_variance"
                                                                   : "insufficient_n";
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<MethodSummary> summarize_by_method(
    const std::vector<CorrelationRecord>& records) {
  std::map<std::string, std::vector<double>> by_method;
  for (const auto& record : records) {
    if (record.r) {
      by_method[record.method_id].push_back(*record.r);
    }
  }
  std::vector<MethodSummary> summaries;
  summaries.reserve(by_method.size());
  for (const auto& [method_id, values] : by_method) {
    summaries.push_back({method_id, values.size(), five_number(values)});
  }
  return summaries;
}

std::vector<KindMean> compare_kinds(const std::vector<CorrelationRecord>& records) {
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const auto& record : records) {
    if (record.r) {
      groups[{record.method_id, RowKeyLess::kind_rank(record.translation_kind)}]
          .push_back(*record.r);
    }
  }
  std::vector<KindMean> means;
  means.reserve(groups.size());
  for (const auto& [key, values] : groups) {
    long double sum = 0.0L;
    for (double v : values) {
      sum += v;
    }
    means.push_back({key.first,
                     key.second == 0 ? TranslationKind::H : TranslationKind::M,
                     static_cast<double>(sum / static_cast<long double>(values.size())),
                     values.size()});
  }
  return means;
}

std::vector<WindowPoint> window_series(const std::vector<CorrelationRecord>& records,
                                       std::vector<int> sizes) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::set<std::pair<std::string, int>> pairs;
  std::map<std::tuple<std::string, int, int>, std::vector<double>> groups;
  for (const auto& record : records) {
    const int rank = RowKeyLess::kind_rank(record.translation_kind);
    pairs.insert({record.method_id, rank});
    if (record.r) {
      groups[{record.method_id, rank, record.window_size}].push_back(*record.r);
    }
  }

  std::vector<WindowPoint> points;
  for (const auto& [method_id, rank] : pairs) {
    for (int size : sizes) {
      WindowPoint point;
      point.method_id = method_id;
      point.translation_kind = rank == 0 ? TranslationKind::H : TranslationKind::M;
      point.window_size = size;
      auto it = groups.find({method_id, rank, size});
      if (it != groups.end()) {
        long double sum = 0.0L;
        for (double v : it->second) {
          sum += v;
        }
        point.mean_r = static_cast<double>(sum / static_cast<long double>(it->second.size()));
        point.n = it->second.size();
      }
      points.push_back(std::move(point));
    }
  }
  return points;
}

std::vector<BackendConfig> resolve_backend_seeds(const StudyConfig& config) {
  std::vector<BackendConfig> resolved = config.backends;
  for (auto& b : resolved) {
    const bool is_mock =
        b.kind == BackendKind::mock_embeddings || b.kind == BackendKind::mock_chat;
    if (is_mock && b.mock_seed == 0) {
      b.mock_seed = hash64(config.seed, b.backend_id);
    }
  }
  return resolved;
}

void write_matrix_csv(const EvaluationMatrix& matrix, const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row({"speech_id", "translation_kind", "method_id", "window_size",
                    "window_index", "machine_score", "human_score"});
  for (const auto& row : matrix.rows) {
    writer.write_row({row.speech_id, to_string(row.translation_kind), row.method_id,
                      std::to_string(row.window_size), std::to_string(row.window_index),
                      csv::format_double(row.machine_score),
                      csv::format_double(row.human_score)});
  }
}

EvaluationMatrix read_matrix_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  const std::vector<std::string> expected = {
      "speech_id",    "translation_kind", "method_id",  "window_size",
      "window_index", "machine_score",    "human_score"};
  if (table.header != expected) {
    throw DataError("matrix file " + path.string() + ": unexpected header");
  }
  EvaluationMatrix matrix;
  matrix.rows.reserve(table.rows.size());
  for (const auto& parsed : table.rows) {
    const auto& row = parsed.fields;
    const std::size_t line = parsed.row_number;
    if (row.size() != expected.size()) {
      throw DataError("matrix row " + std::to_string(line) + ": expected " +
                      std::to_string(expected.size()) + " fields, got " +
                      std::to_string(row.size()));
    }
    MatrixRow r;
    r.speech_id = row[0];
    const auto kind = parse_translation_kind(row[1]);
    if (!kind) {
      throw DataError("matrix row " + std::to_string(line) +
                      ": unknown translation_kind \"" + row[1] + "\"");
    }
    r.translation_kind = *kind;
    r.method_id = row[2];
    r.window_size = parse_int_cell(row[3], "window_size", line);
    r.window_index = parse_int_cell(row[4], "window_index", line);
    try {
      r.machine_score = std::stod(row[5]);
      r.human_score = std::stod(row[6]);
    } catch (const std::exception&) {
      throw DataError("matrix row " + std::to_string(line) + ": bad score value");
    }
    if (!std::isfinite(r.machine_score) || !std::isfinite(r.human_score)) {
      throw DataError("matrix row " + std::to_string(line) + ": non-finite score");
    }
    matrix.rows.push_back(std::move(r));
  }
  return matrix;
}

void write_omissions_csv(const EvaluationMatrix& matrix,
                         const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row({"speech_id", "translation_kind", "method_id", "window_size",
                    "window_index", "reason"});
  for (const auto& omission : matrix.omissions) {
    writer.write_row({omission.speech_id, to_string(omission.translation_kind),
                      omission.method_id, std::to_string(omission.window_size),
                      std::to_string(omission.window_index), omission.reason});
  }
}

void write_correlations_csv(const std::vector<CorrelationRecord>& records,
                            const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row(
      {"method_id", "translation_kind", "window_size", "speech_id", "r", "n", "status"});
  for (const auto& record : records) {
    writer.write_row({record.method_id, to_string(record.translation_kind),
                      std::to_string(record.window_size), record.speech_id,
                      record.r ? csv::format_double(*record.r) : std::string(),
                      std::to_string(record.n), record.status});
  }
}

std::vector<CorrelationRecord> read_correlations_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  const std::vector<std::string> expected = {"method_id", "translation_kind",
                                             "window_size", "speech_id",
                                             "r",          "n",
                                             "status"};
  if (table.header != expected) {
    throw DataError("correlations file " + path.string() + ": unexpected header");
  }
  std::vector<CorrelationRecord> records;
  records.reserve(table.rows.size());
  for (const auto& parsed : table.rows) {
    const auto& row = parsed.fields;
    const std::size_t line = parsed.row_number;
    if (row.size() != expected.size()) {
      throw DataError("correlations row " + std::to_string(line) + ": expected " +
                      std::to_string(expected.size()) + " fields, got " +
                      std::to_string(row.size()));
    }
    CorrelationRecord record;
    record.method_id = row[0];
    const auto kind = parse_translation_kind(row[1]);
    if (!kind) {
      throw DataError("correlations row " + std::to_string(line) +
                      ": unknown translation_kind \"" + row[1] + "\"");
    }
    record.translation_kind = *kind;
    record.window_size = parse_int_cell(row[2], "window_size", line);
    record.speech_id = row[3];
    record.status = row[6];
    record.n = static_cast<std::size_t>(parse_int_cell(row[5], "n", line));
    if (record.status == "ok") {
      try {
        record.r = std::stod(row[4]);
      } catch (const std::exception&) {
        throw DataError("correlations row " + std::to_string(line) + ": bad r \"" +
                        row[4] + "\"");
      }
      if (!std::isfinite(*record.r) || *record.r < -1.0 || *record.r > 1.0) {
        throw DataError("correlations row " + std::to_string(line) +
                        ": r outside [-1, 1]");
      }
    } else if (!row[4].empty()) {
      throw DataError("correlations row " + std::to_string(line) +
                      ": non-ok status with a value in r");
    }
    records.push_back(std::move(record));
  }
  return records;
}

void write_summary_csv(const std::vector<MethodSummary>& summaries,
                       const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row({"method_id", "n", "median", "q1", "q3", "iqr", "whisker_low",
                    "whisker_high", "outliers"});
  for (const auto& s : summaries) {
    std::string outliers;
    for (double v : s.summary.outliers) {
      if (!outliers.empty()) {
        outliers += '|';
      }
      outliers += csv::format_double(v);
    }
    writer.write_row({s.method_id, std::to_string(s.n),
                      csv::format_double(s.summary.median),
                      csv::format_double(s.summary.q1), csv::format_double(s.summary.q3),
                      csv::format_double(s.summary.iqr),
                      csv::format_double(s.summary.whisker_low),
                      csv::format_double(s.summary.whisker_high), outliers});
  }
}

void write_kind_comparison_csv(const std::vector<KindMean>& means,
                               const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row({"method_id", "translation_kind", "mean_r", "n"});
  for (const auto& m : means) {
    writer.write_row({m.method_id, to_string(m.translation_kind),
                      csv::format_double(m.mean_r), std::to_string(m.n)});
  }
}

void write_window_series_csv(const std::vector<WindowPoint>& points,
                             const std::filesystem::path& path) {
  csv::Writer writer(path);
  writer.write_row(
      {"method_id", "translation_kind", "window_size", "mean_r", "n", "status"});
  for (const auto& p : points) {
    writer.write_row({p.method_id, to_string(p.translation_kind),
                      std::to_string(p.window_size),
                      p.mean_r ? csv::format_double(*p.mean_r) : std::string(),
                      std::to_string(p.n), p.mean_r ? "ok" : "missing"});
  }
}

namespace {

json config_to_json(const StudyConfig& config) {
  json methods = json::array();
  for (const auto& m : config.methods) {
    json entry = {{"method_id", m.method_id},
                  {"backend_id", m.backend_id},
                  {"mode", to_string(m.mode)}};
    if (m.prompt_template) {
      entry["prompt_template"] = *m.prompt_template;
    }
    methods.push_back(std::move(entry));
  }
  json backends = json::array();
  for (const auto& b : config.backends) {
    json entry = {{"backend_id", b.backend_id},
                  {"kind", to_string(b.kind)},
                  {"model_name", b.model_name},
                  {"max_in_flight", b.max_in_flight},
                  {"max_retries", b.max_retries},
                  {"timeout_ms", b.timeout.count()},
                  {"retry_base_ms", b.retry_base.count()},
                  {"batch_size", b.batch_size},
                  {"mock_seed", b.mock_seed}};
    if (!b.endpoint_url.empty()) {
      entry["endpoint_url"] = b.endpoint_url;
    }
    if (!b.api_key_env.empty()) {
      entry["api_key_env"] = b.api_key_env;
    }
    if (b.embedding_dim) {
      entry["embedding_dim"] = *b.embedding_dim;
    }
    if (b.cache_dir) {
      entry["cache_dir"] = b.cache_dir->string();
    }
    backends.push_back(std::move(entry));
  }
  json sizes = json::array();
  for (int k : config.window_sizes) {
    sizes.push_back(k);
  }
  return {{"corpus", config.corpus_path.string()},
          {"ratings", config.ratings_path.string()},
          {"granularity", to_string(config.granularity)},
          {"dimension", to_string(config.dimension)},
          {"methods", std::move(methods)},
          {"backends", std::move(backends)},
          {"window_sizes", std::move(sizes)},
          {"window_policy", to_string(config.policy)},
          {"correlation_unit", to_string(config.unit)},
          {"output_dir", config.output_dir.string()},
          {"seed", config.seed},
          {"judge_retries", config.judge_retries},
          {"judge_failure_threshold", config.judge_failure_threshold}};
}

}  // namespace

void write_study_json(const StudyConfig& config, const StudyResult& result,
                      const std::filesystem::path& path) {
  std::size_t ok_cells = 0;
  for (const auto& record : result.correlations) {
    if (record.r) {
      ++ok_cells;
    }
  }
  json doc = {{"version", std::string(kVersion)},
              {"config", config_to_json(config)},
              {"counts",
               {{"matrix_rows", result.matrix.rows.size()},
                {"omissions", result.matrix.omissions.size()},
                {"correlation_cells", result.correlations.size()},
                {"ok_cells", ok_cells}}},
              {"notes", result.notes}};
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

StudyResult run_study(const StudyConfig& config) {
  validate_study_config(config);
  if (config.corpus_path.empty() || config.ratings_path.empty()) {
    throw ConfigError("study needs corpus and ratings paths");
  }
  if (config.output_dir.empty()) {
    throw ConfigError("study needs an output directory");
  }

  const Corpus corpus = load_corpus(config.corpus_path);
  const RatingTable ratings = load_ratings(config.ratings_path);

  StudyConfig resolved = config;
  resolved.backends = resolve_backend_seeds(config);
  BackendSet backends(resolved.backends);

  StudyResult result;
  result.matrix = assemble_matrix(resolved, corpus, ratings, backends);
  result.correlations = correlate(result.matrix, resolved.unit);
  result.method_summaries = summarize_by_method(result.correlations);
  result.kind_means = compare_kinds(result.correlations);
  result.series = window_series(result.correlations, resolved.window_sizes);

  std::set<std::string> methods_with_cells;
  std::set<std::pair<std::string, std::string>> kinds_with_cells;
  for (const auto& record : result.correlations) {
    if (record.r) {
      methods_with_cells.insert(record.method_id);
      kinds_with_cells.insert({record.method_id, to_string(record.translation_kind)});
    }
  }
  std::set<std::string> kinds_present;
  for (const auto& row : result.matrix.rows) {
    kinds_present.insert(to_string(row.translation_kind));
  }
  for (const auto& method : resolved.methods) {
    if (!methods_with_cells.count(method.method_id)) {
      result.notes.push_back("method " + method.method_id +
                             ": no valid correlation cells, omitted from summaries");
      continue;
    }
    for (const auto& kind : kinds_present) {
      if (!kinds_with_cells.count({method.method_id, kind})) {
        result.notes.push_back("method " + method.method_id + " kind " + kind +
                               ": no valid correlation cells");
      }
    }
  }
  if (!result.matrix.omissions.empty()) {
    result.notes.push_back(std::to_string(result.matrix.omissions.size()) +
                           " windows omitted, see omissions.csv");
  }

  std::filesystem::create_directories(resolved.output_dir);
  write_matrix_csv(result.matrix, resolved.output_dir / "matrix.csv");
  write_omissions_csv(result.matrix, resolved.output_dir / "omissions.csv");
  write_correlations_csv(result.correlations, resolved.output_dir / "correlations.csv");
  write_summary_csv(result.method_summaries,
                    resolved.output_dir / "summary_by_method.csv");
  write_kind_comparison_csv(result.kind_means,
                            resolved.output_dir / "kind_comparison.csv");
  write_window_series_csv(result.series, resolved.output_dir / "window_series.csv");
  write_study_json(resolved, result, resolved.output_dir / "study.json");
  return result;
}

}  // namespace interpeval
