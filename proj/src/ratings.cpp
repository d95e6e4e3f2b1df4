#include "interpeval/ratings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "interpeval/csv.hpp"
#include "interpeval/error.hpp"

namespace interpeval {

const char* to_string(Dimension d) {
  return d == Dimension::accuracy ? "accuracy" : "intelligibility";
}

std::optional<Dimension> parse_dimension(std::string_view s) {
  if (s == "accuracy") return Dimension::accuracy;
  if (s == "intelligibility") return Dimension::intelligibility;
  return std::nullopt;
}

const char* to_string(RatingGranularity g) {
  return g == RatingGranularity::segment ? "segment" : "speech";
}

std::optional<RatingGranularity> parse_granularity(std::string_view s) {
  if (s == "segment") return RatingGranularity::segment;
  if (s == "speech") return RatingGranularity::speech;
  return std::nullopt;
}

namespace {

RaterKind parse_rater_kind(std::string_view s) {
  if (s == "professional") return RaterKind::professional;
  if (s == "bilingual") return RaterKind::bilingual;
  return RaterKind::unknown;
}

const char* to_string(RaterKind k) {
  switch (k) {
    case RaterKind::professional: return "professional";
    case RaterKind::bilingual: return "bilingual";
    default: return "unknown";
  }
}

int parse_int_field(std::string_view s, std::string_view what, std::string_view origin,
                    std::size_t row) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(std::string(origin) + ": row " + std::to_string(row) + ": " +
                    std::string(what) + " must be an integer, got \"" +
                    std::string(s) + "\"");
  }
  return value;
}

}  // namespace

RatingTable parse_ratings(std::string_view csv_text, std::string_view origin) {
  std::istringstream in{std::string(csv_text)};
  RatingTable table;
  std::map<std::string, RaterKind> rater_kinds;
  std::set<std::tuple<std::string, std::string, TranslationKind, RatingUnit, Dimension>> keys;

  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") {
      continue;
    }
    auto fields = csv::parse_line(line, row);
    if (header.empty()) {
      header = fields;
      const std::vector<std::string> expected = {
          "rater_id", "rater_kind", "speech_id", "translation_kind",
          "segment_index", "dimension", "score"};
      if (header != expected) {
        throw DataError(std::string(origin) +
                        ": unexpected header; expected rater_id,rater_kind,"
                        "speech_id,translation_kind,segment_index,dimension,score");
      }
      continue;
    }
    if (fields.size() != 7) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                      ": expected 7 fields, got " + std::to_string(fields.size()));
    }

    HumanRating r;
    r.rater_id = fields[0];
    if (r.rater_id.empty()) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                      ": empty rater_id");
    }
    const RaterKind kind_meta = parse_rater_kind(fields[1]);
    auto [it, inserted] = rater_kinds.try_emplace(r.rater_id, kind_meta);
    if (!inserted && it->second != kind_meta) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                      ": rater \"" + r.rater_id + "\" declared with conflicting kinds");
    }
    r.speech_id = fields[2];
    auto kind = parse_translation_kind(fields[3]);
    if (!kind) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                      ": unknown translation_kind \"" + fields[3] + "\"");
    }
    r.translation_kind = *kind;
    if (fields[4].empty()) {
      r.unit = RatingUnit::speech();
    } else {
      int idx = parse_int_field(fields[4], "segment_index", origin, row);
      if (idx < 0) {
        throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                        ": negative segment_index");
      }
      r.unit = RatingUnit::segment(idx);
    }
    auto dim = parse_dimension(fields[5]);
    if (!dim) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                      ": unknown dimension \"" + fields[5] + "\"");
    }
    r.dimension = *dim;
    r.score = parse_int_field(fields[6], "score", origin, row);
    if (r.score < 1 || r.score > 6) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                      ": score " + std::to_string(r.score) +
                      " outside the 1..6 Likert range");
    }
    auto key = std::make_tuple(r.rater_id, r.speech_id, r.translation_kind, r.unit,
                               r.dimension);
    if (!keys.insert(key).second) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row) +
                      ": duplicate rating for (rater=" + r.rater_id + ", speech=" +
                      r.speech_id + ", kind=" + to_string(r.translation_kind) +
                      ", unit=" +
                      (r.unit.is_speech() ? std::string("speech")
                                          : std::to_string(*r.unit.segment_index)) +
                      ")");
    }
    table.ratings.push_back(std::move(r));
  }
  if (header.empty()) {
    throw DataError(std::string(origin) + ": empty ratings file, header required");
  }
  table.raters.reserve(rater_kinds.size());
  for (const auto& [id, kind] : rater_kinds) {
    table.raters.push_back({id, kind});
  }
  return table;
}

RatingTable load_ratings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open ratings file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_ratings(buffer.str(), path.string());
}

std::string serialize_ratings(const RatingTable& table) {
  std::map<std::string, RaterKind> kinds;
  for (const auto& r : table.raters) {
    kinds[r.rater_id] = r.rater_kind;
  }
  std::string out =
      "rater_id,rater_kind,speech_id,translation_kind,segment_index,dimension,score\n";
  for (const auto& r : table.ratings) {
    auto it = kinds.find(r.rater_id);
    out += csv::escape(r.rater_id);
    out += ',';
    out += to_string(it == kinds.end() ? RaterKind::unknown : it->second);
    out += ',';
    out += csv::escape(r.speech_id);
    out += ',';
    out += to_string(r.translation_kind);
    out += ',';
    out += r.unit.is_speech() ? "" : std::to_string(*r.unit.segment_index);
    out += ',';
    out += to_string(r.dimension);
    out += ',';
    out += std::to_string(r.score);
    out += '\n';
  }
  return out;
}

void save_ratings(const RatingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write ratings file " + path.string());
  }
  out << serialize_ratings(table);
}

MeanRating mean_rating(const RatingTable& table, std::string_view speech_id,
                       TranslationKind kind, const RatingUnit& unit,
                       Dimension dimension) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : table.ratings) {
    if (r.speech_id == speech_id && r.translation_kind == kind && r.unit == unit &&
        r.dimension == dimension) {
      sum += r.score;
      ++count;
    }
  }
  if (count == 0) {
    throw DataError("no ratings for speech=" + std::string(speech_id) + " kind=" +
                    to_string(kind) + " unit=" +
                    (unit.is_speech() ? std::string("speech")
                                      : "segment " + std::to_string(*unit.segment_index)));
  }
  return {sum / static_cast<double>(count), count};
}

std::string AgreementItem::describe() const {
  std::string out = "speech=" + speech_id + " kind=" + to_string(translation_kind);
  out += unit.is_speech() ? " unit=speech"
                          : " segment=" + std::to_string(*unit.segment_index);
  return out;
}

AgreementMatrix rating_matrix(const RatingTable& table, RatingGranularity granularity,
                              Dimension dimension) {
  std::map<std::tuple<std::string, TranslationKind, RatingUnit>, std::array<int, 6>>
      grouped;
  for (const auto& r : table.ratings) {
    if (r.dimension != dimension) {
      continue;
    }
    const bool is_segment = !r.unit.is_speech();
    if ((granularity == RatingGranularity::segment) != is_segment) {
      continue;
    }
    auto& row = grouped[{r.speech_id, r.translation_kind, r.unit}];
    row[static_cast<std::size_t>(r.score - 1)] += 1;
  }

  AgreementMatrix matrix;
  for (const auto& [key, row] : grouped) {
    AgreementItem item{std::get<0>(key), std::get<1>(key), std::get<2>(key)};
    int raters = 0;
    for (int c : row) {
      raters += c;
    }
    if (raters < 2) {
      matrix.excluded.emplace_back(std::move(item), "fewer than 2 raters");
      continue;
    }
    matrix.items.push_back(std::move(item));
    matrix.counts.push_back(row);
  }
  return matrix;
}

AgreementMatrix equalize_rater_counts(AgreementMatrix matrix) {
  std::map<int, std::size_t> count_freq;
  std::vector<int> row_sums(matrix.counts.size());
  for (std::size_t i = 0; i < matrix.counts.size(); ++i) {
    int sum = 0;
    for (int c : matrix.counts[i]) {
      sum += c;
    }
    row_sums[i] = sum;
    count_freq[sum] += 1;
  }
  if (count_freq.size() <= 1) {
    return matrix;
  }
  int target = 0;
  std::size_t best = 0;
  for (const auto& [sum, freq] : count_freq) {
    if (freq > best || (freq == best && sum > target)) {
      best = freq;
      target = sum;
    }
  }

  AgreementMatrix out;
  out.excluded = std::move(matrix.excluded);
  for (std::size_t i = 0; i < matrix.counts.size(); ++i) {
    if (row_sums[i] == target) {
      out.items.push_back(std::move(matrix.items[i]));
      out.counts.push_back(matrix.counts[i]);
    } else {
      out.excluded.emplace_back(std::move(matrix.items[i]),
                                "rater count " + std::to_string(row_sums[i]) +
                                    " != modal count " + std::to_string(target));
    }
  }
  return out;
}

}  // namespace interpeval
