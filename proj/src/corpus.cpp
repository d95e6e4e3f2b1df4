#include "interpeval/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "interpeval/error.hpp"
#include "interpeval/text.hpp"

namespace interpeval {

using nlohmann::json;

const char* to_string(TranslationKind kind) {
  return kind == TranslationKind::H ? "H" : "M";
}

std::optional<TranslationKind> parse_translation_kind(std::string_view s) {
  if (s == "H") return TranslationKind::H;
  if (s == "M") return TranslationKind::M;
  return std::nullopt;
}

namespace {

const char* to_string(SpeakerGender g) {
  switch (g) {
    case SpeakerGender::male: return "male";
    case SpeakerGender::female: return "female";
    default: return "unknown";
  }
}

const char* to_string(SpeakerAccent a) {
  switch (a) {
    case SpeakerAccent::native: return "native";
    case SpeakerAccent::nonnative: return "nonnative";
    default: return "unknown";
  }
}

const char* to_string(Genre g) {
  switch (g) {
    case Genre::corporate: return "corporate";
    case Genre::political: return "political";
    case Genre::general: return "general";
    default: return "unknown";
  }
}

SpeakerGender parse_gender(const std::string& s) {
  if (s == "male") return SpeakerGender::male;
  if (s == "female") return SpeakerGender::female;
  return SpeakerGender::unknown;
}

SpeakerAccent parse_accent(const std::string& s) {
  if (s == "native") return SpeakerAccent::native;
  if (s == "nonnative" || s == "non-native") return SpeakerAccent::nonnative;
  return SpeakerAccent::unknown;
}

Genre parse_genre(const std::string& s) {
  if (s == "corporate") return Genre::corporate;
  if (s == "political") return Genre::political;
  if (s == "general") return Genre::general;
  return Genre::unknown;
}

[[noreturn]] void fail_line(std::string_view origin, std::size_t line,
                            const std::string& message) {
  throw DataError(std::string(origin) + ":" + std::to_string(line) + ": " + message);
}

std::string require_string(const json& record, const char* key,
                           std::string_view origin, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    fail_line(origin, line, std::string("missing or non-string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

}  // namespace

const SpeechMeta* Corpus::find_speech(std::string_view speech_id) const {
  for (const auto& s : speeches) {
    if (s.speech_id == speech_id) {
      return &s;
    }
  }
  return nullptr;
}

std::vector<const SegmentPair*> Corpus::segments_of(std::string_view speech_id,
                                                    TranslationKind kind) const {
  std::vector<const SegmentPair*> out;
  for (const auto& seg : segments) {
    if (seg.speech_id == speech_id && seg.translation_kind == kind) {
      out.push_back(&seg);
    }
  }
  std::sort(out.begin(), out.end(), [](const SegmentPair* a, const SegmentPair* b) {
    return a->segment_index < b->segment_index;
  });
  return out;
}

Corpus parse_corpus(std::string_view jsonl, std::string_view origin) {
  Corpus corpus;
  std::set<std::string> speech_ids;
  std::set<std::tuple<std::string, int, TranslationKind>> segment_keys;
  std::map<std::tuple<std::string, int, TranslationKind>, std::size_t> segment_lines;

  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      fail_line(origin, line_number, "malformed JSON record");
    }
    const std::string type = require_string(record, "type", origin, line_number);
    if (type == "speech") {
      SpeechMeta meta;
      meta.speech_id = require_string(record, "speech_id", origin, line_number);
      if (meta.speech_id.empty()) {
        fail_line(origin, line_number, "empty speech_id");
      }
      if (!speech_ids.insert(meta.speech_id).second) {
        fail_line(origin, line_number, "duplicate speech_id \"" + meta.speech_id + "\"");
      }
      if (record.contains("speaker_gender")) {
        meta.speaker_gender = parse_gender(record["speaker_gender"].get<std::string>());
      }
      if (record.contains("speaker_accent")) {
        meta.speaker_accent = parse_accent(record["speaker_accent"].get<std::string>());
      }
      if (record.contains("genre")) {
        meta.genre = parse_genre(record["genre"].get<std::string>());
      }
      corpus.speeches.push_back(std::move(meta));
    } else if (type == "segment") {
      SegmentPair seg;
      seg.speech_id = require_string(record, "speech_id", origin, line_number);
      auto idx = record.find("segment_index");
      if (idx == record.end() || !idx->is_number_integer()) {
        fail_line(origin, line_number, "missing or non-integer segment_index");
      }
      seg.segment_index = idx->get<int>();
      if (seg.segment_index < 0) {
        fail_line(origin, line_number, "negative segment_index");
      }
      const std::string kind_str =
          require_string(record, "translation_kind", origin, line_number);
      auto kind = parse_translation_kind(kind_str);
      if (!kind) {
        fail_line(origin, line_number,
                  "unknown translation_kind \"" + kind_str + "\" (expected H or M)");
      }
      seg.translation_kind = *kind;
      seg.source_text = normalize_text(require_string(record, "source_text", origin, line_number));
      seg.target_text = normalize_text(require_string(record, "target_text", origin, line_number));
      auto key = std::make_tuple(seg.speech_id, seg.segment_index, seg.translation_kind);
      if (!segment_keys.insert(key).second) {
        fail_line(origin, line_number,
                  "duplicate segment (speech=" + seg.speech_id + ", index=" +
                      std::to_string(seg.segment_index) + ", kind=" + kind_str + ")");
      }
      segment_lines[key] = line_number;
      corpus.segments.push_back(std::move(seg));
    } else {
      fail_line(origin, line_number, "unknown record type \"" + type + "\"");
    }
  }

  ValidationReport report = validate_corpus(corpus);
  if (!report.empty()) {
    std::string message = std::string(origin) + ": invalid corpus:";
    for (const auto& v : report) {
      message += "\n  " + v.location + ": " + v.message;
    }
    throw DataError(message);
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  (void)format;  // jsonl is the only format
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open corpus file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus(buffer.str(), path.string());
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  auto add = [&report](std::string location, std::string message) {
    report.push_back({std::move(location), std::move(message)});
  };

  std::set<std::string> speech_ids;
  for (const auto& s : corpus.speeches) {
    if (s.speech_id.empty()) {
      add("speech=?", "empty speech_id");
      continue;
    }
    if (!speech_ids.insert(s.speech_id).second) {
      add("speech=" + s.speech_id, "duplicate speech_id");
    }
  }

  // Group segment indices per (speech, kind).
  std::map<std::pair<std::string, TranslationKind>, std::vector<const SegmentPair*>> groups;
  std::set<std::tuple<std::string, int, TranslationKind>> seen;
  for (const auto& seg : corpus.segments) {
    std::string loc = "speech=" + seg.speech_id + " kind=" +
                      to_string(seg.translation_kind) + " segment=" +
                      std::to_string(seg.segment_index);
    if (!speech_ids.count(seg.speech_id)) {
      add(loc, "segment references undeclared speech_id");
    }
    if (seg.source_text.empty()) {
      add(loc, "empty source_text");
    }
    if (seg.target_text.empty()) {
      add(loc, "empty target_text");
    }
    if (seg.source_text.find('\n') != std::string::npos ||
        seg.target_text.find('\n') != std::string::npos) {
      add(loc, "text contains line break");
    }
    auto key = std::make_tuple(seg.speech_id, seg.segment_index, seg.translation_kind);
    if (!seen.insert(key).second) {
      add(loc, "duplicate (speech_id, segment_index, translation_kind)");
    }
    groups[{seg.speech_id, seg.translation_kind}].push_back(&seg);
  }

  for (auto& [key, segs] : groups) {
    std::sort(segs.begin(), segs.end(), [](const SegmentPair* a, const SegmentPair* b) {
      return a->segment_index < b->segment_index;
    });
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (segs[i]->segment_index != static_cast<int>(i)) {
        add("speech=" + key.first + " kind=" + to_string(key.second),
            "non-contiguous indices: expected 0.." + std::to_string(segs.size() - 1));
        break;
      }
    }
  }

  // Same source sequence across kinds for each speech.
  for (const auto& speech_id : speech_ids) {
    auto h = groups.find({speech_id, TranslationKind::H});
    auto m = groups.find({speech_id, TranslationKind::M});
    if (h == groups.end() || m == groups.end()) {
      continue;  // single-kind speeches are allowed
    }
    if (h->second.size() != m->second.size()) {
      add("speech=" + speech_id,
          "segment count differs across kinds (H=" + std::to_string(h->second.size()) +
              ", M=" + std::to_string(m->second.size()) + ")");
      continue;
    }
    for (std::size_t i = 0; i < h->second.size(); ++i) {
      if (h->second[i]->source_text != m->second[i]->source_text) {
        add("speech=" + speech_id + " segment=" + std::to_string(i),
            "source_text differs between kinds H and M");
      }
    }
  }

  return report;
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus.speeches) {
    json record = {
        {"type", "speech"},
        {"speech_id", s.speech_id},
        {"speaker_gender", to_string(s.speaker_gender)},
        {"speaker_accent", to_string(s.speaker_accent)},
        {"genre", to_string(s.genre)},
    };
    out += record.dump();
    out += '\n';
  }
  for (const auto& seg : corpus.segments) {
    json record = {
        {"type", "segment"},
        {"speech_id", seg.speech_id},
        {"segment_index", seg.segment_index},
        {"translation_kind", to_string(seg.translation_kind)},
        {"source_text", seg.source_text},
        {"target_text", seg.target_text},
    };
    out += record.dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write corpus file " + path.string());
  }
  out << serialize_corpus(corpus);
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  std::map<std::string, SpeechStats> per_speech;
  std::set<std::pair<std::string, int>> distinct_sources;

  for (const auto& seg : corpus.segments) {
    auto& sp = per_speech[seg.speech_id];
    sp.speech_id = seg.speech_id;
    auto& side = sp.per_kind[seg.translation_kind];
    const std::size_t src = token_count(seg.source_text);
    const std::size_t tgt = token_count(seg.target_text);
    side.segments += 1;
    side.source_tokens += src;
    side.target_tokens += tgt;

    auto& total = stats.totals_per_kind[seg.translation_kind];
    total.segments += 1;
    total.source_tokens += src;
    total.target_tokens += tgt;

    if (distinct_sources.insert({seg.speech_id, seg.segment_index}).second) {
      stats.distinct_source_segments += 1;
      stats.distinct_source_tokens += src;
    }
  }

  // Keep corpus declaration order for speeches that have segments.
  for (const auto& s : corpus.speeches) {
    auto it = per_speech.find(s.speech_id);
    if (it != per_speech.end()) {
      stats.per_speech.push_back(it->second);
      per_speech.erase(it);
    }
  }
  for (auto& [id, sp] : per_speech) {
    stats.per_speech.push_back(std::move(sp));
  }

  if (stats.distinct_source_segments > 0) {
    stats.mean_source_segment_length =
        static_cast<double>(stats.distinct_source_tokens) /
        static_cast<double>(stats.distinct_source_segments);
  }
  return stats;
}

std::ostream& operator<<(std::ostream& os, const CorpusStats& stats) {
  os << "speeches: " << stats.per_speech.size() << "\n";
  for (const auto& sp : stats.per_speech) {
    os << "  " << sp.speech_id << ":";
    for (const auto& [kind, side] : sp.per_kind) {
      os << " " << to_string(kind) << "(segments=" << side.segments
         << ", src_tokens=" << side.source_tokens
         << ", tgt_tokens=" << side.target_tokens << ")";
    }
    os << "\n";
  }
  for (const auto& [kind, side] : stats.totals_per_kind) {
    os << "kind " << to_string(kind) << ": segments=" << side.segments
       << " src_tokens=" << side.source_tokens
       << " tgt_tokens=" << side.target_tokens << "\n";
  }
  os << "distinct source segments: " << stats.distinct_source_segments << "\n";
  os << "distinct source tokens: " << stats.distinct_source_tokens << "\n";
  os << "mean source segment length: " << stats.mean_source_segment_length << "\n";
  return os;
}

}  // namespace interpeval
