#include "interpeval/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

#include "interpeval/error.hpp"

namespace interpeval {

namespace {

struct Value {
  std::variant<std::string, long long, double, bool, std::vector<long long>> data;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, Value>> entries;
};

[[noreturn]] void fail(std::string_view origin, std::size_t line,
                       const std::string& message) {
  throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Strips a trailing # comment outside quoted strings.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (in_string) {
      if (line[i] == '\\') {
        ++i;
      } else if (line[i] == '"') {
        in_string = false;
      }
    } else if (line[i] == '"') {
      in_string = true;
    } else if (line[i] == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string parse_string_token(std::string_view token, std::string_view origin,
                               std::size_t line) {
  if (token.size() < 2 || token.front() != '"' || token.back() != '"') {
    fail(origin, line, "expected a quoted string, got: " + std::string(token));
  }
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 1; i + 1 < token.size(); ++i) {
    const char c = token[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 1 >= token.size() - 1) {
      fail(origin, line, "dangling escape in string");
    }
    ++i;
    switch (token[i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      default:
        fail(origin, line, std::string("unknown escape \\") + token[i]);
    }
  }
  return out;
}

Value parse_value(std::string_view token, std::string_view origin, std::size_t line) {
  token = trim(token);
  if (token.empty()) {
    fail(origin, line, "missing value");
  }
  if (token.front() == '"') {
    // Reject trailing garbage after the closing quote.
    bool closed = false;
    for (std::size_t i = 1; i < token.size(); ++i) {
      if (token[i] == '\\') {
        ++i;
      } else if (token[i] == '"') {
        if (i != token.size() - 1) {
          fail(origin, line, "unexpected text after closing quote");
        }
        closed = true;
      }
    }
    if (!closed) {
      fail(origin, line, "unterminated string");
    }
    return {parse_string_token(token, origin, line), line};
  }
  if (token.front() == '[') {
    if (token.back() != ']') {
      fail(origin, line, "unterminated array (arrays must fit on one line)");
    }
    std::vector<long long> items;
    std::string_view body = token.substr(1, token.size() - 2);
    while (true) {
      body = trim(body);
      if (body.empty()) {
        break;
      }
      const std::size_t comma = body.find(',');
      std::string_view item = trim(body.substr(0, comma));
      long long value = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
      if (ec != std::errc() || ptr != item.data() + item.size()) {
        fail(origin, line, "array elements must be integers, got: " + std::string(item));
      }
      items.push_back(value);
      if (comma == std::string_view::npos) {
        break;
      }
      body = body.substr(comma + 1);
    }
    return {std::move(items), line};
  }
  if (token == "true") {
    return {true, line};
  }
  if (token == "false") {
    return {false, line};
  }
  long long integer = 0;
  auto [iptr, iec] = std::from_chars(token.data(), token.data() + token.size(), integer);
  if (iec == std::errc() && iptr == token.data() + token.size()) {
    return {integer, line};
  }
  double real = 0.0;
  auto [dptr, dec] = std::from_chars(token.data(), token.data() + token.size(), real);
  if (dec == std::errc() && dptr == token.data() + token.size()) {
    return {real, line};
  }
  fail(origin, line, "cannot parse value: " + std::string(token));
}

std::vector<Section> parse_sections(std::string_view text, std::string_view origin) {
  std::vector<Section> sections;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_number;

    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail(origin, line_number, "malformed section header: " + std::string(line));
      }
      Section section;
      section.name = std::string(trim(line.substr(1, line.size() - 2)));
      section.line = line_number;
      if (section.name.empty()) {
        fail(origin, line_number, "empty section name");
      }
      sections.push_back(std::move(section));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(origin, line_number, "expected key = value, got: " + std::string(line));
    }
    if (sections.empty()) {
      fail(origin, line_number, "key outside any [section]");
    }
    const std::string key{trim(line.substr(0, eq))};
    if (key.empty()) {
      fail(origin, line_number, "empty key");
    }
    for (const auto& [existing, value] : sections.back().entries) {
      if (existing == key) {
        fail(origin, line_number,
             "duplicate key \"" + key + "\" in [" + sections.back().name + "]");
      }
    }
    sections.back().entries.emplace_back(
        key, parse_value(line.substr(eq + 1), origin, line_number));
  }
  return sections;
}

class SectionReader {
 public:
  SectionReader(const Section& section, std::string_view origin)
      : section_(section), origin_(origin) {}

  ~SectionReader() = default;

  bool has(const std::string& key) const {
    for (const auto& [k, v] : section_.entries) {
      if (k == key) {
        return true;
      }
    }
    return false;
  }

  const Value* find(const std::string& key) {
    used_.insert(key);
    for (const auto& [k, v] : section_.entries) {
      if (k == key) {
        return &v;
      }
    }
    return nullptr;
  }

  std::string get_string(const std::string& key, std::string fallback = {}) {
    const Value* v = find(key);
    if (v == nullptr) {
      return fallback;
    }
    if (const auto* s = std::get_if<std::string>(&v->data)) {
      return *s;
    }
    fail(origin_, v->line, "key \"" + key + "\" must be a quoted string");
  }

  long long get_int(const std::string& key, long long fallback) {
    const Value* v = find(key);
    if (v == nullptr) {
      return fallback;
    }
    if (const auto* i = std::get_if<long long>(&v->data)) {
      return *i;
    }
    fail(origin_, v->line, "key \"" + key + "\" must be an integer");
  }

  double get_double(const std::string& key, double fallback) {
    const Value* v = find(key);
    if (v == nullptr) {
      return fallback;
    }
    if (const auto* d = std::get_if<double>(&v->data)) {
      return *d;
    }
    if (const auto* i = std::get_if<long long>(&v->data)) {
      return static_cast<double>(*i);
    }
    fail(origin_, v->line, "key \"" + key + "\" must be a number");
  }

  std::vector<long long> get_int_array(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) {
      return {};
    }
    if (const auto* a = std::get_if<std::vector<long long>>(&v->data)) {
      return *a;
    }
    fail(origin_, v->line, "key \"" + key + "\" must be an integer array");
  }

  void reject_unknown_keys() const {
    for (const auto& [k, v] : section_.entries) {
      if (!used_.count(k)) {
        fail(origin_, v.line,
             "unknown key \"" + k + "\" in [" + section_.name + "]");
      }
    }
  }

 private:
  const Section& section_;
  std::string_view origin_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base_dir,
                              const std::string& raw) {
  if (raw.empty()) {
    return {};
  }
  std::filesystem::path p(raw);
  return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

}  // namespace

StudyConfig parse_study_config(std::string_view text,
                               const std::filesystem::path& base_dir,
                               std::string_view origin) {
  const std::vector<Section> sections = parse_sections(text, origin);
  StudyConfig config;
  bool saw_study = false;

  for (const auto& section : sections) {
    SectionReader reader(section, origin);
    if (section.name == "study") {
      if (saw_study) {
        fail(origin, section.line, "duplicate [study] section");
      }
      saw_study = true;
      config.corpus_path = resolve(base_dir, reader.get_string("corpus"));
      config.ratings_path = resolve(base_dir, reader.get_string("ratings"));
      config.output_dir = resolve(base_dir, reader.get_string("output_dir"));
      if (reader.has("granularity")) {
        const std::string raw = reader.get_string("granularity");
        const auto parsed = parse_granularity(raw);
        if (!parsed) {
          fail(origin, section.line, "unknown granularity \"" + raw + "\"");
        }
        config.granularity = *parsed;
      }
      if (reader.has("dimension")) {
        const std::string raw = reader.get_string("dimension");
        const auto parsed = parse_dimension(raw);
        if (!parsed) {
          fail(origin, section.line, "unknown dimension \"" + raw + "\"");
        }
        config.dimension = *parsed;
      }
      if (reader.has("window_sizes")) {
        config.window_sizes.clear();
        for (long long k : reader.get_int_array("window_sizes")) {
          config.window_sizes.push_back(static_cast<int>(k));
        }
      }
      if (reader.has("window_policy")) {
        const std::string raw = reader.get_string("window_policy");
        const auto parsed = parse_window_policy(raw);
        if (!parsed) {
          fail(origin, section.line, "unknown window_policy \"" + raw + "\"");
        }
        config.policy = *parsed;
      }
      if (reader.has("correlation_unit")) {
        const std::string raw = reader.get_string("correlation_unit");
        const auto parsed = parse_correlation_unit(raw);
        if (!parsed) {
          fail(origin, section.line, "unknown correlation_unit \"" + raw + "\"");
        }
        config.unit = *parsed;
      }
      config.seed = static_cast<std::uint64_t>(
          reader.get_int("seed", static_cast<long long>(config.seed)));
      config.judge_retries =
          static_cast<int>(reader.get_int("judge_retries", config.judge_retries));
      config.judge_failure_threshold =
          reader.get_double("judge_failure_threshold", config.judge_failure_threshold);
      reader.reject_unknown_keys();
    } else if (section.name.rfind("backend.", 0) == 0) {
      BackendConfig backend;
      backend.backend_id = section.name.substr(8);
      if (backend.backend_id.empty()) {
        fail(origin, section.line, "backend section needs a name: [backend.<id>]");
      }
      const std::string raw_kind = reader.get_string("kind");
      const auto kind = parse_backend_kind(raw_kind);
      if (!kind) {
        fail(origin, section.line, "unknown backend kind \"" + raw_kind + "\"");
      }
      backend.kind = *kind;
      backend.endpoint_url = reader.get_string("endpoint_url");
      backend.model_name = reader.get_string("model_name");
      if (reader.has("embedding_dim")) {
        backend.embedding_dim = static_cast<int>(reader.get_int("embedding_dim", 0));
      }
      backend.api_key_env = reader.get_string("api_key_env");
      backend.max_in_flight =
          static_cast<int>(reader.get_int("max_in_flight", backend.max_in_flight));
      backend.max_retries =
          static_cast<int>(reader.get_int("max_retries", backend.max_retries));
      backend.timeout =
          std::chrono::milliseconds(reader.get_int("timeout_ms", backend.timeout.count()));
      backend.retry_base = std::chrono::milliseconds(
          reader.get_int("retry_base_ms", backend.retry_base.count()));
      backend.batch_size =
          static_cast<int>(reader.get_int("batch_size", backend.batch_size));
      if (reader.has("cache_dir")) {
        backend.cache_dir = resolve(base_dir, reader.get_string("cache_dir"));
      }
      backend.mock_seed = static_cast<std::uint64_t>(reader.get_int("mock_seed", 0));
      reader.reject_unknown_keys();
      config.backends.push_back(std::move(backend));
    } else if (section.name.rfind("method.", 0) == 0) {
      MethodSpec method;
      method.method_id = section.name.substr(7);
      if (method.method_id.empty()) {
        fail(origin, section.line, "method section needs a name: [method.<id>]");
      }
      method.backend_id = reader.get_string("backend");
      const std::string raw_mode = reader.get_string("mode");
      const auto mode = parse_method_mode(raw_mode);
      if (!mode) {
        fail(origin, section.line, "unknown method mode \"" + raw_mode + "\"");
      }
      method.mode = *mode;
      if (reader.has("prompt_template")) {
        method.prompt_template = reader.get_string("prompt_template");
      }
      reader.reject_unknown_keys();
      config.methods.push_back(std::move(method));
    } else {
      fail(origin, section.line, "unknown section [" + section.name + "]");
    }
  }

  if (!saw_study) {
    throw ConfigError(std::string(origin) + ": missing [study] section");
  }
  return config;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_study_config(buffer.str(), path.parent_path(), path.string());
}

}  // namespace interpeval
