#include "interpeval/csv.hpp"

#include <charconv>
#include <system_error>

#include "interpeval/error.hpp"

namespace interpeval::csv {

std::vector<std::string> parse_line(std::string_view line, std::size_t row_number) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  std::size_t i = 0;
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1);
  }
  while (i < line.size()) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      if (!current.empty()) {
        throw DataError("row " + std::to_string(row_number) +
                        ": quote inside unquoted field");
      }
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
    ++i;
  }
  if (in_quotes) {
    throw DataError("row " + std::to_string(row_number) + ": unterminated quote");
  }
  fields.push_back(std::move(current));
  return fields;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  Table table;
  std::string line;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty() || line == "\r") {
      continue;
    }
    auto fields = parse_line(line, row_number);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      table.rows.push_back({row_number, std::move(fields)});
    }
  }
  if (table.header.empty()) {
    throw DataError(path.string() + ": empty file, header row required");
  }
  return table;
}

std::string escape(std::string_view field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw DataError("failed to format double");
  }
  return std::string(buf, ptr);
}

Writer::Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
  if (!out_) {
    throw DataError("cannot write " + path.string());
  }
}

void Writer::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out_ << ',';
    }
    out_ << escape(fields[i]);
  }
  out_ << '\n';
  if (!out_) {
    throw DataError("write failed");
  }
}

}  // namespace interpeval::csv
