#ifndef INTERPEVAL_CSV_HPP_
#define INTERPEVAL_CSV_HPP_

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace interpeval::csv {

// One parsed row; row_number is 1-based and counts the header.
struct Row {
  std::size_t row_number = 0;
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

// RFC-4180-style parsing: quoted fields, doubled quotes, CRLF tolerated.
// Embedded line breaks inside quotes are not supported (the formats written
// here never produce them).
std::vector<std::string> parse_line(std::string_view line, std::size_t row_number);

// Reads a whole file; the first row is the header. Blank lines are skipped.
Table read_file(const std::filesystem::path& path);

// Quotes a field only when needed (comma, quote, CR/LF).
std::string escape(std::string_view field);

// Shortest round-trip decimal form, deterministic for a given platform.
std::string format_double(double value);

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);

  void write_row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
};

}  // namespace interpeval::csv

#endif  // INTERPEVAL_CSV_HPP_
