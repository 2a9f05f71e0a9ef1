#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace daogini::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // each row has header.size() fields

  // Index of a header column, or -1.
  int find(std::string_view name) const;
};

// Strict RFC-4180-ish reader: comma separated, optional double-quote quoting
// with "" escapes, LF or CRLF line ends, UTF-8 passed through untouched.
// Every data row must match the header width; errors carry 1-based line
// numbers.
Table read_file(const std::filesystem::path& path);
Table read_string(const std::string& text, const std::string& origin = "<string>");

// Quotes a field only when needed.
std::string escape_field(const std::string& field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace daogini::csv
