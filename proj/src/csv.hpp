#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vanetflow::csv {

using Cell = std::variant<double, std::string>;

// A metric table: `#` comment lines (config echo, seed), a header row and
// records. Numbers are written in shortest round-trip form.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  bool operator==(const Table&) const = default;
};

// Splits a multi-line echo into comment lines.
std::vector<std::string> comment_lines(std::string_view text);

void write_table(const Table& table, std::ostream& out);
std::string to_string(const Table& table);
// Throws IoError naming the path when it cannot be written.
void write_csv(const Table& table, const std::filesystem::path& path);

// Inverse of write_table. Cells that parse completely as numbers become
// doubles, everything else stays text.
Table parse_table(std::string_view text);

}  // namespace vanetflow::csv
