#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "errors.hpp"

namespace vanetflow::csv {

namespace {

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos ||
         (!s.empty() && (s.front() == ' ' || s.back() == ' ' || s.front() == '#'));
}

void write_cell(const Cell& cell, std::ostream& out) {
  if (const double* d = std::get_if<double>(&cell)) {
    out << format_double(*d);
    return;
  }
  const auto& s = std::get<std::string>(cell);
  // Text that would read back as a number is quoted to keep its type.
  double probe = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), probe);
  const bool numeric_looking = !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
  if (!numeric_looking && !needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::vector<Cell> split_row(std::string_view line, bool typed) {
  std::vector<Cell> cells;
  std::size_t i = 0;
  while (true) {
    std::string text;
    bool quoted = false;
    if (i < line.size() && line[i] == '"') {
      quoted = true;
      ++i;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            text.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        text.push_back(line[i++]);
      }
    } else {
      const auto comma = line.find(',', i);
      const auto end = comma == std::string_view::npos ? line.size() : comma;
      text.assign(line.substr(i, end - i));
      i = end;
    }
    if (typed && !quoted && !text.empty()) {
      double d = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
      if (ec == std::errc() && ptr == text.data() + text.size()) {
        cells.emplace_back(d);
      } else {
        cells.emplace_back(std::move(text));
      }
    } else {
      cells.emplace_back(std::move(text));
    }
    if (i >= line.size()) break;
    if (line[i] != ',') throw IoError("csv: malformed quoted field");
    ++i;
  }
  return cells;
}

}  // namespace

std::vector<std::string> comment_lines(std::string_view text) {
  std::vector<std::string> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.emplace_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

void write_table(const Table& table, std::ostream& out) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    write_cell(table.columns[i], out);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      write_cell(row[i], out);
    }
    out << '\n';
  }
}

std::string to_string(const Table& table) {
  std::ostringstream out;
  write_table(table, out);
  return out.str();
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_table(table, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Table parse_table(std::string_view text) {
  Table table;
  bool header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!header && !line.empty() && line.front() == '#') {
      line.remove_prefix(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      table.comments.emplace_back(line);
      continue;
    }
    if (!header) {
      for (auto& c : split_row(line, false)) table.columns.push_back(std::get<std::string>(c));
      header = true;
      continue;
    }
    if (line.empty() && text.empty()) break;
    table.rows.push_back(split_row(line, true));
  }
  return table;
}

}  // namespace vanetflow::csv
