#include "event_log.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "errors.hpp"

namespace vanetflow {

namespace {

constexpr std::array<std::string_view, 9> kKindNames = {
    "injection",     "exit",      "lane_change",      "transmission",
    "reception",     "infection", "gridlock",         "origin_congested",
    "sample"};

template <typename T>
T parse_field(std::string_view text, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IoError("events.csv line " + std::to_string(line_no) +
                  ": malformed field '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

void write_events_csv(const EventLog& log, std::ostream& out) {
  std::string_view echo = log.config_echo;
  while (!echo.empty()) {
    const auto nl = echo.find('\n');
    out << "# " << echo.substr(0, nl) << '\n';
    if (nl == std::string_view::npos) break;
    echo.remove_prefix(nl + 1);
  }
  out << kEventCsvHeader << '\n';
  std::string row;
  for (const Event& e : log.events) {
    row.clear();
    row += format_double(e.time);
    row += ',';
    row += to_string(e.kind);
    row += ',';
    row += std::to_string(e.vehicle_id);
    row += ',';
    row += std::to_string(e.lane);
    row += ',';
    row += format_double(e.position);
    row += ',';
    row += format_double(e.velocity);
    row += ',';
    row += std::to_string(e.aux);
    row += '\n';
    out << row;
  }
}

std::string events_to_csv(const EventLog& log) {
  std::ostringstream out;
  write_events_csv(log, out);
  return out.str();
}

EventLog parse_events_csv(std::string_view text) {
  EventLog log;
  bool seen_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      log.config_echo.append(line);
      log.config_echo.push_back('\n');
      continue;
    }
    if (!seen_header) {
      if (line != kEventCsvHeader) {
        throw IoError("events.csv: unexpected header '" + std::string(line) + "'");
      }
      seen_header = true;
      continue;
    }
    std::array<std::string_view, 7> f;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto comma = line.find(',');
      if ((comma == std::string_view::npos) != (i + 1 == f.size())) {
        throw IoError("events.csv line " + std::to_string(line_no) +
                      ": expected 7 fields");
      }
      f[i] = line.substr(0, comma);
      if (comma != std::string_view::npos) line.remove_prefix(comma + 1);
    }
    Event e;
    e.time = parse_field<double>(f[0], line_no);
    const auto kind = parse_event_kind(f[1]);
    if (!kind) {
      throw IoError("events.csv line " + std::to_string(line_no) +
                    ": unknown event kind '" + std::string(f[1]) + "'");
    }
    e.kind = *kind;
    e.vehicle_id = parse_field<std::uint64_t>(f[2], line_no);
    e.lane = parse_field<int>(f[3], line_no);
    e.position = parse_field<double>(f[4], line_no);
    e.velocity = parse_field<double>(f[5], line_no);
    e.aux = parse_field<std::int64_t>(f[6], line_no);
    log.events.push_back(e);
  }
  return log;
}

}  // namespace vanetflow
