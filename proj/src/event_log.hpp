#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vanetflow {

enum class EventKind : std::uint8_t {
  kInjection,
  kExit,
  kLaneChange,      // lane = from, aux = to
  kTransmission,    // aux = message id; vehicle 0 is the obstacle
  kReception,       // aux = message id
  kInfection,       // aux = message id
  kGridlock,        // aux = vehicles upstream of the obstacle
  kOriginCongested, // congestion reached the field origin
  kSample,          // per-tick position/velocity of every vehicle
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::kSample;
  std::uint64_t vehicle_id = 0;
  int lane = 0;
  double position = 0.0;
  double velocity = 0.0;
  std::int64_t aux = 0;

  bool operator==(const Event&) const = default;
};

struct EventLog {
  std::string config_echo;  // canonical `key = value` lines
  std::vector<Event> events;

  bool operator==(const EventLog&) const = default;
};

inline constexpr std::string_view kEventCsvHeader =
    "time_s,event_kind,vehicle_id,lane,position_m,velocity_mps,aux";

// `#`-prefixed config echo, the header row, then one row per event.
void write_events_csv(const EventLog& log, std::ostream& out);
std::string events_to_csv(const EventLog& log);
// Inverse of write_events_csv. Throws IoError on malformed input.
EventLog parse_events_csv(std::string_view text);

}  // namespace vanetflow
