#pragma once

#include <deque>
#include <optional>

namespace vanetflow {

// Detects congestion at the field origin: the mean velocity of all samples
// taken at positions [0, probe_length] during the trailing `window` seconds
// falls below `threshold`. Used online by the engine (stop-at-origin) and
// offline by the metrics, so both agree on the onset time.
class OriginProbe {
 public:
  static constexpr double kProbeLength = 100.0;  // m
  static constexpr double kWindow = 10.0;        // s
  static constexpr double kThreshold = 5.0;      // m/s

  explicit OriginProbe(double start_time, double probe_length = kProbeLength,
                       double window = kWindow, double threshold = kThreshold)
      : start_time_(start_time),
        probe_length_(probe_length),
        window_(window),
        threshold_(threshold) {}

  void add_sample(double time, double position, double velocity) {
    if (position < 0.0 || position > probe_length_) return;
    if (buckets_.empty() || buckets_.back().time != time) {
      buckets_.push_back({time, 0.0, 0});
    }
    buckets_.back().sum += velocity;
    ++buckets_.back().count;
  }

  // Evaluates the window ending at `now`; returns `now` on the first
  // detection and the same value on every later call.
  std::optional<double> evaluate(double now) {
    if (detected_) return detected_;
    while (!buckets_.empty() && buckets_.front().time <= now - window_) {
      buckets_.pop_front();
    }
    if (now < start_time_ + window_) return std::nullopt;
    double sum = 0.0;
    long count = 0;
    for (const auto& b : buckets_) {
      sum += b.sum;
      count += b.count;
    }
    if (count > 0 && sum / double(count) < threshold_) detected_ = now;
    return detected_;
  }

 private:
  struct Bucket {
    double time;
    double sum;
    long count;
  };
  double start_time_;
  double probe_length_;
  double window_;
  double threshold_;
  std::deque<Bucket> buckets_;
  std::optional<double> detected_;
};

}  // namespace vanetflow
