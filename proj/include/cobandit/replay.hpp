#pragma once

#include <functional>
#include <vector>

#include "cobandit/clustering.hpp"
#include "cobandit/events.hpp"
#include "cobandit/policies.hpp"

namespace cobandit {

/// Bucketed / rolling / cumulative CTR trajectories from a replay run.
struct MetricsSeries {
  std::size_t bucket_size = 2000;
  std::size_t window = 500;

  std::vector<long long> bucket_matched;
  std::vector<long long> bucket_clicks;

  long long total_events = 0;
  long long total_matched = 0;
  long long total_clicks = 0;
  long long skipped = 0;  // malformed events

  std::vector<double> bucket_ctr() const;
  std::vector<double> rolling_ctr() const;  // rolling_average over bucket_ctr
  std::vector<double> cumulative_ctr() const;

  double overall_ctr() const {
    return total_matched ? static_cast<double>(total_clicks) / total_matched : 0.0;
  }
};

struct ReplayOptions {
  std::size_t bucket_size = 2000;
  std::size_t window = 500;
  /// When true, bucket boundaries count every event; default counts matched
  /// (evaluated) events only.
  bool bucket_raw = false;
  /// Optional progress hook, called every `progress_every` events when set.
  std::size_t progress_every = 0;
  std::function<void(long long)> on_progress;
};

/// Abstract event source so logs can be replayed from memory or streamed from
/// disk without buffering.
class EventStream {
 public:
  virtual ~EventStream() = default;
  virtual bool next(EventRecord& out) = 0;
};

class VectorEventStream final : public EventStream {
 public:
  explicit VectorEventStream(const std::vector<EventRecord>& events) : events_(events) {}
  bool next(EventRecord& out) override {
    if (pos_ >= events_.size()) return false;
    out = events_[pos_++];
    return true;
  }

 private:
  const std::vector<EventRecord>& events_;
  std::size_t pos_ = 0;
};

/// Match-then-update offline evaluation: the policy is scored and updated only
/// on events where its choice coincides with the logged display. Events whose
/// displayed arm is missing from the pool are counted in `skipped`.
MetricsSeries replay(Policy& policy, const ClusterModel& clusters, EventStream& events,
                     const ReplayOptions& opts = {});

/// Trailing mean with partial windows at the head averaged over the points
/// available; output has the same length as the input.
std::vector<double> rolling_average(const std::vector<double>& series, std::size_t window);

/// Elementwise cumulative-CTR ratio against a random-policy baseline; buckets
/// with a zero denominator yield NaN (emitted as an empty CSV field).
std::vector<double> normalize_by_random(const MetricsSeries& policy_series,
                                        const MetricsSeries& random_series);

}  // namespace cobandit
