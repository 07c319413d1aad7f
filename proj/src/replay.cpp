#include "cobandit/replay.hpp"

#include <cmath>
#include <limits>

namespace cobandit {

std::vector<double> MetricsSeries::bucket_ctr() const {
  std::vector<double> out(bucket_matched.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = bucket_matched[i] ? static_cast<double>(bucket_clicks[i]) / bucket_matched[i] : 0.0;
  return out;
}

std::vector<double> MetricsSeries::rolling_ctr() const {
  return rolling_average(bucket_ctr(), window);
}

std::vector<double> MetricsSeries::cumulative_ctr() const {
  std::vector<double> out(bucket_matched.size());
  long long m = 0, c = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    m += bucket_matched[i];
    c += bucket_clicks[i];
    out[i] = m ? static_cast<double>(c) / m : 0.0;
  }
  return out;
}

MetricsSeries replay(Policy& policy, const ClusterModel& clusters, EventStream& events,
                     const ReplayOptions& opts) {
  MetricsSeries series;
  series.bucket_size = opts.bucket_size;
  series.window = opts.window;

  long long in_bucket = 0;
  long long bucket_matched = 0, bucket_clicks = 0;

  EventRecord e;
  while (events.next(e)) {
    ++series.total_events;
    if (opts.progress_every && opts.on_progress && series.total_events % opts.progress_every == 0)
      opts.on_progress(series.total_events);

    bool in_pool = false;
    for (const Candidate& c : e.pool)
      if (c.arm_id == e.displayed_arm) in_pool = true;
    if (e.pool.empty() || !in_pool) {
      ++series.skipped;
      continue;
    }

    const std::size_t cluster = assign_cluster(clusters, e.user_features);
    const SelectOutcome outcome = policy_select_update(policy, cluster, e);
    if (outcome.matched) {
      ++series.total_matched;
      series.total_clicks += e.click;
      ++bucket_matched;
      bucket_clicks += e.click;
      if (!opts.bucket_raw) ++in_bucket;
    }
    if (opts.bucket_raw) ++in_bucket;

    if (in_bucket >= static_cast<long long>(series.bucket_size)) {
      series.bucket_matched.push_back(bucket_matched);
      series.bucket_clicks.push_back(bucket_clicks);
      in_bucket = 0;
      bucket_matched = 0;
      bucket_clicks = 0;
    }
  }
  if (in_bucket > 0) {
    series.bucket_matched.push_back(bucket_matched);
    series.bucket_clicks.push_back(bucket_clicks);
  }
  return series;
}

std::vector<double> rolling_average(const std::vector<double>& series, std::size_t window) {
  if (window < 1) throw ConfigError("rolling_average: window must be >= 1");
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
    double acc = 0.0;
    for (std::size_t j = lo; j <= i; ++j) acc += series[j];
    out[i] = acc / (i - lo + 1);
  }
  return out;
}

std::vector<double> normalize_by_random(const MetricsSeries& policy_series,
                                        const MetricsSeries& random_series) {
  if (policy_series.bucket_size != random_series.bucket_size)
    throw ConfigError("normalize_by_random: bucket sizes differ");
  const std::vector<double> p = policy_series.cumulative_ctr();
  const std::vector<double> r = random_series.cumulative_ctr();
  const std::size_t n = std::min(p.size(), r.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = r[i] != 0.0 ? p[i] / r[i] : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace cobandit
