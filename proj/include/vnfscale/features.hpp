#pragma once

#include <cstddef>
#include <vector>

#include "vnfscale/trace.hpp"

namespace vnfscale {

inline constexpr int kMaxFeatures = 27;
inline constexpr int kCalendarFeatures = 6;

// Feature numbering (1-based):
//   1 day of month, 2 day of week (Monday = 1), 3 weekday flag (1 = Mon..Fri),
//   4 hour, 5 minute, 6 decision time in seconds since the Unix epoch,
//   7 load at k, 8 load(k) - load(k-1), 9 load at k-1, ... 27 load at k-10,
// where k-m is the m-th history point before the decision sample.
struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  // 1-based access matching the feature numbering above.
  double feature(int number) const { return values.at(static_cast<std::size_t>(number - 1)); }
};

struct FeatureWindowConfig {
  int history_points = 11;
  Seconds sample_spacing{300};
  int n_features = 15;

  // Load samples needed for n_features (including the decision sample itself).
  int required_history() const;
  void validate() const;
};

inline bool is_load_feature(int number) { return number >= 7 && number % 2 == 1; }
inline bool is_delta_feature(int number) { return number >= 8 && number % 2 == 0; }

// Number of trace samples between consecutive history points.
std::size_t history_stride(const TrafficTrace& trace, const FeatureWindowConfig& config);

// Smallest decision index with a full history window.
std::size_t first_decision_index(const TrafficTrace& trace, const FeatureWindowConfig& config);

// Throws WindowError when decision_index lacks history.
FeatureVector extract_features(const TrafficTrace& trace, std::size_t decision_index,
                               const FeatureWindowConfig& config);

}  // namespace vnfscale
