#include "vnfscale/features.hpp"

#include <chrono>

#include "vnfscale/error.hpp"

namespace vnfscale {

int FeatureWindowConfig::required_history() const {
  if (n_features <= kCalendarFeatures) return 0;
  const int extra = n_features - kCalendarFeatures;
  return (extra + 1) / 2 + ((extra % 2 == 0) ? 1 : 0);
}

void FeatureWindowConfig::validate() const {
  if (n_features < 1 || n_features > kMaxFeatures)
    throw DomainError("n_features must be within [1, 27], got " + std::to_string(n_features));
  if (sample_spacing.count() <= 0) throw DomainError("sample_spacing must be positive");
  if (history_points < 1) throw DomainError("history_points must be at least 1");
  if (required_history() > history_points)
    throw DomainError(std::to_string(n_features) + " features need " + std::to_string(required_history()) +
                      " history points, configured " + std::to_string(history_points));
}

std::size_t history_stride(const TrafficTrace& trace, const FeatureWindowConfig& config) {
  if (trace.interval.count() <= 0 || config.sample_spacing.count() % trace.interval.count() != 0)
    throw DomainError("sample_spacing must be a multiple of the trace interval");
  return static_cast<std::size_t>(config.sample_spacing.count() / trace.interval.count());
}

std::size_t first_decision_index(const TrafficTrace& trace, const FeatureWindowConfig& config) {
  const int history = config.required_history();
  return history == 0 ? 0 : static_cast<std::size_t>(history - 1) * history_stride(trace, config);
}

FeatureVector extract_features(const TrafficTrace& trace, std::size_t decision_index,
                               const FeatureWindowConfig& config) {
  using namespace std::chrono;
  config.validate();
  if (decision_index >= trace.size())
    throw WindowError("decision index beyond end of trace", decision_index + 1, trace.size());
  const std::size_t stride = history_stride(trace, config);
  const std::size_t need = first_decision_index(trace, config);
  if (decision_index < need)
    throw WindowError("insufficient history for " + std::to_string(config.n_features) + " features",
                      need + 1, decision_index + 1);

  const TimePoint when = trace.time_at(decision_index);
  const auto day = floor<days>(when);
  const year_month_day ymd{day};
  const unsigned dow = weekday{day}.iso_encoding();
  const hh_mm_ss hms{when - day};

  const double calendar[kCalendarFeatures] = {
      static_cast<double>(static_cast<unsigned>(ymd.day())),
      static_cast<double>(dow),
      dow <= 5 ? 1.0 : 0.0,
      static_cast<double>(hms.hours().count()),
      static_cast<double>(hms.minutes().count()),
      static_cast<double>(when.time_since_epoch().count()),
  };

  auto load = [&](int back) { return trace.samples[decision_index - static_cast<std::size_t>(back) * stride]; };

  FeatureVector out;
  out.values.reserve(static_cast<std::size_t>(config.n_features));
  for (int number = 1; number <= config.n_features; ++number) {
    if (number <= kCalendarFeatures) {
      out.values.push_back(calendar[number - 1]);
    } else if (is_load_feature(number)) {
      out.values.push_back(load((number - 7) / 2));
    } else {
      const int newer = (number - 8) / 2;
      out.values.push_back(load(newer) - load(newer + 1));
    }
  }
  return out;
}

}  // namespace vnfscale
