#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vnfscale {

using Seconds = std::chrono::seconds;
using TimePoint = std::chrono::sys_seconds;

// Uniformly sampled traffic load. Each sample holds the bits carried during
// one interval; sample i starts at start_time + i * interval.
struct TrafficTrace {
  TimePoint start_time{};
  Seconds interval{300};
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  TimePoint time_at(std::size_t index) const {
    return start_time + interval * static_cast<std::int64_t>(index);
  }
  TimePoint end_time() const { return time_at(samples.size()); }
  // Average rate over sample `index`, in bits per second.
  double rate_at(std::size_t index) const {
    return samples[index] / static_cast<double>(interval.count());
  }

  // Throws DomainError when interval <= 0 or a sample is negative/non-finite.
  void validate() const;
};

// Parameters of the seeded seasonal trace generator. Load quantities are in
// bits per sample interval, like TrafficTrace samples.
struct SyntheticTraceSpec {
  int days = 42;
  std::uint64_t seed = 1;
  TimePoint start_time = TimePoint{std::chrono::sys_days{std::chrono::year{2024} / 1 / 1}};
  Seconds interval{300};
  double base_load = 4.0e9 * 300;
  double daily_amplitude = 3.0e9 * 300;
  // Hour of day at which the daily sinusoid peaks.
  double daily_peak_hour = 15.0;
  // Weekday level relative to weekend level; weekdays sit at base_load and
  // weekends at base_load / weekly_weekday_factor.
  double weekly_weekday_factor = 1.0;
  // Relative level change per 30 days, applied linearly from start_time.
  double monthly_drift = 0.0;
  double noise_stddev = 0.0;
  double burst_rate = 0.0;  // expected bursts per day
  double burst_amplitude = 0.0;
  Seconds burst_duration{600};
  double peak_load_cap = 10.0e9 * 300;

  // Throws DomainError on an invalid field.
  void validate() const;
};

std::string format_iso8601(TimePoint t);
// Accepts YYYY-MM-DDTHH:MM:SS with an optional trailing 'Z' or "+00:00".
TimePoint parse_iso8601(std::string_view text, std::size_t row = 0);

// trace-csv: header "timestamp,load_bits" then one row per sample, spaced
// exactly `interval` apart. Error rows count data rows from 1.
TrafficTrace read_trace(std::istream& in, Seconds interval = Seconds{300});
TrafficTrace load_trace(const std::filesystem::path& path, Seconds interval = Seconds{300});
void write_trace(std::ostream& out, const TrafficTrace& trace);
void save_trace(const std::filesystem::path& path, const TrafficTrace& trace);

TrafficTrace generate_trace(const SyntheticTraceSpec& spec);

// Content hash of the canonical CSV form.
std::uint64_t trace_fingerprint(const TrafficTrace& trace);

}  // namespace vnfscale
