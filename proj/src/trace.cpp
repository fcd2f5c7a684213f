#include "vnfscale/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "vnfscale/error.hpp"
#include "vnfscale/util.hpp"

namespace vnfscale {

namespace {

constexpr std::string_view kHeader = "timestamp,load_bits";

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len, std::size_t row) {
  if (pos + len > text.size()) throw ParseError("truncated timestamp", row);
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw ParseError("invalid timestamp '" + std::string(text) + "'", row);
    value = value * 10 + (c - '0');
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void TrafficTrace::validate() const {
  if (interval.count() <= 0) throw DomainError("trace interval must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i]) || samples[i] < 0.0)
      throw DomainError("negative or non-finite load at sample " + std::to_string(i));
  }
}

void SyntheticTraceSpec::validate() const {
  if (days <= 0) throw DomainError("days must be positive");
  if (interval.count() <= 0 || 86400 % interval.count() != 0)
    throw DomainError("interval must be a positive divisor of one day");
  if (!(base_load >= 0.0)) throw DomainError("base_load must be non-negative");
  if (!(daily_amplitude >= 0.0)) throw DomainError("daily_amplitude must be non-negative");
  if (!(weekly_weekday_factor > 0.0)) throw DomainError("weekly_weekday_factor must be positive");
  if (!(noise_stddev >= 0.0)) throw DomainError("noise_stddev must be non-negative");
  if (!(burst_rate >= 0.0)) throw DomainError("burst_rate must be non-negative");
  if (!(burst_amplitude >= 0.0)) throw DomainError("burst_amplitude must be non-negative");
  if (burst_duration.count() < 0) throw DomainError("burst_duration must be non-negative");
  if (!(peak_load_cap > 0.0)) throw DomainError("peak_load_cap must be positive");
  if (!std::isfinite(monthly_drift)) throw DomainError("monthly_drift must be finite");
}

std::string format_iso8601(TimePoint t) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  year_month_day ymd{day};
  hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

TimePoint parse_iso8601(std::string_view text, std::size_t row) {
  using namespace std::chrono;
  text = trim(text);
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':')
    throw ParseError("invalid timestamp '" + std::string(text) + "'", row);
  std::string_view suffix = text.substr(19);
  if (!(suffix.empty() || suffix == "Z" || suffix == "+00:00"))
    throw ParseError("timestamp must be UTC: '" + std::string(text) + "'", row);
  year_month_day ymd{year{parse_fixed(text, 0, 4, row)},
                     month{static_cast<unsigned>(parse_fixed(text, 5, 2, row))},
                     day{static_cast<unsigned>(parse_fixed(text, 8, 2, row))}};
  int h = parse_fixed(text, 11, 2, row);
  int m = parse_fixed(text, 14, 2, row);
  int s = parse_fixed(text, 17, 2, row);
  if (!ymd.ok() || h > 23 || m > 59 || s > 59)
    throw ParseError("invalid timestamp '" + std::string(text) + "'", row);
  return sys_days{ymd} + hours{h} + minutes{m} + std::chrono::seconds{s};
}

TrafficTrace read_trace(std::istream& in, Seconds interval) {
  if (interval.count() <= 0) throw DomainError("trace interval must be positive");
  TrafficTrace trace;
  trace.interval = interval;
  std::string line;
  std::size_t row = 0;
  bool first_line = true;
  TimePoint previous{};
  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (first_line) {
      first_line = false;
      if (view.substr(0, 9) == "timestamp") continue;
    }
    ++row;
    auto comma = view.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected 'timestamp,load_bits'", row);
    TimePoint t = parse_iso8601(view.substr(0, comma), row);
    double load = parse_double(view.substr(comma + 1), row);
    if (!std::isfinite(load) || load < 0.0)
      throw DomainError("row " + std::to_string(row) + ": negative or non-finite load");
    if (trace.samples.empty()) {
      trace.start_time = t;
    } else if (t - previous != interval) {
      throw SpacingError("row " + std::to_string(row) + ": gap of " + std::to_string((t - previous).count()) +
                             " s, expected " + std::to_string(interval.count()) + " s",
                         row);
    }
    previous = t;
    trace.samples.push_back(load);
  }
  if (trace.samples.empty()) throw ParseError("no samples");
  return trace;
}

TrafficTrace load_trace(const std::filesystem::path& path, Seconds interval) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file " + path.string());
  return read_trace(in, interval);
}

void write_trace(std::ostream& out, const TrafficTrace& trace) {
  out << kHeader << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << format_iso8601(trace.time_at(i)) << ',' << format_double(trace.samples[i]) << '\n';
}

void save_trace(const std::filesystem::path& path, const TrafficTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file " + path.string());
  write_trace(out, trace);
}

std::uint64_t trace_fingerprint(const TrafficTrace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return fnv1a64(out.str());
}

TrafficTrace generate_trace(const SyntheticTraceSpec& spec) {
  spec.validate();
  using namespace std::chrono;
  const std::int64_t step = spec.interval.count();
  const std::size_t count = static_cast<std::size_t>(spec.days) * static_cast<std::size_t>(86400 / step);
  const double span = static_cast<double>(count) * static_cast<double>(step);

  // Burst schedule: Poisson arrivals over the whole span.
  std::vector<double> burst_starts;
  if (spec.burst_rate > 0.0 && spec.burst_amplitude > 0.0) {
    std::mt19937_64 rng(derive_seed(spec.seed, 1));
    const double mean_gap = 86400.0 / spec.burst_rate;
    double t = 0.0;
    for (;;) {
      t += -std::log1p(-unit_from_bits(rng())) * mean_gap;
      if (t >= span) break;
      burst_starts.push_back(t);
    }
  }

  std::mt19937_64 noise_rng(derive_seed(spec.seed, 2));
  bool have_spare = false;
  double spare = 0.0;
  auto gaussian = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = 1.0 - unit_from_bits(noise_rng());
    double u2 = unit_from_bits(noise_rng());
    double r = std::sqrt(-2.0 * std::log(u1));
    spare = r * std::sin(2.0 * std::numbers::pi * u2);
    have_spare = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  };

  TrafficTrace trace;
  trace.start_time = spec.start_time;
  trace.interval = spec.interval;
  trace.samples.resize(count);
  const double duration = static_cast<double>(spec.burst_duration.count());
  std::size_t first_active = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const TimePoint when = trace.time_at(i);
    const auto day = floor<days>(when);
    const double second_of_day = static_cast<double>((when - day).count());
    const bool weekend = weekday{day}.iso_encoding() >= 6;
    const double offset = static_cast<double>(i) * static_cast<double>(step);

    const double phase = 2.0 * std::numbers::pi * (second_of_day / 86400.0 - spec.daily_peak_hour / 24.0);
    double level = spec.base_load + spec.daily_amplitude * std::cos(phase);
    if (weekend) level /= spec.weekly_weekday_factor;
    level *= 1.0 + spec.monthly_drift * offset / (30.0 * 86400.0);
    if (spec.noise_stddev > 0.0) level += spec.noise_stddev * gaussian();

    // A burst contributes in proportion to its overlap with this sample.
    const double sample_end = offset + static_cast<double>(step);
    while (first_active < burst_starts.size() && burst_starts[first_active] + duration <= offset)
      ++first_active;
    for (std::size_t b = first_active; b < burst_starts.size() && burst_starts[b] < sample_end; ++b) {
      double overlap = std::min(sample_end, burst_starts[b] + duration) - std::max(offset, burst_starts[b]);
      if (overlap > 0.0) level += spec.burst_amplitude * overlap / static_cast<double>(step);
    }

    trace.samples[i] = std::clamp(level, 0.0, spec.peak_load_cap);
  }
  return trace;
}

}  // namespace vnfscale
