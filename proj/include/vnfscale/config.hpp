#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vnfscale/cost.hpp"
#include "vnfscale/features.hpp"
#include "vnfscale/labeling.hpp"
#include "vnfscale/learners.hpp"
#include "vnfscale/simulate.hpp"
#include "vnfscale/trace.hpp"

namespace vnfscale {

// Sub-seed streams derived from RunConfig::seed.
enum class SeedStream : std::uint64_t { trace = 1, training = 2, curves = 3 };

// Synthetic trace parameters in config units: rates in Gbps.
struct SyntheticConfig {
  int days = 42;
  std::string start = "2024-01-01T00:00:00Z";
  int interval_seconds = 300;
  double base_gbps = 4.0;
  double daily_amplitude_gbps = 3.0;
  double daily_peak_hour = 15.0;
  double weekday_factor = 1.3;
  double monthly_drift = 0.0;
  double noise_gbps = 0.1;
  double burst_rate_per_day = 0.5;
  double burst_amplitude_gbps = 2.0;
  int burst_duration_seconds = 900;
  double peak_cap_gbps = 10.0;
};

// Leasing prices as usually quoted.
struct RateConfig {
  double vnf_per_second = 0.01;
  double gbps_per_month = 70.0;
  double degraded_per_10min = 1.0;

  LeasingRates rates() const;
};

// Everything a pipeline run depends on. Paths are not part of it, so the
// same run written to two directories hashes identically.
struct RunConfig {
  std::uint64_t seed = 1;

  SyntheticConfig synthetic;

  VnfDeployment deployment;
  FeatureWindowConfig window;
  int train_days = 40;
  int test_days = 2;

  Algorithm algorithm = Algorithm::random_forest;
  LabelKind label = LabelKind::qml;
  TrainParams params;
  // Algorithms compared by the report command.
  std::vector<Algorithm> compare;

  std::vector<int> curve_feature_counts;
  std::vector<int> curve_day_counts;
  int info_gain_bins = 10;

  // Profile definitions, and the subset simulated by default.
  std::vector<VirtualizationProfile> profiles;
  std::vector<std::string> simulate_profiles;
  ServerPowerParams server;

  RateConfig rates;
  bool penalty_per_site = false;
  std::vector<std::string> sites;
  std::vector<std::string> services;

  std::uint64_t stream_seed(SeedStream stream) const;
  // Generator spec seeded from the trace stream.
  SyntheticTraceSpec trace_spec() const;
  const VirtualizationProfile& profile(const std::string& name) const;

  // Throws DomainError naming the first invalid field.
  void validate() const;
};

RunConfig default_run_config();

// Canonical JSON, keys in a fixed order.
std::string to_json(const RunConfig& config);

// Values present in `text` override `base`; unknown keys are an error.
RunConfig merge_run_config(std::string_view text, RunConfig base);
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = default_run_config());

// FNV-1a of the canonical JSON.
std::uint64_t run_config_hash(const RunConfig& config);

}  // namespace vnfscale
