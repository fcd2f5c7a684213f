#include "vnfscale/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vnfscale/error.hpp"
#include "vnfscale/util.hpp"

namespace vnfscale {

using Json = nlohmann::ordered_json;

LeasingRates RateConfig::rates() const {
  LeasingRates r;
  r.c_v = vnf_per_second;
  r.c_n = gbps_per_month / kSecondsPerMonth;
  r.c_q = degraded_per_10min / 600.0;
  return r;
}

std::uint64_t RunConfig::stream_seed(SeedStream stream) const {
  return derive_seed(seed, static_cast<std::uint64_t>(stream));
}

SyntheticTraceSpec RunConfig::trace_spec() const {
  const auto& s = synthetic;
  SyntheticTraceSpec spec;
  const double per_sample = 1.0e9 * s.interval_seconds;
  spec.days = s.days;
  spec.seed = stream_seed(SeedStream::trace);
  spec.start_time = parse_iso8601(s.start);
  spec.interval = Seconds{s.interval_seconds};
  spec.base_load = s.base_gbps * per_sample;
  spec.daily_amplitude = s.daily_amplitude_gbps * per_sample;
  spec.daily_peak_hour = s.daily_peak_hour;
  spec.weekly_weekday_factor = s.weekday_factor;
  spec.monthly_drift = s.monthly_drift;
  spec.noise_stddev = s.noise_gbps * per_sample;
  spec.burst_rate = s.burst_rate_per_day;
  spec.burst_amplitude = s.burst_amplitude_gbps * per_sample;
  spec.burst_duration = Seconds{s.burst_duration_seconds};
  spec.peak_load_cap = s.peak_cap_gbps * per_sample;
  return spec;
}

const VirtualizationProfile& RunConfig::profile(const std::string& name) const {
  for (const auto& p : profiles)
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : profiles) known += (known.empty() ? "" : ", ") + p.name;
  throw DomainError("unknown virtualization profile '" + name + "' (configured: " + known + ")");
}

void RunConfig::validate() const {
  if (synthetic.interval_seconds <= 0) throw DomainError("trace.interval_s must be positive");
  trace_spec().validate();
  deployment.validate();
  window.validate();
  if (train_days < 1) throw DomainError("split.train_days must be at least 1");
  if (test_days < 1) throw DomainError("split.test_days must be at least 1");
  params.forest.validate(window.n_features);
  if (params.moving_average.window < 1) throw DomainError("model.moving_average.window must be at least 1");
  for (int f : curve_feature_counts)
    if (f < 1 || f > window.n_features)
      throw DomainError("analysis.curve_features entries must lie in [1, window.features]");
  for (int d : curve_day_counts)
    if (d < 1) throw DomainError("analysis.curve_days entries must be positive");
  if (info_gain_bins < 2) throw DomainError("analysis.info_gain_bins must be at least 2");
  for (const auto& p : profiles) p.validate();
  for (const auto& name : simulate_profiles) profile(name);
  if (server.vnfs_per_server < 1) throw DomainError("simulation.server.vnfs_per_server must be at least 1");
  rates.rates().validate();
  if (sites.empty()) throw DomainError("cost.sites must not be empty");
  if (services.empty()) throw DomainError("cost.services must not be empty");
}

RunConfig default_run_config() {
  RunConfig c;
  c.compare = {Algorithm::random_forest, Algorithm::decision_tree, Algorithm::random_tree,
               Algorithm::naive_bayes, Algorithm::moving_average, Algorithm::majority_class};
  c.curve_feature_counts = {1, 3, 5, 6, 7, 8, 9, 11, 13, 15};
  c.curve_day_counts = {2, 5, 10, 20, 30, 40};
  c.profiles = builtin_profiles();
  for (const auto& p : c.profiles) c.simulate_profiles.push_back(p.name);
  c.sites = {"headquarter", "branch-1", "branch-2", "branch-3"};
  c.services = {"firewall", "router", "pbx"};
  return c;
}

namespace {

Json to_tree(const RunConfig& c) {
  const auto& s = c.synthetic;
  Json j;
  j["seed"] = c.seed;
  j["trace"] = {{"days", s.days},
                {"start", s.start},
                {"interval_s", s.interval_seconds},
                {"base_gbps", s.base_gbps},
                {"daily_amplitude_gbps", s.daily_amplitude_gbps},
                {"daily_peak_hour", s.daily_peak_hour},
                {"weekday_factor", s.weekday_factor},
                {"monthly_drift", s.monthly_drift},
                {"noise_gbps", s.noise_gbps},
                {"burst_rate_per_day", s.burst_rate_per_day},
                {"burst_amplitude_gbps", s.burst_amplitude_gbps},
                {"burst_duration_s", s.burst_duration_seconds},
                {"peak_cap_gbps", s.peak_cap_gbps}};
  j["deployment"] = {{"v_min", c.deployment.v_min},
                     {"v_max", c.deployment.v_max},
                     {"vnf_capacity_bps", c.deployment.per_vnf_capacity},
                     {"decision_interval_s", c.deployment.decision_interval.count()}};
  j["window"] = {{"history_points", c.window.history_points},
                 {"sample_spacing_s", c.window.sample_spacing.count()},
                 {"features", c.window.n_features}};
  j["split"] = {{"train_days", c.train_days}, {"test_days", c.test_days}};
  const auto& f = c.params.forest;
  j["model"] = {{"algorithm", to_string(c.algorithm)},
                {"label", to_string(c.label)},
                {"forest",
                 {{"trees", f.n_trees},
                  {"features_per_split", f.features_per_split},
                  {"min_leaf_size", f.min_leaf_size},
                  {"max_depth", f.max_depth},
                  {"bootstrap", f.bootstrap},
                  {"threads", f.threads}}},
                {"moving_average", {{"window", c.params.moving_average.window}}}};
  Json compare = Json::array();
  for (auto a : c.compare) compare.push_back(to_string(a));
  j["compare"] = compare;
  j["analysis"] = {{"curve_features", c.curve_feature_counts},
                   {"curve_days", c.curve_day_counts},
                   {"info_gain_bins", c.info_gain_bins}};
  Json profiles = Json::array();
  for (const auto& p : c.profiles)
    profiles.push_back({{"name", p.name},
                        {"startup_s", p.startup_seconds},
                        {"instance_power_w", p.per_instance_power_watts},
                        {"teardown_s", p.teardown_seconds}});
  j["simulation"] = {{"profiles", profiles},
                     {"run", c.simulate_profiles},
                     {"server",
                      {{"idle_w", c.server.p_idle_watts},
                       {"peak_w", c.server.p_peak_watts},
                       {"vnfs_per_server", c.server.vnfs_per_server}}}};
  j["cost"] = {{"vnf_per_second", c.rates.vnf_per_second},
               {"gbps_per_month", c.rates.gbps_per_month},
               {"degraded_per_10min", c.rates.degraded_per_10min},
               {"penalty_per_site", c.penalty_per_site},
               {"sites", c.sites},
               {"services", c.services}};
  return j;
}

RunConfig from_tree(const Json& j) {
  RunConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& t = j.at("trace");
  auto& s = c.synthetic;
  s.days = t.at("days").get<int>();
  s.start = t.at("start").get<std::string>();
  s.interval_seconds = t.at("interval_s").get<int>();
  s.base_gbps = t.at("base_gbps").get<double>();
  s.daily_amplitude_gbps = t.at("daily_amplitude_gbps").get<double>();
  s.daily_peak_hour = t.at("daily_peak_hour").get<double>();
  s.weekday_factor = t.at("weekday_factor").get<double>();
  s.monthly_drift = t.at("monthly_drift").get<double>();
  s.noise_gbps = t.at("noise_gbps").get<double>();
  s.burst_rate_per_day = t.at("burst_rate_per_day").get<double>();
  s.burst_amplitude_gbps = t.at("burst_amplitude_gbps").get<double>();
  s.burst_duration_seconds = t.at("burst_duration_s").get<int>();
  s.peak_cap_gbps = t.at("peak_cap_gbps").get<double>();

  const auto& d = j.at("deployment");
  c.deployment.v_min = d.at("v_min").get<int>();
  c.deployment.v_max = d.at("v_max").get<int>();
  c.deployment.per_vnf_capacity = d.at("vnf_capacity_bps").get<double>();
  c.deployment.decision_interval = Seconds{d.at("decision_interval_s").get<std::int64_t>()};

  const auto& w = j.at("window");
  c.window.history_points = w.at("history_points").get<int>();
  c.window.sample_spacing = Seconds{w.at("sample_spacing_s").get<std::int64_t>()};
  c.window.n_features = w.at("features").get<int>();

  c.train_days = j.at("split").at("train_days").get<int>();
  c.test_days = j.at("split").at("test_days").get<int>();

  const auto& m = j.at("model");
  c.algorithm = parse_algorithm(m.at("algorithm").get<std::string>());
  c.label = parse_label_kind(m.at("label").get<std::string>());
  const auto& f = m.at("forest");
  c.params.forest.n_trees = f.at("trees").get<int>();
  c.params.forest.features_per_split = f.at("features_per_split").get<int>();
  c.params.forest.min_leaf_size = f.at("min_leaf_size").get<int>();
  c.params.forest.max_depth = f.at("max_depth").get<int>();
  c.params.forest.bootstrap = f.at("bootstrap").get<bool>();
  c.params.forest.threads = f.at("threads").get<int>();
  c.params.moving_average.window = m.at("moving_average").at("window").get<int>();

  for (const auto& a : j.at("compare")) c.compare.push_back(parse_algorithm(a.get<std::string>()));

  const auto& an = j.at("analysis");
  c.curve_feature_counts = an.at("curve_features").get<std::vector<int>>();
  c.curve_day_counts = an.at("curve_days").get<std::vector<int>>();
  c.info_gain_bins = an.at("info_gain_bins").get<int>();

  const auto& sim = j.at("simulation");
  for (const auto& p : sim.at("profiles")) {
    VirtualizationProfile vp;
    vp.name = p.at("name").get<std::string>();
    vp.startup_seconds = p.at("startup_s").get<double>();
    vp.per_instance_power_watts = p.at("instance_power_w").get<double>();
    vp.teardown_seconds = p.value("teardown_s", 0.0);
    c.profiles.push_back(vp);
  }
  c.simulate_profiles = sim.at("run").get<std::vector<std::string>>();
  c.server.p_idle_watts = sim.at("server").at("idle_w").get<double>();
  c.server.p_peak_watts = sim.at("server").at("peak_w").get<double>();
  c.server.vnfs_per_server = sim.at("server").at("vnfs_per_server").get<int>();

  const auto& co = j.at("cost");
  c.rates.vnf_per_second = co.at("vnf_per_second").get<double>();
  c.rates.gbps_per_month = co.at("gbps_per_month").get<double>();
  c.rates.degraded_per_10min = co.at("degraded_per_10min").get<double>();
  c.penalty_per_site = co.at("penalty_per_site").get<bool>();
  c.sites = co.at("sites").get<std::vector<std::string>>();
  c.services = co.at("services").get<std::vector<std::string>>();
  return c;
}

// Objects merge key by key; anything else replaces the base value.
void merge_into(Json& base, const Json& patch, const std::string& path) {
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    auto found = base.find(it.key());
    if (found == base.end()) throw Error("config: unknown key '" + key + "'");
    if (found->is_object()) {
      if (!it->is_object()) throw Error("config: '" + key + "' must be an object");
      merge_into(*found, *it, key);
    } else {
      *found = *it;
    }
  }
}

}  // namespace

std::string to_json(const RunConfig& config) { return to_tree(config).dump(2) + "\n"; }

RunConfig merge_run_config(std::string_view text, RunConfig base) {
  Json patch;
  try {
    patch = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!patch.is_object()) throw ParseError("config must be a JSON object");
  Json merged = to_tree(base);
  merge_into(merged, patch, "");
  RunConfig result;
  try {
    result = from_tree(merged);
  } catch (const Json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  result.validate();
  return result;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return merge_run_config(text.str(), std::move(base));
}

std::uint64_t run_config_hash(const RunConfig& config) { return fnv1a64(to_json(config)); }

}  // namespace vnfscale
