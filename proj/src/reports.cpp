#include "vnfscale/reports.hpp"

#include <sstream>

#include <json.hpp>

#include "vnfscale/util.hpp"

namespace vnfscale {

using Json = nlohmann::ordered_json;

namespace {

Json header(const RunConfig& config, const char* kind) {
  Json j;
  j["kind"] = kind;
  j["config_hash"] = hex64(run_config_hash(config));
  j["config"] = Json::parse(to_json(config));
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json metrics_json(const EvaluationReport& r) {
  Json per_class = Json::array();
  for (const auto& c : r.per_class)
    per_class.push_back({{"class", c.label},
                         {"support", c.support},
                         {"tp", c.tp},
                         {"fp", c.fp},
                         {"tn", c.tn},
                         {"fn", c.fn},
                         {"precision", c.precision},
                         {"fp_rate", c.fp_rate},
                         {"roc_area", c.roc_area}});
  return {{"v_min", r.v_min},
          {"v_max", r.v_max},
          {"total", r.total},
          {"correct", r.correct},
          {"weighted", {{"precision", r.aggregate.precision},
                        {"fp_rate", r.aggregate.fp_rate},
                        {"roc_area", r.aggregate.roc_area}}},
          {"per_class", per_class},
          {"confusion", r.confusion}};
}

Json cost_breakdown(const CostBreakdown& c) {
  return {{"vnf", c.vnf}, {"network", c.network}, {"degradation", c.degradation}, {"total", c.total()}};
}

}  // namespace

std::string csv_preamble(const RunConfig& config) { return "# config_hash=" + hex64(run_config_hash(config)) + "\n"; }

std::string evaluation_json(const RunConfig& config, const std::vector<MethodEvaluation>& evaluations) {
  Json j = header(config, "evaluation");
  Json list = Json::array();
  for (const auto& e : evaluations) {
    Json item = {{"method", e.method}, {"algorithm", to_string(e.algorithm)}, {"label", to_string(e.label)}};
    item["metrics"] = metrics_json(e.report);
    list.push_back(item);
  }
  j["evaluations"] = list;
  return dump(j);
}

std::string evaluation_csv(const RunConfig& config, const std::vector<MethodEvaluation>& evaluations) {
  std::ostringstream out;
  out << csv_preamble(config) << "method,label,class,support,precision,fp_rate,roc_area\n";
  for (const auto& e : evaluations) {
    const char* label = to_string(e.label);
    for (const auto& c : e.report.per_class)
      out << e.method << ',' << label << ',' << c.label << ',' << c.support << ',' << format_double(c.precision) << ','
          << format_double(c.fp_rate) << ',' << format_double(c.roc_area) << '\n';
    const auto& a = e.report.aggregate;
    out << e.method << ',' << label << ",weighted," << e.report.total << ',' << format_double(a.precision) << ','
        << format_double(a.fp_rate) << ',' << format_double(a.roc_area) << '\n';
  }
  return out.str();
}

std::string curve_json(const RunConfig& config, const std::vector<Curve>& curves) {
  Json j = header(config, "learning-curve");
  Json list = Json::array();
  for (const auto& c : curves) {
    Json points = Json::array();
    for (const auto& p : c.points)
      points.push_back({{"x", p.x},
                        {"train_size", p.train_size},
                        {"precision", p.precision},
                        {"fp_rate", p.fp_rate},
                        {"roc_area", p.roc_area}});
    list.push_back({{"method", c.method}, {"axis", c.axis}, {"points", points}});
  }
  j["curves"] = list;
  return dump(j);
}

std::string curve_csv(const RunConfig& config, const std::vector<Curve>& curves) {
  std::ostringstream out;
  out << csv_preamble(config) << "method,axis,x,train_size,precision,fp_rate,roc_area\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out << c.method << ',' << c.axis << ',' << p.x << ',' << p.train_size << ',' << format_double(p.precision) << ','
          << format_double(p.fp_rate) << ',' << format_double(p.roc_area) << '\n';
  return out.str();
}

std::string ranking_json(const RunConfig& config, LabelKind label, const FeatureRanking& ranking) {
  Json j = header(config, "feature-ranking");
  j["label"] = to_string(label);
  Json gains = Json::array();
  for (const auto& g : ranking.by_info_gain) gains.push_back({{"feature", g.feature}, {"gain_bits", g.gain_bits}});
  j["info_gain"] = gains;
  Json components = Json::array();
  for (const auto& c : ranking.pca.components)
    components.push_back({{"eigenvalue", c.eigenvalue}, {"explained", c.explained}, {"loadings", c.loadings}});
  j["pca"] = {{"features", ranking.pca.features}, {"dropped", ranking.pca.dropped}, {"components", components}};
  return dump(j);
}

std::string ranking_csv(const RunConfig& config, const FeatureRanking& ranking) {
  std::ostringstream out;
  out << csv_preamble(config) << "rank,feature,gain_bits\n";
  int rank = 1;
  for (const auto& g : ranking.by_info_gain) out << rank++ << ',' << g.feature << ',' << format_double(g.gain_bits) << '\n';
  return out.str();
}

std::string pca_csv(const RunConfig& config, const PcaResult& pca) {
  std::ostringstream out;
  out << csv_preamble(config) << "component,eigenvalue,explained";
  for (int f : pca.features) out << ",f" << f;
  out << '\n';
  int index = 1;
  for (const auto& c : pca.components) {
    out << index++ << ',' << format_double(c.eigenvalue) << ',' << format_double(c.explained);
    for (double l : c.loadings) out << ',' << format_double(l);
    out << '\n';
  }
  return out.str();
}

std::string simulation_json(const RunConfig& config, const std::vector<MethodSimulation>& runs) {
  Json j = header(config, "simulation");
  Json list = Json::array();
  for (const auto& r : runs) {
    const auto& s = r.report;
    const auto& p = config.profile(s.profile);
    list.push_back({{"method", r.method},
                    {"profile", s.profile},
                    {"startup_s", p.startup_seconds},
                    {"instance_power_w", p.per_instance_power_watts},
                    {"degraded_minutes", s.degraded_minutes_total},
                    {"low_provisioning_minutes", s.degraded_minutes_low_provisioning},
                    {"startup_minutes", s.degraded_minutes_startup},
                    {"energy_joules", s.energy_joules},
                    {"overprovisioned_vnf_minutes", s.overprovisioned_vnf_minutes}});
  }
  j["runs"] = list;
  return dump(j);
}

std::string simulation_csv(const RunConfig& config, const std::vector<MethodSimulation>& runs) {
  std::ostringstream out;
  out << csv_preamble(config)
      << "method,profile,degraded_minutes,low_provisioning_minutes,startup_minutes,energy_joules,"
         "overprovisioned_vnf_minutes\n";
  for (const auto& r : runs) {
    const auto& s = r.report;
    out << r.method << ',' << s.profile << ',' << format_double(s.degraded_minutes_total) << ','
        << format_double(s.degraded_minutes_low_provisioning) << ',' << format_double(s.degraded_minutes_startup)
        << ',' << format_double(s.energy_joules) << ',' << format_double(s.overprovisioned_vnf_minutes) << '\n';
  }
  return out.str();
}

std::string cost_json(const RunConfig& config, const std::vector<CostReport>& reports) {
  Json j = header(config, "leasing-cost");
  Json list = Json::array();
  for (const auto& r : reports) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"site", row.site},
                      {"service", row.service},
                      {"vnf_seconds", row.vnf_seconds},
                      {"gbps_seconds", row.gbps_seconds},
                      {"degraded_seconds", row.degraded_seconds},
                      {"cost", cost_breakdown(row.cost)}});
    Json sites = Json::array();
    for (const auto& s : r.sites) sites.push_back({{"site", s.site}, {"cost", cost_breakdown(s.cost)}});
    list.push_back({{"method", r.method},
                    {"profile", r.profile},
                    {"rows", rows},
                    {"sites", sites},
                    {"total", cost_breakdown(r.total)}});
  }
  j["reports"] = list;
  return dump(j);
}

std::string cost_csv(const RunConfig& config, const std::vector<CostReport>& reports) {
  std::ostringstream out;
  out << csv_preamble(config);
  write_cost_csv(out, reports);
  return out.str();
}

std::string dataset_json(const RunConfig& config, const LabeledDataset& dataset, const TrafficTrace& trace) {
  Json j = header(config, "dataset");
  j["instances"] = dataset.size();
  j["features"] = dataset.feature_count;
  j["trace"] = {{"fingerprint", hex64(dataset.provenance.trace_id)},
                {"start", format_iso8601(trace.start_time)},
                {"samples", trace.size()},
                {"interval_s", trace.interval.count()}};
  j["dataset_config_hash"] = hex64(dataset.provenance.config_hash);
  j["deployment"] = {{"v_min", dataset.deployment.v_min},
                     {"v_max", dataset.deployment.v_max},
                     {"vnf_capacity_bps", dataset.deployment.per_vnf_capacity},
                     {"decision_interval_s", dataset.deployment.decision_interval.count()}};
  if (!dataset.empty()) {
    j["first_decision"] = format_iso8601(dataset.instances.front().time);
    j["last_decision"] = format_iso8601(dataset.instances.back().time);
  }
  return dump(j);
}

std::string model_json(const RunConfig& config, const TrainedModel& model, const std::string& model_file,
                       std::uint64_t model_checksum) {
  Json j = header(config, "model");
  j["file"] = model_file;
  j["checksum"] = hex64(model_checksum);
  j["algorithm"] = to_string(model.algorithm);
  j["label"] = to_string(model.label_kind);
  j["features"] = model.feature_count;
  j["classes"] = {model.v_min, model.v_max};
  j["seed"] = model.seed;
  j["instances"] = model.instance_count;
  return dump(j);
}

std::string timing_json(const RunConfig& config, const std::vector<std::string>& methods,
                        const std::vector<TimingResult>& timings) {
  Json j = header(config, "timing");
  Json list = Json::array();
  for (std::size_t i = 0; i < methods.size() && i < timings.size(); ++i)
    list.push_back({{"method", methods[i]},
                    {"train_seconds", timings[i].train_seconds},
                    {"test_seconds", timings[i].test_seconds}});
  j["timings"] = list;
  return dump(j);
}

}  // namespace vnfscale
