#pragma once

#include <string>
#include <vector>

#include "vnfscale/analysis.hpp"
#include "vnfscale/config.hpp"
#include "vnfscale/cost.hpp"
#include "vnfscale/simulate.hpp"

namespace vnfscale {

// Every JSON report carries "config_hash" and the full "config"; every CSV
// starts with a "# config_hash=<hex>" comment line.

struct MethodEvaluation {
  std::string method;  // e.g. "random-forest-qml"
  Algorithm algorithm = Algorithm::random_forest;
  LabelKind label = LabelKind::qml;
  EvaluationReport report;
};

struct MethodSimulation {
  std::string method;
  SimulationReport report;
};

struct Curve {
  std::string method;
  std::string axis;  // "features" or "days"
  std::vector<CurvePoint> points;
};

std::string csv_preamble(const RunConfig& config);

std::string evaluation_json(const RunConfig& config, const std::vector<MethodEvaluation>& evaluations);
// method,label,class,support,precision,fp_rate,roc_area; class "weighted"
// holds the support-weighted aggregate.
std::string evaluation_csv(const RunConfig& config, const std::vector<MethodEvaluation>& evaluations);

std::string curve_json(const RunConfig& config, const std::vector<Curve>& curves);
// method,axis,x,train_size,precision,fp_rate,roc_area
std::string curve_csv(const RunConfig& config, const std::vector<Curve>& curves);

std::string ranking_json(const RunConfig& config, LabelKind label, const FeatureRanking& ranking);
// rank,feature,gain_bits
std::string ranking_csv(const RunConfig& config, const FeatureRanking& ranking);
// component,eigenvalue,explained,f<k>... over the retained features
std::string pca_csv(const RunConfig& config, const PcaResult& pca);

std::string simulation_json(const RunConfig& config, const std::vector<MethodSimulation>& runs);
// method,profile,degraded_minutes,low_provisioning_minutes,startup_minutes,energy_joules,overprovisioned_vnf_minutes
std::string simulation_csv(const RunConfig& config, const std::vector<MethodSimulation>& runs);

std::string cost_json(const RunConfig& config, const std::vector<CostReport>& reports);
std::string cost_csv(const RunConfig& config, const std::vector<CostReport>& reports);

std::string dataset_json(const RunConfig& config, const LabeledDataset& dataset, const TrafficTrace& trace);
std::string model_json(const RunConfig& config, const TrainedModel& model, const std::string& model_file,
                       std::uint64_t model_checksum);
std::string timing_json(const RunConfig& config, const std::vector<std::string>& methods,
                        const std::vector<TimingResult>& timings);

}  // namespace vnfscale
