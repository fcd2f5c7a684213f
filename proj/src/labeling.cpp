#include "vnfscale/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vnfscale/error.hpp"
#include "vnfscale/util.hpp"

namespace vnfscale {

void VnfDeployment::validate() const {
  if (v_min < 1) throw DomainError("v_min must be at least 1");
  if (v_max < v_min) throw DomainError("v_max must be >= v_min");
  if (!(per_vnf_capacity > 0.0)) throw DomainError("per_vnf_capacity must be positive");
  if (decision_interval.count() <= 0) throw DomainError("decision_interval must be positive");
}

const char* to_string(LabelKind kind) { return kind == LabelKind::qml ? "qml" : "cml"; }

LabelKind parse_label_kind(const std::string& text) {
  if (text == "qml") return LabelKind::qml;
  if (text == "cml") return LabelKind::cml;
  throw DomainError("unknown label kind '" + text + "' (expected qml or cml)");
}

int qos_required(double load_bps, const VnfDeployment& deployment) {
  if (!(load_bps > 0.0)) return deployment.v_min;
  const double needed = std::ceil(load_bps / deployment.per_vnf_capacity);
  if (needed >= static_cast<double>(deployment.v_max)) return deployment.v_max;
  return std::max(deployment.v_min, static_cast<int>(needed));
}

std::size_t decision_stride(const TrafficTrace& trace, const VnfDeployment& deployment) {
  const auto step = deployment.decision_interval.count();
  if (trace.interval.count() <= 0 || step % trace.interval.count() != 0)
    throw DomainError("decision_interval must be a multiple of the trace interval");
  return static_cast<std::size_t>(step / trace.interval.count());
}

namespace {

std::size_t step_end_index(const TrafficTrace& trace, std::size_t step, const VnfDeployment& deployment) {
  const std::size_t stride = decision_stride(trace, deployment);
  const std::size_t end = (step + 1) * stride;
  if (end >= trace.size())
    throw WindowError("missing lookahead samples for step " + std::to_string(step), end + 1, trace.size());
  return end;
}

}  // namespace

int label_qml(const TrafficTrace& trace, std::size_t step, const VnfDeployment& deployment) {
  const std::size_t end = step_end_index(trace, step, deployment);
  const std::size_t begin = step * decision_stride(trace, deployment);
  int label = deployment.v_min;
  for (std::size_t i = begin; i <= end; ++i) label = std::max(label, qos_required(trace.rate_at(i), deployment));
  return label;
}

int label_cml(const TrafficTrace& trace, std::size_t step, const VnfDeployment& deployment) {
  const std::size_t end = step_end_index(trace, step, deployment);
  const std::size_t begin = step * decision_stride(trace, deployment);
  return std::max(qos_required(trace.rate_at(begin), deployment), qos_required(trace.rate_at(end), deployment));
}

LabeledDataset LabeledDataset::with_feature_prefix(int n) const {
  if (n < 1 || n > feature_count)
    throw DimensionError("feature prefix " + std::to_string(n) + " outside [1, " +
                         std::to_string(feature_count) + "]");
  LabeledDataset out = *this;
  out.feature_count = n;
  out.window.n_features = n;
  for (auto& inst : out.instances) inst.features.values.resize(static_cast<std::size_t>(n));
  return out;
}

LabeledDataset LabeledDataset::subset(std::vector<Instance> selected) const {
  LabeledDataset out;
  out.instances = std::move(selected);
  out.feature_count = feature_count;
  out.deployment = deployment;
  out.window = window;
  out.provenance = provenance;
  return out;
}

std::uint64_t config_hash(const VnfDeployment& d, const FeatureWindowConfig& w) {
  std::string key = "v_min=" + std::to_string(d.v_min) + ";v_max=" + std::to_string(d.v_max) +
                    ";capacity=" + format_double(d.per_vnf_capacity) +
                    ";decision_interval=" + std::to_string(d.decision_interval.count()) +
                    ";history_points=" + std::to_string(w.history_points) +
                    ";sample_spacing=" + std::to_string(w.sample_spacing.count()) +
                    ";n_features=" + std::to_string(w.n_features);
  return fnv1a64(key);
}

LabeledDataset build_dataset(const TrafficTrace& trace, const VnfDeployment& deployment,
                             const FeatureWindowConfig& window) {
  deployment.validate();
  window.validate();
  trace.validate();
  const std::size_t stride = decision_stride(trace, deployment);
  const std::size_t first_index = first_decision_index(trace, window);

  LabeledDataset dataset;
  dataset.feature_count = window.n_features;
  dataset.deployment = deployment;
  dataset.window = window;
  dataset.provenance = {trace_fingerprint(trace), config_hash(deployment, window)};

  for (std::size_t step = (first_index + stride - 1) / stride; (step + 1) * stride < trace.size(); ++step) {
    Instance inst;
    inst.step = step;
    inst.sample_index = step * stride;
    inst.time = trace.time_at(inst.sample_index);
    inst.features = extract_features(trace, inst.sample_index, window);
    inst.qml_class = label_qml(trace, step, deployment);
    inst.cml_class = label_cml(trace, step, deployment);
    dataset.instances.push_back(std::move(inst));
  }
  if (dataset.empty())
    throw EmptyDatasetError("trace of " + std::to_string(trace.size()) +
                            " samples is too short for any labeled instance");
  return dataset;
}

DatasetSplit split_by_days(const LabeledDataset& dataset, const TrafficTrace& trace, int train_days,
                           int test_days) {
  if (train_days < 1 || test_days < 1) throw DomainError("train_days and test_days must be positive");
  const Seconds day{86400};
  DatasetSplit split;
  split.test_start = trace.end_time() - day * test_days;
  const TimePoint train_start = split.test_start - day * train_days;

  std::vector<Instance> train, test;
  TimePoint earliest = split.test_start;
  for (const auto& inst : dataset.instances) {
    if (inst.time >= split.test_start) {
      test.push_back(inst);
    } else {
      earliest = std::min(earliest, inst.time);
      if (inst.time >= train_start) train.push_back(inst);
    }
  }
  const auto span = (split.test_start - earliest).count();
  split.available_train_days = static_cast<int>((span + day.count() - 1) / day.count());
  if (train_days > split.available_train_days)
    throw DomainError("requested " + std::to_string(train_days) + " training days, only " +
                      std::to_string(split.available_train_days) + " available before the test window");
  if (test.empty()) throw EmptyDatasetError("no test instances in the last " + std::to_string(test_days) + " days");
  split.train = dataset.subset(std::move(train));
  split.test = dataset.subset(std::move(test));
  return split;
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset) {
  for (int f = 1; f <= dataset.feature_count; ++f) out << 'f' << f << ',';
  out << "class_qml,class_cml\n";
  for (const auto& inst : dataset.instances) {
    for (double v : inst.features.values) out << format_double(v) << ',';
    out << inst.qml_class << ',' << inst.cml_class << '\n';
  }
}

}  // namespace vnfscale
