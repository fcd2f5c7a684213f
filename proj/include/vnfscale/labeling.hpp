#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vnfscale/features.hpp"
#include "vnfscale/trace.hpp"

namespace vnfscale {

struct VnfDeployment {
  int v_min = 1;
  int v_max = 10;
  double per_vnf_capacity = 1.0e9;  // bits per second served by one VNF
  Seconds decision_interval{600};

  int class_count() const { return v_max - v_min + 1; }
  void validate() const;
};

enum class LabelKind { qml, cml };

const char* to_string(LabelKind kind);
LabelKind parse_label_kind(const std::string& text);

// Minimum VNF count that serves `load_bps` at line rate, clamped to
// [v_min, v_max].
int qos_required(double load_bps, const VnfDeployment& deployment);

// Trace samples per decision step; decision step n sits at sample n * stride.
std::size_t decision_stride(const TrafficTrace& trace, const VnfDeployment& deployment);

// Max of qos_required over every sample in [tau(n), tau(n+1)], both ends included.
int label_qml(const TrafficTrace& trace, std::size_t step, const VnfDeployment& deployment);
// Max of qos_required at the two endpoints tau(n) and tau(n+1) only.
int label_cml(const TrafficTrace& trace, std::size_t step, const VnfDeployment& deployment);

struct Instance {
  FeatureVector features;
  int qml_class = 0;
  int cml_class = 0;
  std::size_t step = 0;          // decision step n
  std::size_t sample_index = 0;  // trace index of tau(n)
  TimePoint time{};

  int label(LabelKind kind) const { return kind == LabelKind::qml ? qml_class : cml_class; }
};

struct Provenance {
  std::uint64_t trace_id = 0;
  std::uint64_t config_hash = 0;
};

struct LabeledDataset {
  std::vector<Instance> instances;
  int feature_count = 0;
  VnfDeployment deployment;
  FeatureWindowConfig window;
  Provenance provenance;

  bool empty() const { return instances.empty(); }
  std::size_t size() const { return instances.size(); }
  // Same instances restricted to the first `n` features.
  LabeledDataset with_feature_prefix(int n) const;
  LabeledDataset subset(std::vector<Instance> selected) const;
};

std::uint64_t config_hash(const VnfDeployment& deployment, const FeatureWindowConfig& window);

// One instance per decision step that has full history and lookahead.
// Throws EmptyDatasetError when the trace is too short for any.
LabeledDataset build_dataset(const TrafficTrace& trace, const VnfDeployment& deployment,
                             const FeatureWindowConfig& window);

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset test;
  TimePoint test_start{};
  int available_train_days = 0;
};

// Test = instances in the last `test_days` days of the trace; train = the
// `train_days` days immediately before. Throws DomainError if fewer train
// days are available.
DatasetSplit split_by_days(const LabeledDataset& dataset, const TrafficTrace& trace, int train_days,
                           int test_days);

// CSV with columns f1..fN,class_qml,class_cml.
void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset);

}  // namespace vnfscale
