#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vnfscale/labeling.hpp"
#include "vnfscale/learners.hpp"

namespace vnfscale {

struct ClassMetrics {
  int label = 0;
  std::size_t support = 0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;  // TP / (TP + FP), 0 when nothing was predicted
  double fp_rate = 0.0;    // FP / (FP + TN), 0 when there are no negatives
  double roc_area = 0.0;
};

struct AggregateMetrics {
  double precision = 0.0;
  double fp_rate = 0.0;
  double roc_area = 0.0;
};

struct EvaluationReport {
  int v_min = 1;
  int v_max = 1;
  // confusion[actual][predicted], both as class offsets.
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<ClassMetrics> per_class;
  AggregateMetrics aggregate;  // weighted by class support
  std::size_t total = 0;
  std::size_t correct = 0;
};

// Area under the ROC curve of `scores` against `positive`, built by sweeping
// every distinct score as a threshold and integrating with the trapezoidal
// rule. 0.5 when there are no positives, 1.0 when there are no negatives.
double roc_area(std::span<const double> scores, std::span<const std::uint8_t> positive);

// `scores` is row-major, one row of class_count scores per instance.
EvaluationReport evaluate_predictions(std::span<const int> actual, std::span<const int> predicted,
                                      std::span<const double> scores, int v_min, int v_max);

// Moving-average models need the trace the test set was built from.
EvaluationReport evaluate(const TrainedModel& model, const LabeledDataset& test, LabelKind label_kind,
                          const TrafficTrace* trace = nullptr);

// Decision for one instance: predict() for classifiers, predict_ma() for MA.
int decide(const TrainedModel& model, const Instance& instance, const VnfDeployment& deployment,
           const TrafficTrace* trace);

struct CurvePoint {
  int x = 0;  // feature count or training days
  std::size_t train_size = 0;
  double precision = 0.0;
  double fp_rate = 0.0;
  double roc_area = 0.0;
};

std::vector<CurvePoint> learning_curve_features(const LabeledDataset& train, const LabeledDataset& test,
                                                LabelKind label_kind, Algorithm algorithm, const TrainParams& params,
                                                std::span<const int> feature_counts, std::uint64_t seed);

// Trains on the most recent d days before the first test instance for each
// d in day_counts. Throws DomainError naming the available days when d is
// too large.
std::vector<CurvePoint> learning_curve_training_size(const LabeledDataset& full_train, const LabeledDataset& test,
                                                     LabelKind label_kind, Algorithm algorithm,
                                                     const TrainParams& params, std::span<const int> day_counts,
                                                     std::uint64_t seed);

struct FeatureGain {
  int feature = 0;  // 1-based feature number
  double gain_bits = 0.0;
};

// Equal-frequency binning into `bins` bins (tied values share a bin), then
// H(class) - H(class | bin). Sorted by gain descending, feature ascending.
std::vector<FeatureGain> rank_features_info_gain(const LabeledDataset& train, LabelKind label_kind, int bins = 10);

struct PrincipalComponent {
  double eigenvalue = 0.0;
  double explained = 0.0;        // eigenvalue / sum of eigenvalues
  std::vector<double> loadings;  // over PcaResult::features, unit norm
};

struct PcaResult {
  std::vector<int> features;  // retained feature numbers, in order
  std::vector<int> dropped;   // constant features
  std::vector<PrincipalComponent> components;
};

// Standardized PCA (correlation matrix). `feature_numbers` selects a subset;
// empty means all features. Throws DomainError with fewer than 2 distinct rows.
PcaResult pca(const LabeledDataset& train, std::span<const int> feature_numbers = {});

struct FeatureRanking {
  std::vector<FeatureGain> by_info_gain;
  PcaResult pca;
};

struct TimingResult {
  double train_seconds = 0.0;  // median, millisecond resolution
  double test_seconds = 0.0;
};

TimingResult time_train_test(const LabeledDataset& train, const LabeledDataset& test, LabelKind label_kind,
                             Algorithm algorithm, const TrainParams& params, int repetitions, std::uint64_t seed,
                             const TrafficTrace* trace = nullptr);

}  // namespace vnfscale
