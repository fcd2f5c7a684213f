#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vnfscale/features.hpp"
#include "vnfscale/labeling.hpp"
#include "vnfscale/trace.hpp"

namespace vnfscale {

enum class Algorithm { decision_tree, random_tree, random_forest, naive_bayes, moving_average, majority_class };

const char* to_string(Algorithm algorithm);
// Accepts both "random-forest" and "random_forest" spellings.
Algorithm parse_algorithm(const std::string& text);

struct ForestParams {
  int n_trees = 100;
  int features_per_split = 0;  // 0 selects floor(sqrt(feature_count))
  int min_leaf_size = 1;
  int max_depth = 0;  // 0 = unlimited
  bool bootstrap = true;
  int threads = 0;  // 0 = hardware concurrency; never changes the result

  int resolved_features_per_split(int feature_count) const;
  void validate(int feature_count) const;
};

struct MovingAverageParams {
  int window = 6;
};

struct TrainParams {
  ForestParams forest;
  MovingAverageParams moving_average;
};

// Flat binary tree. Leaves have feature == -1; `label` is a class offset
// from v_min. Inner nodes send x[feature] <= threshold to `left`.
struct DecisionTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
  };
  std::vector<Node> nodes;

  int predict_offset(std::span<const double> x) const;
  std::size_t depth() const;
};

struct TreeModel {
  DecisionTree tree;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
};

struct GaussianBayesModel {
  std::vector<std::uint8_t> class_seen;   // per class offset
  std::vector<double> log_prior;          // per class offset
  std::vector<std::uint8_t> feature_used; // constant features carry no evidence
  std::vector<double> mean;               // class-major, classes x features
  std::vector<double> variance;
};

struct MovingAverageModel {
  MovingAverageParams params;
};

struct ConstantModel {
  int label = 0;  // class offset
};

using ModelPayload = std::variant<TreeModel, ForestModel, GaussianBayesModel, MovingAverageModel, ConstantModel>;

struct TrainedModel {
  Algorithm algorithm = Algorithm::majority_class;
  LabelKind label_kind = LabelKind::qml;
  int feature_count = 0;
  int v_min = 1;
  int v_max = 1;
  std::uint64_t seed = 0;
  TrainParams params;
  std::uint64_t instance_count = 0;
  // Wall-clock training time. Not serialized, so saved models stay
  // byte-identical across runs.
  double training_seconds = 0.0;
  ModelPayload payload;

  int class_count() const { return v_max - v_min + 1; }
};

// Throws EmptyDatasetError on an empty dataset.
TrainedModel train(const LabeledDataset& dataset, LabelKind label_kind, Algorithm algorithm,
                   const TrainParams& params, std::uint64_t seed);

// Throws DimensionError on a feature count mismatch; moving-average models
// are driven by predict_ma instead and throw DomainError here.
int predict(const TrainedModel& model, const FeatureVector& features);

// Per-class score used for ROC analysis, indexed by class offset:
// vote fractions (forest), posterior (naive Bayes), or a 0/1 indicator.
std::vector<double> class_scores(const TrainedModel& model, const FeatureVector& features);

// Tree votes per class offset; sums to n_trees. Forest models only.
std::vector<int> forest_votes(const TrainedModel& model, const FeatureVector& features);

// qos_required of the mean of the `window` samples ending at tau(step).
int predict_ma(const TrafficTrace& trace, std::size_t step, const MovingAverageParams& params,
               const VnfDeployment& deployment);

std::string save_model(const TrainedModel& model);
TrainedModel load_model(std::string_view bytes);

void save_model_file(const std::string& path, const TrainedModel& model);
TrainedModel load_model_file(const std::string& path);

inline constexpr std::uint32_t kModelFormatVersion = 1;

}  // namespace vnfscale
