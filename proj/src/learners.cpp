#include "vnfscale/learners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <thread>

#include "vnfscale/error.hpp"
#include "vnfscale/util.hpp"

namespace vnfscale {

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::decision_tree: return "decision-tree";
    case Algorithm::random_tree: return "random-tree";
    case Algorithm::random_forest: return "random-forest";
    case Algorithm::naive_bayes: return "naive-bayes";
    case Algorithm::moving_average: return "moving-average";
    case Algorithm::majority_class: return "majority-class";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& text) {
  std::string key = text;
  std::replace(key.begin(), key.end(), '_', '-');
  for (Algorithm a : {Algorithm::decision_tree, Algorithm::random_tree, Algorithm::random_forest,
                      Algorithm::naive_bayes, Algorithm::moving_average, Algorithm::majority_class})
    if (key == to_string(a)) return a;
  if (key == "ma") return Algorithm::moving_average;
  throw DomainError("unknown algorithm '" + text + "'");
}

int ForestParams::resolved_features_per_split(int feature_count) const {
  if (features_per_split > 0) return features_per_split;
  return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(feature_count)))));
}

void ForestParams::validate(int feature_count) const {
  if (n_trees < 1) throw DomainError("n_trees must be at least 1");
  const int k = resolved_features_per_split(feature_count);
  if (k < 1 || k > feature_count)
    throw DomainError("features_per_split must be within [1, " + std::to_string(feature_count) + "]");
  if (min_leaf_size < 1) throw DomainError("min_leaf_size must be at least 1");
  if (max_depth < 0) throw DomainError("max_depth must be non-negative");
}

int DecisionTree::predict_offset(std::span<const double> x) const {
  int at = 0;
  while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
    const Node& n = nodes[static_cast<std::size_t>(at)];
    at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(at)].label;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

namespace {

// Portable RNG helpers: std distributions are implementation-defined, so
// draws are derived from raw 64-bit outputs.
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit_from_bits(next()) * static_cast<double>(n)); }
};

int majority_offset(std::span<const std::uint32_t> counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

// Rows are feature vectors, labels are class offsets.
struct TrainingView {
  const std::vector<const double*>& rows;
  const std::vector<int>& labels;
  int feature_count;
  int class_count;
};

class TreeBuilder {
 public:
  TreeBuilder(const TrainingView& data, int features_per_split, int min_leaf, int max_depth, Rng* rng)
      : data_(data),
        features_per_split_(features_per_split),
        min_leaf_(static_cast<std::size_t>(min_leaf)),
        max_depth_(max_depth),
        rng_(rng),
        xlogx_(data.rows.size() + 1, 0.0) {
    for (std::size_t c = 1; c < xlogx_.size(); ++c)
      xlogx_[c] = static_cast<double>(c) * std::log2(static_cast<double>(c));
  }

  DecisionTree build(std::vector<std::uint32_t> sample) {
    sample_ = std::move(sample);
    tree_.nodes.clear();
    grow(0, sample_.size(), 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
  };

  // n * H(counts) in bits.
  double weighted_entropy(std::span<const std::uint32_t> counts, std::size_t n) const {
    double sum = 0.0;
    for (auto c : counts) sum += xlogx_[c];
    return xlogx_[n] - sum;
  }

  static bool better(const Split& a, const Split& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.feature != b.feature) return a.feature < b.feature;
    return a.threshold < b.threshold;
  }

  void scan_feature(int feature, std::size_t begin, std::size_t end, double parent_entropy, Split& best) {
    const std::size_t n = end - begin;
    pairs_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = sample_[begin + i];
      pairs_[i] = {data_.rows[row][feature], data_.labels[row]};
    }
    std::sort(pairs_.begin(), pairs_.end());
    if (pairs_.front().first == pairs_.back().first) return;

    std::fill(left_.begin(), left_.end(), 0u);
    right_ = parent_counts_;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto label = static_cast<std::size_t>(pairs_[i].second);
      ++left_[label];
      --right_[label];
      const double lo = pairs_[i].first;
      const double hi = pairs_[i + 1].first;
      if (lo == hi) continue;
      const std::size_t nl = i + 1;
      const std::size_t nr = n - nl;
      if (nl < min_leaf_ || nr < min_leaf_) continue;
      const double children = (weighted_entropy(left_, nl) + weighted_entropy(right_, nr)) / static_cast<double>(n);
      const double gain = parent_entropy - children;
      if (gain <= kMinGain) continue;
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      Split candidate{gain, feature, threshold};
      if (best.feature < 0 || better(candidate, best)) best = candidate;
    }
  }

  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    parent_counts_.assign(static_cast<std::size_t>(data_.class_count), 0u);
    for (std::size_t i = begin; i < end; ++i) ++parent_counts_[static_cast<std::size_t>(data_.labels[sample_[i]])];
    const int leaf_label = majority_offset(parent_counts_);
    tree_.nodes[static_cast<std::size_t>(id)].label = leaf_label;

    const std::size_t n = end - begin;
    const bool pure = static_cast<std::size_t>(parent_counts_[static_cast<std::size_t>(leaf_label)]) == n;
    if (pure || n < 2 * min_leaf_ || (max_depth_ > 0 && depth >= max_depth_)) return id;

    const double parent_entropy = weighted_entropy(parent_counts_, n) / static_cast<double>(n);
    left_.assign(parent_counts_.size(), 0u);

    Split best;
    if (rng_ == nullptr) {
      for (int f = 0; f < data_.feature_count; ++f) scan_feature(f, begin, end, parent_entropy, best);
    } else {
      order_.resize(static_cast<std::size_t>(data_.feature_count));
      std::iota(order_.begin(), order_.end(), 0);
      for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[rng_->below(i)]);
      // Examine the sampled subset; if it has no useful split keep drawing
      // features until one does.
      for (std::size_t i = 0; i < order_.size(); ++i) {
        if (static_cast<int>(i) >= features_per_split_ && best.feature >= 0) break;
        scan_feature(order_[i], begin, end, parent_entropy, best);
      }
    }
    if (best.feature < 0) return id;

    auto* first = sample_.data() + begin;
    auto* last = sample_.data() + end;
    auto* mid = std::stable_partition(first, last, [&](std::uint32_t row) {
      return data_.rows[row][best.feature] <= best.threshold;
    });
    const std::size_t split_at = begin + static_cast<std::size_t>(mid - first);

    const int left = grow(begin, split_at, depth + 1);
    const int right = grow(split_at, end, depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  static constexpr double kMinGain = 1e-12;

  const TrainingView& data_;
  int features_per_split_;
  std::size_t min_leaf_;
  int max_depth_;
  Rng* rng_;
  std::vector<double> xlogx_;
  std::vector<std::uint32_t> sample_;
  std::vector<std::pair<double, int>> pairs_;
  std::vector<std::uint32_t> parent_counts_, left_, right_;
  std::vector<int> order_;
  DecisionTree tree_;
};

DecisionTree build_random_tree(const TrainingView& data, const ForestParams& params, std::uint64_t seed,
                               bool bootstrap) {
  Rng rng{seed};
  const std::size_t n = data.rows.size();
  std::vector<std::uint32_t> sample(n);
  if (bootstrap) {
    for (auto& s : sample) s = static_cast<std::uint32_t>(rng.below(n));
    std::sort(sample.begin(), sample.end());
  } else {
    std::iota(sample.begin(), sample.end(), 0u);
  }
  TreeBuilder builder(data, params.resolved_features_per_split(data.feature_count), params.min_leaf_size,
                      params.max_depth, &rng);
  return builder.build(std::move(sample));
}

GaussianBayesModel train_bayes(const TrainingView& data) {
  const auto classes = static_cast<std::size_t>(data.class_count);
  const auto features = static_cast<std::size_t>(data.feature_count);
  const std::size_t n = data.rows.size();
  GaussianBayesModel m;
  m.class_seen.assign(classes, 0);
  m.log_prior.assign(classes, -std::numeric_limits<double>::infinity());
  m.feature_used.assign(features, 0);
  m.mean.assign(classes * features, 0.0);
  m.variance.assign(classes * features, 0.0);

  std::vector<std::size_t> count(classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(data.labels[i]);
    ++count[c];
    for (std::size_t f = 0; f < features; ++f) m.mean[c * features + f] += data.rows[i][f];
  }
  for (std::size_t c = 0; c < classes; ++c) {
    if (count[c] == 0) continue;
    m.class_seen[c] = 1;
    m.log_prior[c] = std::log((static_cast<double>(count[c]) + 1.0) / static_cast<double>(n + classes));
    for (std::size_t f = 0; f < features; ++f) m.mean[c * features + f] /= static_cast<double>(count[c]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(data.labels[i]);
    for (std::size_t f = 0; f < features; ++f) {
      const double d = data.rows[i][f] - m.mean[c * features + f];
      m.variance[c * features + f] += d * d;
    }
  }
  for (std::size_t f = 0; f < features; ++f) {
    double lo = data.rows[0][f], hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, data.rows[i][f]);
      hi = std::max(hi, data.rows[i][f]);
    }
    const double range = hi - lo;
    m.feature_used[f] = range > 0.0 ? 1 : 0;
    const double floor = 1e-12 * range * range;
    for (std::size_t c = 0; c < classes; ++c) {
      if (count[c] == 0) continue;
      double& v = m.variance[c * features + f];
      v = std::max(v / static_cast<double>(count[c]), floor);
    }
  }
  return m;
}

std::vector<double> bayes_posterior(const GaussianBayesModel& m, std::span<const double> x) {
  const std::size_t classes = m.class_seen.size();
  const std::size_t features = m.feature_used.size();
  std::vector<double> log_post(classes, -std::numeric_limits<double>::infinity());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < classes; ++c) {
    if (!m.class_seen[c]) continue;
    double lp = m.log_prior[c];
    for (std::size_t f = 0; f < features; ++f) {
      if (!m.feature_used[f]) continue;
      const double var = m.variance[c * features + f];
      const double d = x[f] - m.mean[c * features + f];
      lp += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
    }
    log_post[c] = lp;
    top = std::max(top, lp);
  }
  std::vector<double> post(classes, 0.0);
  double total = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (!m.class_seen[c]) continue;
    post[c] = std::exp(log_post[c] - top);
    total += post[c];
  }
  for (auto& p : post) p /= total;
  return post;
}

int argmax_offset(std::span<const double> scores) {
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

void check_dimension(const TrainedModel& model, const FeatureVector& features) {
  if (model.algorithm == Algorithm::moving_average)
    throw DomainError("moving-average models predict from trace history; use predict_ma");
  if (static_cast<int>(features.size()) != model.feature_count)
    throw DimensionError("model expects " + std::to_string(model.feature_count) + " features, got " +
                         std::to_string(features.size()));
}

}  // namespace

TrainedModel train(const LabeledDataset& dataset, LabelKind label_kind, Algorithm algorithm,
                   const TrainParams& params, std::uint64_t seed) {
  if (dataset.empty()) throw EmptyDatasetError("cannot train on an empty dataset");
  dataset.deployment.validate();
  const auto start = std::chrono::steady_clock::now();

  TrainedModel model;
  model.algorithm = algorithm;
  model.label_kind = label_kind;
  model.feature_count = dataset.feature_count;
  model.v_min = dataset.deployment.v_min;
  model.v_max = dataset.deployment.v_max;
  model.seed = seed;
  model.params = params;
  model.params.forest.threads = 0;
  model.instance_count = dataset.size();

  std::vector<const double*> rows;
  std::vector<int> labels;
  rows.reserve(dataset.size());
  labels.reserve(dataset.size());
  for (const auto& inst : dataset.instances) {
    if (static_cast<int>(inst.features.size()) != dataset.feature_count)
      throw DimensionError("instances disagree on feature count");
    const int label = inst.label(label_kind);
    if (label < model.v_min || label > model.v_max) throw DomainError("label outside the class range");
    rows.push_back(inst.features.values.data());
    labels.push_back(label - model.v_min);
  }
  TrainingView view{rows, labels, dataset.feature_count, model.class_count()};

  switch (algorithm) {
    case Algorithm::decision_tree: {
      params.forest.validate(dataset.feature_count);
      std::vector<std::uint32_t> sample(rows.size());
      std::iota(sample.begin(), sample.end(), 0u);
      TreeBuilder builder(view, dataset.feature_count, params.forest.min_leaf_size, params.forest.max_depth, nullptr);
      model.payload = TreeModel{builder.build(std::move(sample))};
      break;
    }
    case Algorithm::random_tree:
      params.forest.validate(dataset.feature_count);
      model.payload = TreeModel{build_random_tree(view, params.forest, derive_seed(seed, 0), false)};
      break;
    case Algorithm::random_forest: {
      const ForestParams& fp = params.forest;
      fp.validate(dataset.feature_count);
      ForestModel forest;
      forest.trees.resize(static_cast<std::size_t>(fp.n_trees));
      unsigned workers = fp.threads > 0 ? static_cast<unsigned>(fp.threads) : std::thread::hardware_concurrency();
      workers = std::clamp(workers, 1u, static_cast<unsigned>(fp.n_trees));
      auto work = [&](unsigned worker) {
        for (std::size_t t = worker; t < forest.trees.size(); t += workers)
          forest.trees[t] = build_random_tree(view, fp, derive_seed(seed, t), fp.bootstrap);
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      }
      model.payload = std::move(forest);
      break;
    }
    case Algorithm::naive_bayes:
      model.payload = train_bayes(view);
      break;
    case Algorithm::moving_average:
      if (params.moving_average.window < 1) throw DomainError("moving-average window must be at least 1");
      model.payload = MovingAverageModel{params.moving_average};
      break;
    case Algorithm::majority_class: {
      std::vector<std::uint32_t> counts(static_cast<std::size_t>(model.class_count()), 0u);
      for (int l : labels) ++counts[static_cast<std::size_t>(l)];
      model.payload = ConstantModel{majority_offset(counts)};
      break;
    }
  }
  model.training_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

std::vector<int> forest_votes(const TrainedModel& model, const FeatureVector& features) {
  check_dimension(model, features);
  const auto* forest = std::get_if<ForestModel>(&model.payload);
  if (forest == nullptr) throw DomainError("forest_votes requires a random-forest model");
  std::vector<int> votes(static_cast<std::size_t>(model.class_count()), 0);
  for (const auto& tree : forest->trees) ++votes[static_cast<std::size_t>(tree.predict_offset(features.values))];
  return votes;
}

std::vector<double> class_scores(const TrainedModel& model, const FeatureVector& features) {
  check_dimension(model, features);
  std::vector<double> scores(static_cast<std::size_t>(model.class_count()), 0.0);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TreeModel>) {
          scores[static_cast<std::size_t>(p.tree.predict_offset(features.values))] = 1.0;
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          const auto votes = forest_votes(model, features);
          for (std::size_t c = 0; c < votes.size(); ++c)
            scores[c] = static_cast<double>(votes[c]) / static_cast<double>(p.trees.size());
        } else if constexpr (std::is_same_v<T, GaussianBayesModel>) {
          scores = bayes_posterior(p, features.values);
        } else if constexpr (std::is_same_v<T, ConstantModel>) {
          scores[static_cast<std::size_t>(p.label)] = 1.0;
        }
      },
      model.payload);
  return scores;
}

int predict(const TrainedModel& model, const FeatureVector& features) {
  const auto scores = class_scores(model, features);
  return model.v_min + argmax_offset(scores);
}

int predict_ma(const TrafficTrace& trace, std::size_t step, const MovingAverageParams& params,
               const VnfDeployment& deployment) {
  if (params.window < 1) throw DomainError("moving-average window must be at least 1");
  const std::size_t at = step * decision_stride(trace, deployment);
  const auto window = static_cast<std::size_t>(params.window);
  if (at >= trace.size() || at + 1 < window)
    throw WindowError("insufficient history for moving average at step " + std::to_string(step), window,
                      std::min(at + 1, trace.size()));
  double sum = 0.0;
  for (std::size_t i = at + 1 - window; i <= at; ++i) sum += trace.rate_at(i);
  return qos_required(sum / static_cast<double>(window), deployment);
}

}  // namespace vnfscale
