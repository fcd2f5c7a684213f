#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "vnfscale/error.hpp"
#include "vnfscale/learners.hpp"

using namespace vnfscale;

namespace {

constexpr double kGbps = 1e9;

LabeledDataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                            int v_max = 10) {
  LabeledDataset d;
  d.feature_count = static_cast<int>(rows.front().size());
  d.deployment.v_max = v_max;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Instance inst;
    inst.features.values = rows[i];
    inst.qml_class = labels[i];
    inst.cml_class = labels[i];
    d.instances.push_back(inst);
  }
  return d;
}

// Four rows, seven features: only feature 7 separates classes 1 and 3.
LabeledDataset four_rows() {
  return make_dataset({{1, 2, 1, 10, 0, 5, 1e9},
                       {2, 2, 1, 10, 0, 5, 1e9},
                       {1, 2, 1, 10, 0, 5, 2e9},
                       {2, 2, 1, 10, 0, 5, 2e9}},
                      {1, 1, 3, 3});
}

LabeledDataset random_dataset(std::uint64_t seed, std::size_t n, int features, int classes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(static_cast<std::size_t>(features));
    for (auto& x : row) x = noise(rng);
    const double signal = row[0] + 0.5 * row[1];
    int label = 1 + static_cast<int>(std::clamp(std::floor((signal + 2.0) / 4.0 * classes), 0.0, classes - 1.0));
    if (rng() % 10 == 0) label = 1 + static_cast<int>(rng() % static_cast<unsigned>(classes));
    rows.push_back(row);
    labels.push_back(label);
  }
  return make_dataset(rows, labels);
}

FeatureVector fv(std::vector<double> v) { return FeatureVector{std::move(v)}; }

double entropy(const std::vector<int>& labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  double h = 0.0;
  for (auto [_, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(labels.size());
    h -= p * std::log2(p);
  }
  return h;
}

const std::vector<Algorithm> kAllClassifiers = {Algorithm::decision_tree, Algorithm::random_tree,
                                                 Algorithm::random_forest, Algorithm::naive_bayes,
                                                 Algorithm::majority_class};

}  // namespace

TEST_CASE("decision tree splits the four-row example on feature 7") {
  auto model = train(four_rows(), LabelKind::qml, Algorithm::decision_tree, {}, 1);
  const auto& tree = std::get<TreeModel>(model.payload).tree;
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].feature == 6);
  CHECK(tree.nodes[0].threshold == 1.5e9);
  for (const auto& inst : four_rows().instances) CHECK(predict(model, inst.features) == inst.qml_class);
  CHECK(predict(model, fv({1, 2, 1, 10, 0, 5, 2e9})) == 3);
  CHECK(predict(model, fv({1, 2, 1, 10, 0, 5, 0.2e9})) == 1);
}

TEST_CASE("single-class data gives a constant predictor for every algorithm") {
  auto data = make_dataset({{1, 5}, {2, 6}, {3, 7}}, {4, 4, 4});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(-1e12, 1e12);
  for (auto algo : kAllClassifiers) {
    auto model = train(data, LabelKind::qml, algo, {}, 3);
    for (int i = 0; i < 50; ++i) REQUIRE(predict(model, fv({x(rng), x(rng)})) == 4);
  }
}

TEST_CASE("degenerate forest equals the decision tree") {
  auto data = random_dataset(4, 300, 6, 4);
  TrainParams p;
  p.forest.n_trees = 1;
  p.forest.bootstrap = false;
  p.forest.features_per_split = 6;
  auto forest = train(data, LabelKind::qml, Algorithm::random_forest, p, 9);
  auto tree = train(data, LabelKind::qml, Algorithm::decision_tree, p, 9);
  const auto& a = std::get<ForestModel>(forest.payload).trees.at(0);
  const auto& b = std::get<TreeModel>(tree.payload).tree;
  REQUIRE(a.nodes.size() == b.nodes.size());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    auto v = fv({g(rng), g(rng), g(rng), g(rng), g(rng), g(rng)});
    REQUIRE(predict(forest, v) == predict(tree, v));
  }

  p.forest.n_trees = 3;
  auto three = train(data, LabelKind::qml, Algorithm::random_forest, p, 9);
  for (const auto& inst : data.instances) {
    REQUIRE(predict(three, inst.features) == predict(tree, inst.features));
    auto votes = forest_votes(three, inst.features);
    REQUIRE(*std::max_element(votes.begin(), votes.end()) == 3);
  }
}

TEST_CASE("forest votes sum to n_trees and prediction follows the vote") {
  auto data = random_dataset(5, 400, 5, 5);
  TrainParams p;
  p.forest.n_trees = 25;
  auto model = train(data, LabelKind::qml, Algorithm::random_forest, p, 13);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    auto v = fv({g(rng), g(rng), g(rng), g(rng), g(rng)});
    auto votes = forest_votes(model, v);
    REQUIRE(std::accumulate(votes.begin(), votes.end(), 0) == 25);
    const auto top = std::max_element(votes.begin(), votes.end()) - votes.begin();
    REQUIRE(predict(model, v) == model.v_min + static_cast<int>(top));
  }
}

TEST_CASE("every accepted split has positive information gain") {
  auto data = random_dataset(6, 500, 4, 6);
  for (auto algo : {Algorithm::decision_tree, Algorithm::random_tree}) {
    TrainParams p;
    p.forest.min_leaf_size = 2;
    auto model = train(data, LabelKind::qml, algo, p, 21);
    const auto& tree = std::get<TreeModel>(model.payload).tree;
    // Route every training row and recompute gains from scratch.
    std::vector<std::vector<int>> reach(tree.nodes.size());
    for (const auto& inst : data.instances) {
      int at = 0;
      for (;;) {
        reach[static_cast<std::size_t>(at)].push_back(inst.qml_class);
        const auto& n = tree.nodes[static_cast<std::size_t>(at)];
        if (n.feature < 0) break;
        at = inst.features.values[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
      }
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const auto& n = tree.nodes[i];
      if (n.feature < 0) {
        REQUIRE(reach[i].size() >= 2);
        continue;
      }
      const auto& l = reach[static_cast<std::size_t>(n.left)];
      const auto& r = reach[static_cast<std::size_t>(n.right)];
      const double total = static_cast<double>(l.size() + r.size());
      const double children = (static_cast<double>(l.size()) * entropy(l) + static_cast<double>(r.size()) * entropy(r)) / total;
      REQUIRE(entropy(reach[i]) - children > 0.0);
    }
  }
}

TEST_CASE("unlimited tree fits any consistent dataset") {
  auto data = random_dataset(7, 600, 5, 7);
  auto model = train(data, LabelKind::qml, Algorithm::decision_tree, {}, 0);
  for (const auto& inst : data.instances) REQUIRE(predict(model, inst.features) == inst.qml_class);
}

TEST_CASE("max_depth and min_leaf_size bound the tree") {
  auto data = random_dataset(8, 600, 5, 7);
  TrainParams p;
  p.forest.max_depth = 3;
  auto model = train(data, LabelKind::qml, Algorithm::decision_tree, p, 0);
  CHECK(std::get<TreeModel>(model.payload).tree.depth() <= 3);
}

TEST_CASE("predictions stay in the class range for odd inputs") {
  auto data = random_dataset(9, 300, 3, 4);
  for (auto algo : kAllClassifiers) {
    auto model = train(data, LabelKind::qml, algo, {}, 5);
    for (double v : {-1e300, 1e300, 0.0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}) {
      const int c = predict(model, fv({v, -v, v}));
      REQUIRE(c >= model.v_min);
      REQUIRE(c <= model.v_max);
    }
  }
}

TEST_CASE("naive Bayes separates distant clusters and returns a posterior") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 300; ++i) {
    const int c = 1 + i % 3;
    rows.push_back({10.0 * c + g(rng), 7.0, -5.0 * c + g(rng)});
    labels.push_back(c);
  }
  auto data = make_dataset(rows, labels);
  auto model = train(data, LabelKind::qml, Algorithm::naive_bayes, {}, 0);
  int correct = 0;
  for (const auto& inst : data.instances) {
    correct += predict(model, inst.features) == inst.qml_class;
    auto s = class_scores(model, inst.features);
    REQUIRE(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(1.0));
    for (std::size_t c = 3; c < s.size(); ++c) REQUIRE(s[c] == 0.0);
  }
  CHECK(correct >= 295);
}

TEST_CASE("prediction errors") {
  auto model = train(four_rows(), LabelKind::qml, Algorithm::decision_tree, {}, 1);
  CHECK_THROWS_AS(predict(model, fv({1, 2, 3})), DimensionError);
  CHECK_THROWS_AS(train(LabeledDataset{}, LabelKind::qml, Algorithm::decision_tree, {}, 1), EmptyDatasetError);
  TrainParams bad;
  bad.forest.n_trees = 0;
  CHECK_THROWS_AS(train(four_rows(), LabelKind::qml, Algorithm::random_forest, bad, 1), DomainError);
  auto ma = train(four_rows(), LabelKind::qml, Algorithm::moving_average, {}, 1);
  CHECK_THROWS_AS(predict(ma, four_rows().instances[0].features), DomainError);
}

TEST_CASE("moving-average baseline") {
  VnfDeployment d;
  auto rates = [](std::vector<double> g) {
    TrafficTrace t;
    for (double r : g) t.samples.push_back(r * kGbps * 300.0);
    return t;
  };
  MovingAverageParams p;
  CHECK(predict_ma(rates({2.5, 2.5, 2.5, 2.5, 2.5, 2.5, 2.5}), 3, p, d) == 3);
  CHECK(predict_ma(rates(std::vector<double>(20, 4.2)), 5, p, d) == 5);
  // Rising load: the average lags behind the upcoming peak.
  auto rising = rates({0.5, 1, 2, 3, 4, 5, 6, 6.5, 7});
  CHECK(predict_ma(rising, 3, p, d) == 4);
  CHECK(label_qml(rising, 3, d) == 7);
  CHECK_THROWS_AS(predict_ma(rising, 2, p, d), WindowError);
}

TEST_CASE("training is deterministic and independent of thread count") {
  auto data = random_dataset(11, 500, 6, 5);
  TrainParams p;
  p.forest.n_trees = 16;
  p.forest.threads = 1;
  const auto a = save_model(train(data, LabelKind::qml, Algorithm::random_forest, p, 77));
  p.forest.threads = 4;
  const auto b = save_model(train(data, LabelKind::qml, Algorithm::random_forest, p, 77));
  CHECK(a == b);
  const auto c = save_model(train(data, LabelKind::qml, Algorithm::random_forest, p, 78));
  CHECK(a != c);
}

TEST_CASE("model files round-trip every algorithm") {
  auto data = random_dataset(12, 400, 6, 6);
  TrainParams p;
  p.forest.n_trees = 10;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  std::vector<FeatureVector> probes;
  for (int i = 0; i < 1000; ++i) probes.push_back(fv({g(rng), g(rng), g(rng), g(rng), g(rng), g(rng)}));
  for (auto algo : kAllClassifiers) {
    auto model = train(data, LabelKind::cml, algo, p, 4);
    const auto bytes = save_model(model);
    auto loaded = load_model(bytes);
    CHECK(loaded.algorithm == algo);
    CHECK(loaded.label_kind == LabelKind::cml);
    CHECK(save_model(loaded) == bytes);
    for (const auto& v : probes) {
      REQUIRE(predict(loaded, v) == predict(model, v));
      REQUIRE(class_scores(loaded, v) == class_scores(model, v));
    }
  }
  auto ma = load_model(save_model(train(data, LabelKind::qml, Algorithm::moving_average, p, 4)));
  CHECK(std::get<MovingAverageModel>(ma.payload).params.window == 6);
}

TEST_CASE("model file corruption and version errors") {
  auto bytes = save_model(train(four_rows(), LabelKind::qml, Algorithm::decision_tree, {}, 1));
  CHECK_THROWS_AS(load_model(bytes.substr(0, bytes.size() - 3)), CorruptionError);
  CHECK_THROWS_AS(load_model(bytes.substr(0, 10)), CorruptionError);
  auto flipped = bytes;
  flipped.back() ^= 0x01;
  CHECK_THROWS_AS(load_model(flipped), CorruptionError);
  auto future = bytes;
  future[8] = static_cast<char>(kModelFormatVersion + 1);
  CHECK_THROWS_AS(load_model(future), FormatVersionError);
  auto magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(load_model(magic), CorruptionError);
}
