#include "vnfscale/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "vnfscale/error.hpp"

namespace vnfscale {

double roc_area(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  if (scores.size() != positive.size()) throw DimensionError("scores and labels differ in length");
  const auto pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), std::uint8_t{1}));
  const std::size_t neg = positive.size() - pos;
  if (pos == 0) return 0.5;
  if (neg == 0) return 1.0;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double area = 0.0;
  std::size_t tp = 0, fp = 0;
  double prev_tpr = 0.0, prev_fpr = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) (positive[order[i]] ? tp : fp) += 1;
    const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
    const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  return area;
}

EvaluationReport evaluate_predictions(std::span<const int> actual, std::span<const int> predicted,
                                      std::span<const double> scores, int v_min, int v_max) {
  if (actual.empty()) throw EmptyDatasetError("cannot evaluate an empty test set");
  if (actual.size() != predicted.size()) throw DimensionError("actual and predicted differ in length");
  const auto k = static_cast<std::size_t>(v_max - v_min + 1);
  const std::size_t n = actual.size();
  if (scores.size() != n * k) throw DimensionError("score table must hold one row per instance");

  EvaluationReport report;
  report.v_min = v_min;
  report.v_max = v_max;
  report.total = n;
  report.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (actual[i] < v_min || actual[i] > v_max || predicted[i] < v_min || predicted[i] > v_max)
      throw DomainError("class outside [v_min, v_max]");
    ++report.confusion[static_cast<std::size_t>(actual[i] - v_min)][static_cast<std::size_t>(predicted[i] - v_min)];
  }

  std::vector<double> column(n);
  std::vector<std::uint8_t> positive(n);
  for (std::size_t c = 0; c < k; ++c) {
    ClassMetrics m;
    m.label = v_min + static_cast<int>(c);
    m.tp = report.confusion[c][c];
    for (std::size_t j = 0; j < k; ++j) {
      m.support += report.confusion[c][j];
      if (j != c) m.fp += report.confusion[j][c];
    }
    m.fn = m.support - m.tp;
    m.tn = n - m.tp - m.fp - m.fn;
    m.precision = m.tp + m.fp ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.fp_rate = m.fp + m.tn ? static_cast<double>(m.fp) / static_cast<double>(m.fp + m.tn) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = scores[i * k + c];
      positive[i] = actual[i] == m.label ? 1 : 0;
    }
    m.roc_area = roc_area(column, positive);
    report.correct += m.tp;

    const double w = static_cast<double>(m.support) / static_cast<double>(n);
    report.aggregate.precision += w * m.precision;
    report.aggregate.fp_rate += w * m.fp_rate;
    report.aggregate.roc_area += w * m.roc_area;
    report.per_class.push_back(m);
  }
  return report;
}

int decide(const TrainedModel& model, const Instance& instance, const VnfDeployment& deployment,
           const TrafficTrace* trace) {
  if (model.algorithm != Algorithm::moving_average) return predict(model, instance.features);
  if (trace == nullptr) throw DomainError("moving-average decisions need the source trace");
  return predict_ma(*trace, instance.step, std::get<MovingAverageModel>(model.payload).params, deployment);
}

EvaluationReport evaluate(const TrainedModel& model, const LabeledDataset& test, LabelKind label_kind,
                          const TrafficTrace* trace) {
  if (test.empty()) throw EmptyDatasetError("cannot evaluate an empty test set");
  if (model.algorithm != Algorithm::moving_average && test.feature_count != model.feature_count)
    throw DimensionError("test set has " + std::to_string(test.feature_count) + " features, model expects " +
                         std::to_string(model.feature_count));
  const auto k = static_cast<std::size_t>(model.class_count());
  std::vector<int> actual, predicted;
  std::vector<double> scores;
  scores.reserve(test.size() * k);
  for (const auto& inst : test.instances) {
    actual.push_back(inst.label(label_kind));
    if (model.algorithm == Algorithm::moving_average) {
      const int c = decide(model, inst, test.deployment, trace);
      predicted.push_back(c);
      for (std::size_t j = 0; j < k; ++j) scores.push_back(static_cast<int>(j) == c - model.v_min ? 1.0 : 0.0);
    } else {
      const auto s = class_scores(model, inst.features);
      predicted.push_back(model.v_min + static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin()));
      scores.insert(scores.end(), s.begin(), s.end());
    }
  }
  return evaluate_predictions(actual, predicted, scores, model.v_min, model.v_max);
}

namespace {

CurvePoint curve_point(int x, const LabeledDataset& train, const LabeledDataset& test, LabelKind label_kind,
                       Algorithm algorithm, TrainParams params, std::uint64_t seed) {
  if (params.forest.features_per_split > train.feature_count) params.forest.features_per_split = train.feature_count;
  const auto model = vnfscale::train(train, label_kind, algorithm, params, seed);
  const auto report = evaluate(model, test, label_kind);
  return {x, train.size(), report.aggregate.precision, report.aggregate.fp_rate, report.aggregate.roc_area};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

}  // namespace

std::vector<CurvePoint> learning_curve_features(const LabeledDataset& train, const LabeledDataset& test,
                                                LabelKind label_kind, Algorithm algorithm, const TrainParams& params,
                                                std::span<const int> feature_counts, std::uint64_t seed) {
  std::vector<CurvePoint> curve;
  for (int f : feature_counts) {
    if (f < 1 || f > kMaxFeatures) throw DomainError("feature count " + std::to_string(f) + " outside [1, 27]");
    curve.push_back(curve_point(f, train.with_feature_prefix(f), test.with_feature_prefix(f), label_kind, algorithm,
                                params, seed));
  }
  return curve;
}

std::vector<CurvePoint> learning_curve_training_size(const LabeledDataset& full_train, const LabeledDataset& test,
                                                     LabelKind label_kind, Algorithm algorithm,
                                                     const TrainParams& params, std::span<const int> day_counts,
                                                     std::uint64_t seed) {
  if (test.empty()) throw EmptyDatasetError("empty test set");
  if (full_train.empty()) throw EmptyDatasetError("empty training set");
  TimePoint test_start = test.instances.front().time;
  for (const auto& inst : test.instances) test_start = std::min(test_start, inst.time);
  TimePoint earliest = test_start;
  for (const auto& inst : full_train.instances)
    if (inst.time < test_start) earliest = std::min(earliest, inst.time);
  const std::int64_t day = 86400;
  const auto available = static_cast<int>(((test_start - earliest).count() + day - 1) / day);

  std::vector<CurvePoint> curve;
  for (int d : day_counts) {
    if (d < 1 || d > available)
      throw DomainError("cannot train on " + std::to_string(d) + " days: " + std::to_string(available) +
                        " days available before the test window");
    const TimePoint from = test_start - Seconds{day * d};
    std::vector<Instance> selected;
    for (const auto& inst : full_train.instances)
      if (inst.time >= from && inst.time < test_start) selected.push_back(inst);
    curve.push_back(curve_point(d, full_train.subset(std::move(selected)), test, label_kind, algorithm, params, seed));
  }
  return curve;
}

namespace {

double entropy_bits(const std::map<int, std::size_t>& counts, std::size_t n) {
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

std::vector<FeatureGain> rank_features_info_gain(const LabeledDataset& train, LabelKind label_kind, int bins) {
  if (bins < 2) throw DomainError("bins must be at least 2");
  const std::size_t n = train.size();
  std::vector<FeatureGain> ranking;
  if (n == 0) return ranking;

  std::map<int, std::size_t> class_counts;
  for (const auto& inst : train.instances) ++class_counts[inst.label(label_kind)];
  const double class_entropy = entropy_bits(class_counts, n);

  std::vector<std::size_t> order(n);
  std::vector<std::size_t> bin_of(n);
  for (int f = 0; f < train.feature_count; ++f) {
    auto value = [&](std::size_t i) { return train.instances[i].features.values[static_cast<std::size_t>(f)]; };
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
    // Rank of the first occurrence keeps tied values in one bin.
    std::size_t first_rank = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r > 0 && value(order[r]) != value(order[r - 1])) first_rank = r;
      bin_of[order[r]] = first_rank * static_cast<std::size_t>(bins) / n;
    }
    std::map<std::size_t, std::map<int, std::size_t>> joint;
    std::map<std::size_t, std::size_t> bin_size;
    for (std::size_t i = 0; i < n; ++i) {
      ++joint[bin_of[i]][train.instances[i].label(label_kind)];
      ++bin_size[bin_of[i]];
    }
    double conditional = 0.0;
    for (const auto& [b, counts] : joint)
      conditional += static_cast<double>(bin_size[b]) / static_cast<double>(n) * entropy_bits(counts, bin_size[b]);
    ranking.push_back({f + 1, std::max(0.0, class_entropy - conditional)});
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const FeatureGain& a, const FeatureGain& b) { return a.gain_bits > b.gain_bits; });
  return ranking;
}

PcaResult pca(const LabeledDataset& train, std::span<const int> feature_numbers) {
  std::vector<int> wanted(feature_numbers.begin(), feature_numbers.end());
  if (wanted.empty()) {
    wanted.resize(static_cast<std::size_t>(train.feature_count));
    std::iota(wanted.begin(), wanted.end(), 1);
  }
  for (int f : wanted)
    if (f < 1 || f > train.feature_count) throw DimensionError("feature " + std::to_string(f) + " not in dataset");

  std::set<std::vector<double>> distinct;
  for (const auto& inst : train.instances) {
    distinct.insert(inst.features.values);
    if (distinct.size() >= 2) break;
  }
  if (distinct.size() < 2) throw DomainError("PCA needs at least 2 distinct rows");

  const auto n = static_cast<Eigen::Index>(train.size());
  PcaResult result;
  std::vector<Eigen::VectorXd> columns;
  for (int f : wanted) {
    Eigen::VectorXd col(n);
    for (Eigen::Index i = 0; i < n; ++i)
      col[i] = train.instances[static_cast<std::size_t>(i)].features.values[static_cast<std::size_t>(f - 1)];
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      result.dropped.push_back(f);
      continue;
    }
    columns.push_back(col / sd);
    result.features.push_back(f);
  }
  if (columns.empty()) return result;

  const auto p = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) z.col(j) = columns[static_cast<std::size_t>(j)];
  const Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
  if (solver.info() != Eigen::Success) throw Error("eigen-decomposition failed");

  const double total = solver.eigenvalues().sum();
  for (Eigen::Index j = p - 1; j >= 0; --j) {
    PrincipalComponent pc;
    pc.eigenvalue = std::max(0.0, solver.eigenvalues()[j]);
    pc.explained = total > 0.0 ? pc.eigenvalue / total : 0.0;
    Eigen::VectorXd v = solver.eigenvectors().col(j).normalized();
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    if (v[largest] < 0.0) v = -v;
    pc.loadings.assign(v.data(), v.data() + v.size());
    result.components.push_back(std::move(pc));
  }
  return result;
}

TimingResult time_train_test(const LabeledDataset& train, const LabeledDataset& test, LabelKind label_kind,
                             Algorithm algorithm, const TrainParams& params, int repetitions, std::uint64_t seed,
                             const TrafficTrace* trace) {
  if (repetitions < 1) throw DomainError("repetitions must be at least 1");
  using clock = std::chrono::steady_clock;
  std::vector<double> train_times, test_times;
  for (int r = 0; r < repetitions; ++r) {
    auto t0 = clock::now();
    const auto model = vnfscale::train(train, label_kind, algorithm, params, seed);
    auto t1 = clock::now();
    std::size_t checksum = 0;
    for (const auto& inst : test.instances)
      checksum += static_cast<std::size_t>(decide(model, inst, test.deployment, trace));
    auto t2 = clock::now();
    if (checksum == 0 && !test.empty()) throw Error("unexpected empty predictions");
    train_times.push_back(std::chrono::duration<double>(t1 - t0).count());
    test_times.push_back(std::chrono::duration<double>(t2 - t1).count());
  }
  auto ms = [](double s) { return std::round(s * 1000.0) / 1000.0; };
  return {ms(median(train_times)), ms(median(test_times))};
}

}  // namespace vnfscale
