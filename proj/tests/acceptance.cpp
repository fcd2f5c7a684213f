// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vnfscale/analysis.hpp"
#include "vnfscale/cli.hpp"
#include "vnfscale/config.hpp"
#include "vnfscale/cost.hpp"
#include "vnfscale/simulate.hpp"

using namespace vnfscale;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double value, int digits = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

// ---- shared fixtures -------------------------------------------------------

struct Synthetic {
  RunConfig config = default_run_config();
  TrafficTrace trace;
  LabeledDataset data;
  DatasetSplit split;

  Synthetic() {
    trace = generate_trace(config.trace_spec());
    data = build_dataset(trace, config.deployment, config.window);
    split = split_by_days(data, trace, config.train_days, config.test_days);
  }

  TrainedModel fit(Algorithm algorithm, LabelKind label) const {
    return train(split.train, label, algorithm, config.params, config.stream_seed(SeedStream::training));
  }
};

const Synthetic& synthetic() {
  static const Synthetic s;
  return s;
}

// Smallest k in [v_min, v_max] with k * capacity >= rate, found by counting up.
int brute_required(double rate, const VnfDeployment& d) {
  int k = d.v_min;
  while (k < d.v_max && static_cast<double>(k) * d.per_vnf_capacity < rate) ++k;
  return k;
}

// ---- criteria --------------------------------------------------------------

Outcome labeling_oracle() {
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> level(0.0, 12.0e9);
  std::size_t steps = 0;
  for (int t = 0; t < 100; ++t) {
    VnfDeployment d;
    d.v_max = 4 + static_cast<int>(rng() % 10);
    d.decision_interval = Seconds{300 * (1 + static_cast<int>(rng() % 4))};
    TrafficTrace trace;
    trace.samples.resize(200 + rng() % 400);
    for (auto& s : trace.samples) s = level(rng) * 300.0;
    const std::size_t stride = static_cast<std::size_t>(d.decision_interval.count() / 300);
    for (std::size_t n = 0; (n + 1) * stride < trace.size(); ++n) {
      int qml = 0;
      for (std::size_t i = n * stride; i <= (n + 1) * stride; ++i)
        qml = std::max(qml, brute_required(trace.samples[i] / 300.0, d));
      const int cml = std::max(brute_required(trace.samples[n * stride] / 300.0, d),
                               brute_required(trace.samples[(n + 1) * stride] / 300.0, d));
      if (label_qml(trace, n, d) != qml || label_cml(trace, n, d) != cml)
        return {false, "trace " + std::to_string(t) + " step " + std::to_string(n) + " disagrees"};
      ++steps;
    }
  }
  return {true, std::to_string(steps) + " steps over 100 traces agree"};
}

Outcome qml_zero_degradation() {
  const auto& s = synthetic();
  const VirtualizationProfile instant{"instant", 0.0, 0.0, 0.0};
  double worst = 0.0;
  std::vector<TrafficTrace> traces{s.trace};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto spec = s.config.trace_spec();
    spec.days = 7;
    spec.seed = seed;
    spec.noise_stddev *= 5;
    spec.burst_rate = 4;
    traces.push_back(generate_trace(spec));
  }
  for (const auto& trace : traces) {
    const auto data = build_dataset(trace, s.config.deployment, s.config.window);
    const auto report =
        simulate(trace, label_decisions(data, LabelKind::qml), s.config.deployment, instant, s.config.server);
    worst = std::max(worst, report.degraded_minutes_total);
  }
  return {worst == 0.0, "max degraded minutes " + num(worst, 6) + " over " + std::to_string(traces.size()) + " traces"};
}

struct ScalingRuns {
  std::vector<std::string> methods{"qml", "cml", "ma"};
  std::vector<std::string> profiles{"xen", "kvm", "docker", "lxc"};
  double degraded[3][4] = {};
};

const ScalingRuns& scaling_runs() {
  static const ScalingRuns runs = [] {
    const auto& s = synthetic();
    ScalingRuns r;
    const TrainedModel models[3] = {s.fit(Algorithm::random_forest, LabelKind::qml),
                                    s.fit(Algorithm::random_forest, LabelKind::cml),
                                    s.fit(Algorithm::moving_average, LabelKind::qml)};
    for (int m = 0; m < 3; ++m) {
      const auto decisions = model_decisions(models[m], s.split.test, s.trace);
      for (int p = 0; p < 4; ++p)
        r.degraded[m][p] = simulate(s.trace, decisions, s.config.deployment, builtin_profile(r.profiles[p]),
                                    s.config.server)
                               .degraded_minutes_total;
    }
    return r;
  }();
  return runs;
}

Outcome ordering() {
  const auto& r = scaling_runs();
  bool ok = true;
  std::string detail;
  for (int p = 0; p < 4; ++p) {
    ok = ok && r.degraded[0][p] <= r.degraded[1][p] && r.degraded[1][p] <= r.degraded[2][p];
    detail += r.profiles[p] + " " + num(r.degraded[0][p], 1) + "/" + num(r.degraded[1][p], 1) + "/" +
              num(r.degraded[2][p], 1) + "  ";
  }
  for (int m = 0; m < 3; ++m)
    for (int container : {2, 3})
      for (int hypervisor : {0, 1}) ok = ok && r.degraded[m][container] <= r.degraded[m][hypervisor];
  return {ok, "degraded min qml/cml/ma: " + detail};
}

Outcome accuracy() {
  const auto& s = synthetic();
  bool ok = true;
  std::string detail;
  for (LabelKind label : {LabelKind::qml, LabelKind::cml}) {
    const double forest = evaluate(s.fit(Algorithm::random_forest, label), s.split.test, label, &s.trace).aggregate.precision;
    const double tree = evaluate(s.fit(Algorithm::decision_tree, label), s.split.test, label, &s.trace).aggregate.precision;
    const double ma = evaluate(s.fit(Algorithm::moving_average, label), s.split.test, label, &s.trace).aggregate.precision;
    ok = ok && forest >= 0.90 && forest >= ma + 0.05 && forest >= tree - 0.02;
    detail += std::string(to_string(label)) + ": forest " + num(forest) + " tree " + num(tree) + " ma " + num(ma) + "  ";
  }
  return {ok, detail};
}

Outcome learning_curves() {
  const auto& s = synthetic();
  const auto seed = s.config.stream_seed(SeedStream::curves);
  bool ok = s.config.synthetic.weekday_factor != 1.0;
  std::string detail;
  for (LabelKind label : {LabelKind::qml, LabelKind::cml}) {
    const int counts[] = {8, 15};
    const auto by_features = learning_curve_features(s.split.train, s.split.test, label, Algorithm::random_forest,
                                                     s.config.params, counts, seed);
    std::vector<Instance> before;
    for (const auto& inst : s.data.instances)
      if (inst.time < s.split.test_start) before.push_back(inst);
    const int days[] = {2, 40};
    const auto by_days = learning_curve_training_size(s.split.train.subset(before), s.split.test, label,
                                                      Algorithm::random_forest, s.config.params, days, seed);
    ok = ok && by_features[1].precision >= by_features[0].precision - 0.01 &&
         by_days[1].precision >= by_days[0].precision;
    detail += std::string(to_string(label)) + ": f8 " + num(by_features[0].precision) + " f15 " +
              num(by_features[1].precision) + " d2 " + num(by_days[0].precision) + " d40 " +
              num(by_days[1].precision) + "  ";
  }
  return {ok, detail};
}

Outcome feature_ranking() {
  // Stationary AR(1) load: no calendar structure, so only the measured
  // load can explain the labels.
  TrafficTrace trace;
  trace.start_time = TimePoint{std::chrono::sys_days{std::chrono::year{2024} / 1 / 1}};
  std::mt19937_64 rng(6);
  std::normal_distribution<double> shock(0.0, 0.35e9);
  double rate = 5.0e9;
  for (int i = 0; i < 14 * 288; ++i) {
    rate = 5.0e9 + 0.97 * (rate - 5.0e9) + shock(rng);
    trace.samples.push_back(std::clamp(rate, 0.0, 10.0e9) * 300.0);
  }
  VnfDeployment d;
  FeatureWindowConfig w;
  const auto data = build_dataset(trace, d, w);
  const auto gains = rank_features_info_gain(data, LabelKind::qml, 10);
  double worst_load = 1e300, best_calendar = 0.0;
  for (const auto& g : gains) {
    if (g.feature <= 6) best_calendar = std::max(best_calendar, g.gain_bits);
    if (is_load_feature(g.feature)) worst_load = std::min(worst_load, g.gain_bits);
  }
  const int block[] = {7, 9, 11, 13, 15};
  const auto components = pca(data, block).components;
  const double explained = components.front().explained;
  return {worst_load > best_calendar && explained >= 0.5,
          "min load gain " + num(worst_load) + " > max calendar gain " + num(best_calendar) +
              ", PC1 explains " + num(100 * explained, 2) + "%"};
}

Outcome metric_arithmetic() {
  double worst = 0.0;
  auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };

  // Binary: 96 TP, 4 FP, 180 TN, 8 FN for class 1.
  std::vector<int> actual, predicted;
  auto add = [&](int a, int p, int count) {
    for (int i = 0; i < count; ++i) {
      actual.push_back(a);
      predicted.push_back(p);
    }
  };
  add(1, 1, 96);
  add(2, 1, 4);
  add(2, 2, 180);
  add(1, 2, 8);
  std::vector<double> scores;
  for (int p : predicted) {
    scores.push_back(p == 1);
    scores.push_back(p == 2);
  }
  auto binary = evaluate_predictions(actual, predicted, scores, 1, 2);
  check(binary.per_class[0].precision, 0.96);
  check(binary.per_class[0].fp_rate, 4.0 / 184.0);
  check(binary.per_class[1].precision, 180.0 / 188.0);
  check(binary.per_class[1].fp_rate, 8.0 / 104.0);
  // Indicator scores: the ROC has one interior point (fpr, tpr).
  check(binary.per_class[0].roc_area, 0.5 * (1.0 + 96.0 / 104.0 - 4.0 / 184.0));

  // Three classes, two instances each, hand-enumerated thresholds.
  const std::vector<int> a3 = {1, 1, 2, 2, 3, 3};
  const std::vector<double> s3 = {0.7, 0.2, 0.1, 0.4, 0.4, 0.2, 0.5, 0.3, 0.2,
                                  0.1, 0.8, 0.1, 0.2, 0.2, 0.6, 0.3, 0.5, 0.2};
  const std::vector<int> p3 = {1, 1, 1, 2, 3, 2};
  auto three = evaluate_predictions(a3, p3, s3, 1, 3);
  check(three.per_class[0].roc_area, 0.875);
  check(three.per_class[1].roc_area, 0.75);
  check(three.per_class[2].roc_area, 0.875);
  check(three.aggregate.precision, 13.0 / 18.0);
  check(three.aggregate.fp_rate, 1.0 / 6.0);
  check(three.aggregate.roc_area, 2.5 / 3.0);

  // Perfect predictions over five classes, one of them absent.
  const std::vector<int> a5 = {1, 3, 3, 5, 2, 1};
  std::vector<double> s5;
  for (int a : a5)
    for (int c = 1; c <= 5; ++c) s5.push_back(c == a ? 1.0 : 0.0);
  auto perfect = evaluate_predictions(a5, a5, s5, 1, 5);
  check(perfect.aggregate.precision, 1.0);
  check(perfect.aggregate.fp_rate, 0.0);
  check(perfect.aggregate.roc_area, 1.0);

  char text[32];
  std::snprintf(text, sizeof text, "%.3g", worst);
  return {worst <= 1e-12, std::string("max abs error ") + text};
}

Outcome cost_arithmetic() {
  const LeasingRates rates;
  const auto c = leasing_cost_breakdown(2 * 600.0, 2 * 600.0, 0.0, rates);
  const double degraded = leasing_cost_breakdown(0.0, 0.0, 600.0, rates).degradation;
  const double doubled = leasing_cost_breakdown(0.0, 0.0, 1200.0, rates).degradation;
  const bool ok = std::abs(c.total() - 12.0324) <= 1e-4 && degraded == 1.0 && doubled == 2.0;
  return {ok, "total $" + num(c.total(), 6) + ", 600 degraded s = $" + num(degraded, 12)};
}

Outcome energy_model() {
  ScalingTimeline hour;
  hour.segments.push_back({0.0, 3600.0, 3, 3});
  const ServerPowerParams server;  // 100 W idle, 200 W peak, 10 VNFs per server
  const VirtualizationProfile bare{"bare", 0.0, 0.0, 0.0};
  const double e = energy_joules(hour, bare, server);
  const auto xen = builtin_profile("xen");
  const double ex = energy_joules(hour, xen, server);
  const double want_x = 576000.0 + 3 * xen.per_instance_power_watts * 3600.0;
  const bool ok = std::abs(e - 576000.0) <= 1e-6 * 576000.0 && std::abs(ex - want_x) <= 1e-6 * want_x;
  return {ok, num(e / 1000.0, 6) + " kJ bare, " + num(ex / 1000.0, 6) + " kJ with xen overhead"};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Outcome determinism() {
  const fs::path root = fs::current_path() / "acceptance-determinism";
  fs::remove_all(root);
  std::vector<fs::path> dirs{root / "a", root / "b"};
  for (const auto& dir : dirs) {
    const std::string out = dir.string();
    const char* argv[] = {"vnfscale", "report", "--out-dir", out.c_str(), "--seed", "11"};
    std::ostringstream sink;
    if (run_cli(6, argv, sink, sink) != 0) return {false, "report failed: " + sink.str()};
  }
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
    if (!entry.is_regular_file()) continue;
    const auto relative = fs::relative(entry.path(), dirs[0]);
    if (read_file(entry.path()) != read_file(dirs[1] / relative)) return {false, relative.string() + " differs"};
    ++files;
  }
  std::size_t other = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dirs[1])) other += entry.is_regular_file();
  if (other != files) return {false, "file sets differ"};
  return {files > 10, std::to_string(files) + " files byte-identical across two runs"};
}

Outcome timing() {
  const auto& s = synthetic();
  std::vector<Instance> test_rows(s.data.instances.end() - 288, s.data.instances.end());
  const LabeledDataset test = s.data.subset(test_rows);
  std::vector<Instance> train_rows(s.data.instances.begin(), s.data.instances.begin() + 5760);
  const LabeledDataset training = s.data.subset(train_rows);

  bool ok = true;
  std::string detail;
  double slowest = 0.0;
  for (Algorithm algorithm : {Algorithm::decision_tree, Algorithm::random_tree, Algorithm::random_forest,
                              Algorithm::naive_bayes, Algorithm::moving_average, Algorithm::majority_class}) {
    const auto begin = std::chrono::steady_clock::now();
    const TrainedModel model = train(training, LabelKind::qml, algorithm, s.config.params, 1);
    const double train_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& inst : test.instances) decide(model, inst, s.config.deployment, &s.trace);
    const double test_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, test_s);
    ok = ok && test_s < 1.0;
    if (algorithm == Algorithm::random_forest) {
      ok = ok && train_s < 60.0;
      detail = "forest trains on 5760 in " + num(train_s, 3) + " s";
    }
  }
  return {ok, detail + ", slowest 288-row prediction " + num(slowest, 4) + " s"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "labeling matches brute-force window scan", 10, labeling_oracle},
      {2, "QML replay with zero start-up never degrades", 5, qml_zero_degradation},
      {3, "degraded minutes QML <= CML <= MA, containers <= hypervisors", 120, ordering},
      {4, "forest precision >= 0.90, beats MA by 0.05, within 0.02 of tree", 300, accuracy},
      {5, "learning curves: 15 vs 8 features, 40 vs 2 days", 600, learning_curves},
      {6, "load features outrank calendar features; PCA on load block", 60, feature_ranking},
      {7, "precision, FP rate and ROC on toy tables", 1, metric_arithmetic},
      {8, "leasing cost worked example", 1, cost_arithmetic},
      {9, "energy closed form", 1, energy_model},
      {10, "pipeline reports are byte-identical across runs", 600, determinism},
      {11, "prediction and training time", 120, timing},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto begin = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    if (seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += " (over the " + num(c.budget_seconds, 0) + " s budget)";
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << outcome.detail << " ("
              << num(seconds, 2) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
