#include "vnfscale/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vnfscale/analysis.hpp"
#include "vnfscale/config.hpp"
#include "vnfscale/cost.hpp"
#include "vnfscale/error.hpp"
#include "vnfscale/reports.hpp"
#include "vnfscale/simulate.hpp"
#include "vnfscale/util.hpp"

namespace vnfscale {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::string trace_path;
  std::optional<int> features;
  std::optional<int> train_days;
  std::optional<int> test_days;
  std::optional<int> threads;

  std::optional<std::string> algo;
  std::optional<std::string> label;
  std::optional<int> trees;
  std::optional<int> ma_window;

  std::vector<std::string> models;
  std::vector<std::string> oracles;
  std::vector<std::string> profiles;
  bool timeline = false;
  bool timing = false;
  int repetitions = 3;
  std::string axis = "both";
  std::optional<bool> penalty_per_site;

  // generate
  std::string output;
  std::optional<int> days;
  std::optional<std::string> start;
  std::optional<double> base_gbps;
  std::optional<double> amplitude_gbps;
  std::optional<double> noise_gbps;
  std::optional<double> burst_rate;
  std::optional<double> burst_gbps;
  std::optional<double> weekday_factor;
  std::optional<double> drift;
};

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

// Left-aligned first column, right-aligned numbers.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()), 0);
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        const std::string pad(width[i] - row[i].size(), ' ');
        if (i == 0)
          line += row[i] + pad;
        else
          line += "  " + pad + row[i];
      }
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string evaluation_method(const TrainedModel& model, LabelKind label) {
  return std::string(to_string(model.algorithm)) + "-" + to_string(label);
}

// Moving-average decisions do not depend on the label the model was built for.
std::string decision_method(const TrainedModel& model) {
  if (model.algorithm == Algorithm::moving_average) return "moving-average";
  return evaluation_method(model, model.label_kind);
}

RunConfig resolve_config(const Flags& f) {
  RunConfig c = default_run_config();
  if (!f.config_path.empty()) c = load_run_config(f.config_path, c);
  if (f.seed) c.seed = *f.seed;
  if (f.features) c.window.n_features = *f.features;
  if (f.train_days) c.train_days = *f.train_days;
  if (f.test_days) c.test_days = *f.test_days;
  if (f.threads) c.params.forest.threads = *f.threads;
  if (f.algo) c.algorithm = parse_algorithm(*f.algo);
  if (f.label) c.label = parse_label_kind(*f.label);
  if (f.trees) c.params.forest.n_trees = *f.trees;
  if (f.ma_window) c.params.moving_average.window = *f.ma_window;
  if (f.penalty_per_site) c.penalty_per_site = *f.penalty_per_site;
  if (f.days) c.synthetic.days = *f.days;
  if (f.start) c.synthetic.start = *f.start;
  if (f.base_gbps) c.synthetic.base_gbps = *f.base_gbps;
  if (f.amplitude_gbps) c.synthetic.daily_amplitude_gbps = *f.amplitude_gbps;
  if (f.noise_gbps) c.synthetic.noise_gbps = *f.noise_gbps;
  if (f.burst_rate) c.synthetic.burst_rate_per_day = *f.burst_rate;
  if (f.burst_gbps) c.synthetic.burst_amplitude_gbps = *f.burst_gbps;
  if (f.weekday_factor) c.synthetic.weekday_factor = *f.weekday_factor;
  if (f.drift) c.synthetic.monthly_drift = *f.drift;
  if (!f.profiles.empty()) c.simulate_profiles = f.profiles;
  c.curve_feature_counts.erase(std::remove_if(c.curve_feature_counts.begin(), c.curve_feature_counts.end(),
                                              [&](int n) { return n > c.window.n_features; }),
                               c.curve_feature_counts.end());
  c.validate();
  return c;
}

// Shared state of one command: the resolved config, the trace and the
// datasets built from it, and the output directory.
class Session {
 public:
  Session(RunConfig config, const Flags& flags, std::ostream& out)
      : config_(std::move(config)), flags_(flags), out_(out) {}

  const RunConfig& config() const { return config_; }
  std::ostream& out() { return out_; }

  const TrafficTrace& trace() {
    if (!trace_) {
      if (flags_.trace_path.empty()) {
        trace_ = std::make_shared<TrafficTrace>(generate_trace(config_.trace_spec()));
      } else {
        if (!fs::exists(flags_.trace_path)) throw Error("trace file " + flags_.trace_path + " not found");
        trace_ = std::make_shared<TrafficTrace>(
            load_trace(flags_.trace_path, Seconds{config_.synthetic.interval_seconds}));
      }
    }
    return *trace_;
  }

  std::shared_ptr<const TrafficTrace> shared_trace() {
    trace();
    return trace_;
  }

  FeatureWindowConfig window(int n_features) const {
    FeatureWindowConfig w = config_.window;
    w.n_features = n_features;
    w.validate();
    return w;
  }

  const LabeledDataset& dataset(int n_features) {
    auto it = datasets_.find(n_features);
    if (it == datasets_.end())
      it = datasets_.emplace(n_features, build_dataset(trace(), config_.deployment, window(n_features))).first;
    return it->second;
  }

  DatasetSplit split(int n_features) {
    return split_by_days(dataset(n_features), trace(), config_.train_days, config_.test_days);
  }

  // Test instances only, so commands that never train do not need the
  // configured number of training days.
  LabeledDataset test_set(int n_features) { return split_by_days(dataset(n_features), trace(), 1, config_.test_days).test; }

  TrainedModel load(const std::string& path) {
    if (!fs::exists(path)) throw Error("model file " + path + " not found (run `vnfscale train` first)");
    TrainedModel model = load_model_file(path);
    const auto& d = config_.deployment;
    if (model.v_min != d.v_min || model.v_max != d.v_max)
      throw Error("model " + path + " predicts classes [" + std::to_string(model.v_min) + ", " +
                  std::to_string(model.v_max) + "] but the deployment uses [" + std::to_string(d.v_min) + ", " +
                  std::to_string(d.v_max) + "]");
    return model;
  }

  std::vector<std::string> model_paths() const {
    if (!flags_.models.empty()) return flags_.models;
    return {(fs::path(flags_.out_dir) / "model.bin").string()};
  }

  fs::path path(const std::string& name) const { return fs::path(flags_.out_dir) / name; }

  void write(const std::string& name, const std::string& content) { write_file(path(name), content); }

  static void write_file(const fs::path& target, const std::string& content) {
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ofstream file(target, std::ios::binary);
    if (!file) throw Error("cannot write " + target.string());
    file << content;
    file.close();
    if (!file) throw Error("failed writing " + target.string());
  }

 private:
  RunConfig config_;
  const Flags& flags_;
  std::ostream& out_;
  std::shared_ptr<TrafficTrace> trace_;
  std::map<int, LabeledDataset> datasets_;
};

std::string trace_csv(const RunConfig& config, const TrafficTrace& trace) {
  std::ostringstream text;
  text << csv_preamble(config);
  write_trace(text, trace);
  return text.str();
}

void print_trace_summary(std::ostream& out, const TrafficTrace& trace) {
  const auto [lo, hi] = std::minmax_element(trace.samples.begin(), trace.samples.end());
  const double per_gbps = 1.0e9 * static_cast<double>(trace.interval.count());
  out << "samples: " << trace.size() << " (" << fixed(trace.size() * trace.interval.count() / 86400.0, 2)
      << " days from " << format_iso8601(trace.start_time) << ")\n"
      << "load: min " << fixed(*lo / per_gbps, 3) << " Gbps, max " << fixed(*hi / per_gbps, 3) << " Gbps\n";
}

void print_evaluations(std::ostream& out, const std::vector<MethodEvaluation>& evaluations) {
  Table table({"method", "instances", "precision %", "fp rate %", "roc area %"});
  for (const auto& e : evaluations) {
    const auto& a = e.report.aggregate;
    table.add({e.method, std::to_string(e.report.total), fixed(100 * a.precision, 2), fixed(100 * a.fp_rate, 2),
               fixed(100 * a.roc_area, 2)});
  }
  table.print(out);
}

void print_simulations(std::ostream& out, const std::vector<MethodSimulation>& runs,
                       const std::vector<std::string>& profiles) {
  std::vector<std::string> methods;
  for (const auto& r : runs)
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  auto find = [&](const std::string& method, const std::string& profile) -> const SimulationReport& {
    for (const auto& r : runs)
      if (r.method == method && r.report.profile == profile) return r.report;
    throw Error("missing simulation for " + method + "/" + profile);
  };
  std::vector<std::string> header{"degraded minutes"};
  header.insert(header.end(), profiles.begin(), profiles.end());
  Table degraded(header);
  header[0] = "energy kWh";
  Table energy(header);
  for (const auto& m : methods) {
    std::vector<std::string> d{m}, e{m};
    for (const auto& p : profiles) {
      d.push_back(fixed(find(m, p).degraded_minutes_total, 2));
      e.push_back(fixed(find(m, p).energy_joules / 3.6e6, 3));
    }
    degraded.add(d);
    energy.add(e);
  }
  degraded.print(out);
  out << '\n';
  energy.print(out);
}

void print_costs(std::ostream& out, const std::vector<CostReport>& reports) {
  Table table({"method", "vnf $", "network $", "degradation $", "total $"});
  for (const auto& r : reports)
    table.add({r.method, fixed(r.total.vnf, 2), fixed(r.total.network, 2), fixed(r.total.degradation, 2),
               fixed(r.total.total(), 2)});
  table.print(out);
}

void print_curves(std::ostream& out, const std::vector<Curve>& curves) {
  for (const auto& c : curves) {
    Table table({c.axis == "features" ? "features" : "train days", "instances", "precision %", "fp rate %",
                 "roc area %"});
    for (const auto& p : c.points)
      table.add({std::to_string(p.x), std::to_string(p.train_size), fixed(100 * p.precision, 2),
                 fixed(100 * p.fp_rate, 2), fixed(100 * p.roc_area, 2)});
    out << c.method << '\n';
    table.print(out);
    out << '\n';
  }
}

struct DecisionSource {
  std::string method;
  std::shared_ptr<const TrainedModel> model;  // null for label oracles
  LabelKind oracle = LabelKind::qml;
  int n_features = 0;
};

std::vector<DecisionSource> decision_sources(Session& s, const Flags& f) {
  std::vector<DecisionSource> sources;
  for (const auto& name : f.oracles) {
    const LabelKind kind = parse_label_kind(name);
    sources.push_back({std::string(to_string(kind)) + "-labels", nullptr, kind, s.config().window.n_features});
  }
  if (f.oracles.empty() || !f.models.empty()) {
    for (const auto& path : s.model_paths()) {
      auto model = std::make_shared<const TrainedModel>(s.load(path));
      sources.push_back({decision_method(*model), model, model->label_kind, model->feature_count});
    }
  }
  return sources;
}

StepDecisions decisions_for(Session& s, const DecisionSource& source) {
  const LabeledDataset test = s.test_set(source.n_features);
  if (source.model) return model_decisions(*source.model, test, s.trace());
  return label_decisions(test, source.oracle);
}

std::vector<MethodSimulation> run_simulations(Session& s, const std::vector<DecisionSource>& sources,
                                              bool timeline) {
  const auto& c = s.config();
  std::vector<MethodSimulation> runs;
  for (const auto& source : sources) {
    const StepDecisions decisions = decisions_for(s, source);
    for (const auto& name : c.simulate_profiles) {
      const auto& profile = c.profile(name);
      runs.push_back({source.method, simulate(s.trace(), decisions, c.deployment, profile, c.server)});
      if (timeline) {
        std::ostringstream csv;
        csv << csv_preamble(c);
        write_timeline_csv(csv, replay(s.trace(), decisions, c.deployment, profile));
        s.write("timeline-" + source.method + "-" + name + ".csv", csv.str());
      }
    }
  }
  return runs;
}

std::vector<CostReport> run_costs(Session& s, const std::vector<DecisionSource>& sources, const std::string& profile) {
  const auto& c = s.config();
  std::vector<CostReport> reports;
  for (const auto& source : sources) {
    SdWanScenario scenario;
    for (const auto& site : c.sites) scenario.sites.push_back({site, s.shared_trace(), c.services});
    scenario.deployment = c.deployment;
    scenario.window = s.window(source.n_features);
    scenario.rates = c.rates.rates();
    scenario.test_days = c.test_days;
    scenario.penalty_per_site = c.penalty_per_site;
    const DecisionPolicy policy = source.model ? model_policy(source.model) : label_policy(source.oracle);
    reports.push_back(run_sdwan(scenario, source.method, policy, c.profile(profile)));
  }
  return reports;
}

std::vector<Curve> run_curves(Session& s, const std::string& axis) {
  const auto& c = s.config();
  if (axis != "features" && axis != "days" && axis != "both")
    throw Error("--axis must be features, days or both");
  const std::string method = std::string(to_string(c.algorithm)) + "-" + to_string(c.label);
  const auto seed = c.stream_seed(SeedStream::curves);
  std::vector<Curve> curves;
  const DatasetSplit split = s.split(c.window.n_features);
  if (axis != "days")
    curves.push_back({method, "features",
                      learning_curve_features(split.train, split.test, c.label, c.algorithm, c.params,
                                              c.curve_feature_counts, seed)});
  if (axis != "features") {
    std::vector<Instance> before;
    for (const auto& inst : s.dataset(c.window.n_features).instances)
      if (inst.time < split.test_start) before.push_back(inst);
    const LabeledDataset full_train = split.train.subset(std::move(before));
    curves.push_back({method, "days",
                      learning_curve_training_size(full_train, split.test, c.label, c.algorithm, c.params,
                                                   c.curve_day_counts, seed)});
  }
  return curves;
}

FeatureRanking run_ranking(Session& s) {
  const auto& c = s.config();
  const DatasetSplit split = s.split(c.window.n_features);
  FeatureRanking ranking;
  ranking.by_info_gain = rank_features_info_gain(split.train, c.label, c.info_gain_bins);
  ranking.pca = pca(split.train);
  return ranking;
}

void write_ranking(Session& s, const FeatureRanking& ranking) {
  const auto& c = s.config();
  s.write("ranking.json", ranking_json(c, c.label, ranking));
  s.write("ranking.csv", ranking_csv(c, ranking));
  s.write("pca.csv", pca_csv(c, ranking.pca));
}

void print_ranking(std::ostream& out, const FeatureRanking& ranking) {
  Table table({"rank", "feature", "gain bits"});
  int rank = 1;
  for (const auto& g : ranking.by_info_gain)
    table.add({std::to_string(rank++), std::to_string(g.feature), fixed(g.gain_bits, 4)});
  table.print(out);
  if (!ranking.pca.components.empty())
    out << "\nfirst principal component explains " << fixed(100 * ranking.pca.components.front().explained, 2)
        << "% of variance over " << ranking.pca.features.size() << " features\n";
}

// ---- commands -------------------------------------------------------------

int cmd_generate(const Flags& f, std::ostream& out) {
  const RunConfig c = resolve_config(f);
  const TrafficTrace trace = generate_trace(c.trace_spec());
  Session::write_file(f.output, trace_csv(c, trace));
  print_trace_summary(out, trace);
  out << "wrote " << f.output << '\n';
  return 0;
}

int cmd_dataset(Session& s) {
  const auto& c = s.config();
  const LabeledDataset& data = s.dataset(c.window.n_features);
  std::ostringstream csv;
  csv << csv_preamble(c);
  write_dataset_csv(csv, data);
  s.write("dataset.csv", csv.str());
  s.write("dataset.json", dataset_json(c, data, s.trace()));
  s.out() << data.size() << " instances with " << data.feature_count << " features -> " << s.path("dataset.csv").string()
          << '\n';
  return 0;
}

std::string save_with_sidecar(Session& s, const TrainedModel& model, const std::string& bin_name) {
  const std::string bytes = save_model(model);
  s.write(bin_name, bytes);
  std::string json_name = bin_name.substr(0, bin_name.size() - 4) + ".json";
  s.write(json_name, model_json(s.config(), model, fs::path(bin_name).filename().string(), fnv1a64(bytes)));
  return bytes;
}

int cmd_train(Session& s) {
  const auto& c = s.config();
  const DatasetSplit split = s.split(c.window.n_features);
  const TrainedModel model = train(split.train, c.label, c.algorithm, c.params, c.stream_seed(SeedStream::training));
  save_with_sidecar(s, model, "model.bin");
  s.out() << "trained " << to_string(c.algorithm) << " on " << to_string(c.label) << " labels: " << model.instance_count
          << " instances, " << model.feature_count << " features, " << fixed(model.training_seconds, 3) << " s -> "
          << s.path("model.bin").string() << '\n';
  return 0;
}

int cmd_evaluate(Session& s, const Flags& f) {
  const auto& c = s.config();
  std::vector<MethodEvaluation> evaluations;
  std::vector<std::string> methods;
  std::vector<TimingResult> timings;
  for (const auto& path : s.model_paths()) {
    const TrainedModel model = s.load(path);
    const LabelKind label = f.label ? c.label : model.label_kind;
    const LabeledDataset test = s.test_set(model.feature_count);
    evaluations.push_back({evaluation_method(model, label), model.algorithm, label, evaluate(model, test, label, &s.trace())});
    if (f.timing) {
      const DatasetSplit split = s.split(model.feature_count);
      methods.push_back(evaluations.back().method);
      timings.push_back(time_train_test(split.train, split.test, label, model.algorithm, model.params, f.repetitions,
                                        model.seed, &s.trace()));
    }
  }
  s.write("evaluation.json", evaluation_json(c, evaluations));
  s.write("evaluation.csv", evaluation_csv(c, evaluations));
  print_evaluations(s.out(), evaluations);
  if (f.timing) {
    s.write("timing.json", timing_json(c, methods, timings));
    Table table({"method", "train s", "test s"});
    for (std::size_t i = 0; i < methods.size(); ++i)
      table.add({methods[i], fixed(timings[i].train_seconds, 3), fixed(timings[i].test_seconds, 3)});
    s.out() << '\n';
    table.print(s.out());
  }
  return 0;
}

int cmd_rank(Session& s) {
  const FeatureRanking ranking = run_ranking(s);
  write_ranking(s, ranking);
  print_ranking(s.out(), ranking);
  return 0;
}

int cmd_curve(Session& s, const Flags& f) {
  const auto curves = run_curves(s, f.axis);
  s.write("curves.json", curve_json(s.config(), curves));
  s.write("curves.csv", curve_csv(s.config(), curves));
  print_curves(s.out(), curves);
  return 0;
}

int cmd_simulate(Session& s, const Flags& f) {
  const auto runs = run_simulations(s, decision_sources(s, f), f.timeline);
  s.write("simulation.json", simulation_json(s.config(), runs));
  s.write("simulation.csv", simulation_csv(s.config(), runs));
  print_simulations(s.out(), runs, s.config().simulate_profiles);
  return 0;
}

int cmd_cost(Session& s, const Flags& f) {
  const std::string profile = s.config().simulate_profiles.front();
  const auto reports = run_costs(s, decision_sources(s, f), profile);
  s.write("cost.json", cost_json(s.config(), reports));
  s.write("cost.csv", cost_csv(s.config(), reports));
  s.out() << "leasing cost over " << s.config().sites.size() << " sites (" << profile << ")\n";
  print_costs(s.out(), reports);
  return 0;
}

int cmd_report(Session& s, const Flags& f) {
  const auto& c = s.config();
  std::ostream& out = s.out();
  s.write("trace.csv", trace_csv(c, s.trace()));
  cmd_dataset(s);

  const DatasetSplit split = s.split(c.window.n_features);
  const auto seed = c.stream_seed(SeedStream::training);
  std::vector<MethodEvaluation> evaluations;
  std::vector<std::string> methods;
  std::vector<TimingResult> timings;
  std::map<std::string, std::shared_ptr<const TrainedModel>> models;
  for (Algorithm algorithm : c.compare) {
    for (LabelKind label : {LabelKind::qml, LabelKind::cml}) {
      auto model = std::make_shared<const TrainedModel>(train(split.train, label, algorithm, c.params, seed));
      const std::string method = evaluation_method(*model, label);
      save_with_sidecar(s, *model, "models/" + method + ".bin");
      evaluations.push_back({method, algorithm, label, evaluate(*model, split.test, label, &s.trace())});
      models[method] = model;
      if (f.timing) {
        methods.push_back(method);
        timings.push_back(
            time_train_test(split.train, split.test, label, algorithm, c.params, f.repetitions, seed, &s.trace()));
      }
    }
  }
  s.write("evaluation.json", evaluation_json(c, evaluations));
  s.write("evaluation.csv", evaluation_csv(c, evaluations));
  if (f.timing) s.write("timing.json", timing_json(c, methods, timings));
  out << '\n';
  print_evaluations(out, evaluations);

  const FeatureRanking ranking = run_ranking(s);
  write_ranking(s, ranking);

  const auto curves = run_curves(s, "both");
  s.write("curves.json", curve_json(c, curves));
  s.write("curves.csv", curve_csv(c, curves));

  // Scaling comparison: the configured algorithm under both labelings
  // against the moving-average baseline.
  std::vector<DecisionSource> sources;
  for (LabelKind label : {LabelKind::qml, LabelKind::cml}) {
    const auto& model = models.at(std::string(to_string(c.algorithm)) + "-" + to_string(label));
    sources.push_back({decision_method(*model), model, label, model->feature_count});
  }
  const std::string ma = std::string(to_string(Algorithm::moving_average)) + "-qml";
  if (c.algorithm != Algorithm::moving_average && models.count(ma))
    sources.push_back({"moving-average", models.at(ma), LabelKind::qml, models.at(ma)->feature_count});

  const auto runs = run_simulations(s, sources, f.timeline);
  s.write("simulation.json", simulation_json(c, runs));
  s.write("simulation.csv", simulation_csv(c, runs));
  out << '\n';
  print_simulations(out, runs, c.simulate_profiles);

  const auto reports = run_costs(s, sources, c.simulate_profiles.front());
  s.write("cost.json", cost_json(c, reports));
  s.write("cost.csv", cost_csv(c, reports));
  out << "\nleasing cost over " << c.sites.size() << " sites (" << c.simulate_profiles.front() << ")\n";
  print_costs(out, reports);
  s.write("config.json", to_json(c));
  out << "\nreports written to " << s.path("").string() << '\n';
  return 0;
}

// ---- option wiring --------------------------------------------------------

void add_config_options(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "root seed; every random stage derives its own stream");
}

void add_common(CLI::App* app, Flags& f) {
  add_config_options(app, f);
  app->add_option("--out-dir", f.out_dir, "directory for output files")->capture_default_str();
  app->add_option("--trace", f.trace_path, "trace CSV (default: synthetic trace from the configuration)");
  app->add_option("--features", f.features, "number of features per instance (1-27)");
  app->add_option("--train-days", f.train_days, "training days before the test window (default 40)");
  app->add_option("--test-days", f.test_days, "days at the end of the trace used for testing (default 2)");
}

void add_model_options(CLI::App* app, Flags& f) {
  app->add_option("--algo", f.algo,
                  "decision-tree, random-tree, random-forest, naive-bayes, moving-average or majority-class");
  app->add_option("--label", f.label, "label method: qml or cml");
  app->add_option("--trees", f.trees, "trees in the random forest");
  app->add_option("--ma-window", f.ma_window, "moving-average window in samples");
  app->add_option("--threads", f.threads, "training threads (0 = all cores); never changes results");
}

void add_decision_options(CLI::App* app, Flags& f) {
  app->add_option("--model", f.models, "model file (repeatable; default <out-dir>/model.bin)");
  app->add_option("--oracle", f.oracles, "replay ground-truth labels instead: qml or cml (repeatable)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proactive VNF auto-scaling: traces, classifiers, QoS, energy and leasing cost."};
  app.name("vnfscale");
  app.require_subcommand(1);
  std::map<std::string, Flags> flags;

  auto* generate = app.add_subcommand("generate", "write a seeded synthetic traffic trace");
  {
    Flags& f = flags["generate"];
    add_config_options(generate, f);
    generate->add_option("-o,--output", f.output, "trace CSV to write")->required();
    generate->add_option("--days", f.days, "trace length in days");
    generate->add_option("--start", f.start, "first timestamp, e.g. 2024-01-01T00:00:00Z");
    generate->add_option("--base-gbps", f.base_gbps, "mean weekday load");
    generate->add_option("--amplitude-gbps", f.amplitude_gbps, "daily swing around the mean");
    generate->add_option("--noise-gbps", f.noise_gbps, "Gaussian noise standard deviation");
    generate->add_option("--burst-rate", f.burst_rate, "expected bursts per day");
    generate->add_option("--burst-gbps", f.burst_gbps, "burst height");
    generate->add_option("--weekday-factor", f.weekday_factor, "weekday level over weekend level");
    generate->add_option("--drift", f.drift, "relative level change per 30 days");
  }

  auto* dataset = app.add_subcommand("dataset", "build the labeled dataset (dataset.csv, dataset.json)");
  add_common(dataset, flags["dataset"]);

  auto* train_cmd = app.add_subcommand("train", "train a model on the training window (model.bin, model.json)");
  add_common(train_cmd, flags["train"]);
  add_model_options(train_cmd, flags["train"]);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate models on the test window (evaluation.json/.csv)");
  {
    Flags& f = flags["evaluate"];
    add_common(evaluate_cmd, f);
    evaluate_cmd->add_option("--model", f.models, "model file (repeatable; default <out-dir>/model.bin)");
    evaluate_cmd->add_option("--label", f.label, "evaluate against qml or cml labels (default: the model's)");
    evaluate_cmd->add_flag("--timing", f.timing, "also time training and testing (timing.json)");
    evaluate_cmd->add_option("--repetitions", f.repetitions, "timing repetitions")->capture_default_str();
  }

  auto* rank = app.add_subcommand("rank", "rank features by information gain and PCA (ranking.json/.csv, pca.csv)");
  add_common(rank, flags["rank"]);
  rank->add_option("--label", flags["rank"].label, "label method: qml or cml");

  auto* curve = app.add_subcommand("curve", "learning curves over features and training days (curves.json/.csv)");
  add_common(curve, flags["curve"]);
  add_model_options(curve, flags["curve"]);
  curve->add_option("--axis", flags["curve"].axis, "features, days or both")->capture_default_str();

  auto* simulate_cmd = app.add_subcommand("simulate", "replay decisions per virtualization profile (simulation.json/.csv)");
  {
    Flags& f = flags["simulate"];
    add_common(simulate_cmd, f);
    add_decision_options(simulate_cmd, f);
    simulate_cmd->add_option("--profile", f.profiles, "profile to simulate (repeatable; default all configured)");
    simulate_cmd->add_flag("--timeline", f.timeline, "also write timeline-<method>-<profile>.csv");
  }

  auto* cost = app.add_subcommand("cost", "SD-WAN leasing cost (cost.json/.csv)");
  {
    Flags& f = flags["cost"];
    add_common(cost, f);
    add_decision_options(cost, f);
    cost->add_option("--profile", f.profiles, "virtualization profile (default: first configured)")->expected(1);
    cost->add_flag("--penalty-per-site,!--penalty-per-deployment", f.penalty_per_site,
                   "charge degraded time once per site instead of per VNF deployment");
  }

  auto* report = app.add_subcommand("report", "run the whole pipeline and write every report");
  {
    Flags& f = flags["report"];
    add_common(report, f);
    add_model_options(report, f);
    report->add_flag("--timing", f.timing, "also time training and testing (timing.json)");
    report->add_option("--repetitions", f.repetitions, "timing repetitions")->capture_default_str();
    report->add_flag("--timeline", f.timeline, "also write per-profile timelines");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const Flags& f = flags.at(name);
  try {
    if (name == "generate") return cmd_generate(f, out);
    Session session(resolve_config(f), f, out);
    if (name == "dataset") return cmd_dataset(session);
    if (name == "train") return cmd_train(session);
    if (name == "evaluate") return cmd_evaluate(session, f);
    if (name == "rank") return cmd_rank(session);
    if (name == "curve") return cmd_curve(session, f);
    if (name == "simulate") return cmd_simulate(session, f);
    if (name == "cost") return cmd_cost(session, f);
    if (name == "report") return cmd_report(session, f);
  } catch (const std::exception& e) {
    err << "vnfscale " << name << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace vnfscale
