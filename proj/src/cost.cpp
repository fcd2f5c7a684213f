#include "vnfscale/cost.hpp"

#include <algorithm>
#include <ostream>

#include "vnfscale/error.hpp"
#include "vnfscale/util.hpp"

namespace vnfscale {

void LeasingRates::validate() const {
  if (!(c_v >= 0.0) || !(c_n >= 0.0) || !(c_q >= 0.0)) throw DomainError("leasing rates must be non-negative");
}

double bandwidth_for(int decision, double q_prime_bps) {
  if (decision < 0) throw DomainError("decision must be non-negative");
  return static_cast<double>(decision) * q_prime_bps;
}

CostBreakdown leasing_cost_breakdown(double vnf_seconds, double gbps_seconds, double degraded_seconds,
                                     const LeasingRates& rates) {
  rates.validate();
  if (!(vnf_seconds >= 0.0) || !(gbps_seconds >= 0.0) || !(degraded_seconds >= 0.0))
    throw DomainError("usage quantities must be non-negative");
  return {rates.c_v * vnf_seconds, rates.c_n * gbps_seconds, rates.c_q * degraded_seconds};
}

double leasing_cost(double vnf_seconds, double gbps_seconds, double degraded_seconds, const LeasingRates& rates) {
  return leasing_cost_breakdown(vnf_seconds, gbps_seconds, degraded_seconds, rates).total();
}

void SdWanScenario::validate() const {
  if (sites.empty()) throw DomainError("SD-WAN scenario needs at least one site");
  for (const auto& s : sites) {
    if (s.services.empty()) throw DomainError("site '" + s.name + "' has no services");
    if (!s.trace) throw DomainError("site '" + s.name + "' has no trace assigned");
  }
  if (test_days < 0) throw DomainError("test_days must be non-negative");
  deployment.validate();
  window.validate();
  rates.validate();
}

SdWanScenario default_sdwan_scenario(std::shared_ptr<const TrafficTrace> trace) {
  SdWanScenario s;
  for (const char* name : {"headquarter", "branch-1", "branch-2", "branch-3"}) s.sites.push_back({name, trace, {"firewall", "router", "pbx"}});
  return s;
}

DecisionPolicy label_policy(LabelKind kind) {
  return [kind](const TrafficTrace&, const LabeledDataset& steps) { return label_decisions(steps, kind); };
}

DecisionPolicy model_policy(std::shared_ptr<const TrainedModel> model) {
  if (!model) throw DomainError("model policy without a model");
  return [model](const TrafficTrace& trace, const LabeledDataset& steps) {
    return model_decisions(*model, steps, trace);
  };
}

namespace {

double union_length(std::vector<DegradedInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const DegradedInterval& a, const DegradedInterval& b) { return a.start < b.start; });
  double length = 0.0, start = 0.0, end = 0.0;
  bool open = false;
  for (const auto& iv : intervals) {
    if (open && iv.start <= end) {
      end = std::max(end, iv.end);
      continue;
    }
    if (open) length += end - start;
    start = iv.start;
    end = iv.end;
    open = true;
  }
  if (open) length += end - start;
  return length;
}

}  // namespace

CostReport run_sdwan(const SdWanScenario& scenario, const std::string& method, const DecisionPolicy& policy,
                     const VirtualizationProfile& profile) {
  scenario.validate();
  if (!policy) throw DomainError("missing decision policy for method '" + method + "'");
  CostReport report;
  report.method = method;
  report.profile = profile.name;
  const double gbps_per_vnf = bandwidth_for(1, scenario.deployment.per_vnf_capacity) / 1e9;

  for (const auto& site : scenario.sites) {
    const TrafficTrace& trace = *site.trace;
    LabeledDataset steps = build_dataset(trace, scenario.deployment, scenario.window);
    if (scenario.test_days > 0) {
      const TimePoint from = trace.end_time() - Seconds{86400} * scenario.test_days;
      std::vector<Instance> kept;
      for (const auto& inst : steps.instances)
        if (inst.time >= from) kept.push_back(inst);
      if (kept.empty()) throw EmptyDatasetError("site '" + site.name + "' has no steps in the test window");
      steps = steps.subset(std::move(kept));
    }

    SiteTotal site_total{site.name, {}};
    std::vector<DegradedInterval> site_degraded;
    for (const auto& service : site.services) {
      const StepDecisions decisions = policy(trace, steps);
      const auto timeline = replay(trace, decisions, scenario.deployment, profile);
      const auto qos = degraded_qos(trace, timeline, scenario.deployment);
      CostRow row{site.name, service, 0.0, 0.0, 0.0, {}};
      for (const auto& seg : timeline.segments) {
        const double dt = seg.end - seg.start;
        row.vnf_seconds += seg.decided * dt;
        row.gbps_seconds += seg.decided * gbps_per_vnf * dt;
      }
      row.degraded_seconds = qos.degraded_minutes_total * 60.0;
      const double charged = scenario.penalty_per_site ? 0.0 : row.degraded_seconds;
      row.cost = leasing_cost_breakdown(row.vnf_seconds, row.gbps_seconds, charged, scenario.rates);
      site_degraded.insert(site_degraded.end(), qos.degraded_intervals.begin(), qos.degraded_intervals.end());
      site_total.cost.vnf += row.cost.vnf;
      site_total.cost.network += row.cost.network;
      site_total.cost.degradation += row.cost.degradation;
      report.rows.push_back(std::move(row));
    }
    if (scenario.penalty_per_site) {
      CostRow penalty{site.name, "site-penalty", 0.0, 0.0, union_length(site_degraded), {}};
      penalty.cost = leasing_cost_breakdown(0.0, 0.0, penalty.degraded_seconds, scenario.rates);
      site_total.cost.degradation += penalty.cost.degradation;
      report.rows.push_back(std::move(penalty));
    }
    report.total.vnf += site_total.cost.vnf;
    report.total.network += site_total.cost.network;
    report.total.degradation += site_total.cost.degradation;
    report.sites.push_back(std::move(site_total));
  }
  return report;
}

void write_cost_csv(std::ostream& out, const std::vector<CostReport>& reports, bool header) {
  if (header) out << "method,site,service,vnf_cost,network_cost,degradation_cost,total\n";
  for (const auto& r : reports)
    for (const auto& row : r.rows)
      out << r.method << ',' << row.site << ',' << row.service << ',' << format_double(row.cost.vnf) << ','
          << format_double(row.cost.network) << ',' << format_double(row.cost.degradation) << ','
          << format_double(row.cost.total()) << '\n';
}

}  // namespace vnfscale
