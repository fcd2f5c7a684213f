#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "vnfscale/features.hpp"
#include "vnfscale/labeling.hpp"
#include "vnfscale/learners.hpp"
#include "vnfscale/simulate.hpp"

namespace vnfscale {

inline constexpr double kSecondsPerMonth = 30.0 * 86400.0;

// Pay-per-use rates, all per second.
struct LeasingRates {
  double c_v = 0.01;                      // per VNF instance
  double c_n = 70.0 / kSecondsPerMonth;   // per Gbps of leased capacity
  double c_q = 1.0 / 600.0;               // per second of degraded QoS

  void validate() const;
};

// Backbone capacity for `decision` VNFs, in bits per second.
double bandwidth_for(int decision, double q_prime_bps);

struct CostBreakdown {
  double vnf = 0.0;
  double network = 0.0;
  double degradation = 0.0;
  double total() const { return vnf + network + degradation; }
};

CostBreakdown leasing_cost_breakdown(double vnf_seconds, double gbps_seconds, double degraded_seconds,
                                     const LeasingRates& rates);
double leasing_cost(double vnf_seconds, double gbps_seconds, double degraded_seconds, const LeasingRates& rates);

struct SdWanSite {
  std::string name;
  std::shared_ptr<const TrafficTrace> trace;
  std::vector<std::string> services{"firewall", "router", "pbx"};
};

struct SdWanScenario {
  std::vector<SdWanSite> sites;
  VnfDeployment deployment;
  FeatureWindowConfig window;
  LeasingRates rates;
  int test_days = 0;               // 0 = every decision step of each trace
  bool penalty_per_site = false;   // charge degraded time once per site

  void validate() const;
};

// One headquarter and three branches, every site running the same trace.
SdWanScenario default_sdwan_scenario(std::shared_ptr<const TrafficTrace> trace);

// Produces decisions for the consecutive steps of `steps` (built from `trace`).
using DecisionPolicy = std::function<StepDecisions(const TrafficTrace& trace, const LabeledDataset& steps)>;

DecisionPolicy label_policy(LabelKind kind);
DecisionPolicy model_policy(std::shared_ptr<const TrainedModel> model);

struct CostRow {
  std::string site;
  std::string service;
  double vnf_seconds = 0.0;
  double gbps_seconds = 0.0;
  double degraded_seconds = 0.0;
  CostBreakdown cost;
};

struct SiteTotal {
  std::string site;
  CostBreakdown cost;
};

struct CostReport {
  std::string method;
  std::string profile;
  std::vector<CostRow> rows;
  std::vector<SiteTotal> sites;
  CostBreakdown total;
};

CostReport run_sdwan(const SdWanScenario& scenario, const std::string& method, const DecisionPolicy& policy,
                     const VirtualizationProfile& profile);

// Columns: method,site,service,vnf_cost,network_cost,degradation_cost,total
void write_cost_csv(std::ostream& out, const std::vector<CostReport>& reports, bool header = true);

}  // namespace vnfscale
