#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vnfscale/labeling.hpp"
#include "vnfscale/learners.hpp"
#include "vnfscale/trace.hpp"

namespace vnfscale {

struct VirtualizationProfile {
  std::string name = "custom";
  double startup_seconds = 0.0;
  double per_instance_power_watts = 0.0;
  double teardown_seconds = 0.0;

  void validate() const;
};

// Built-in profiles: xen, kvm (100 s start-up), docker, lxc (0.4 s).
// Throws DomainError for an unknown name.
VirtualizationProfile builtin_profile(const std::string& name);
std::vector<VirtualizationProfile> builtin_profiles();

struct ServerPowerParams {
  double p_idle_watts = 100.0;
  double p_peak_watts = 200.0;
  int vnfs_per_server = 10;
};

// Consecutive scaling decisions; decisions[i] applies to step first_step + i.
struct StepDecisions {
  std::size_t first_step = 0;
  std::vector<int> decisions;
};

// Piece of the timeline with constant decided/available counts. Times are
// seconds from the trace start.
struct TimelineSegment {
  double start = 0.0;
  double end = 0.0;
  int decided = 0;
  int available = 0;
};

struct TeardownEvent {
  double time = 0.0;
  int count = 0;
};

struct ScalingTimeline {
  TimePoint origin{};
  std::vector<TimelineSegment> segments;
  std::vector<TeardownEvent> teardowns;

  double start() const { return segments.empty() ? 0.0 : segments.front().start; }
  double end() const { return segments.empty() ? 0.0 : segments.back().end; }
  int available_at(double t) const;
  int decided_at(double t) const;
};

// Scale-up at tau(n) brings new instances online at tau(n) + startup_seconds
// (a pending start-up may run past the next step); scale-down cancels
// pending instances first and then removes running ones immediately. The
// first decision is taken as already provisioned.
ScalingTimeline replay(const TrafficTrace& trace, const StepDecisions& decisions, const VnfDeployment& deployment,
                       const VirtualizationProfile& profile);

struct DegradedInterval {
  double start = 0.0;
  double end = 0.0;
};

struct QosSummary {
  double degraded_minutes_total = 0.0;
  double degraded_minutes_low_provisioning = 0.0;
  double degraded_minutes_startup = 0.0;
  double overprovisioned_vnf_minutes = 0.0;
  double served_vnf_minutes = 0.0;       // integral of min(available, required)
  double provisioned_vnf_minutes = 0.0;  // integral of available
  std::vector<DegradedInterval> degraded_intervals;
};

// Required VNFs are piecewise constant over each trace sample.
QosSummary degraded_qos(const TrafficTrace& trace, const ScalingTimeline& timeline, const VnfDeployment& deployment);

// Integral of the server power model: active servers = max(1, ceil(available
// / vnfs_per_server)), each drawing p_idle + p_peak * u, plus per-instance
// overhead, plus teardown overhead. Throws DomainError if vnfs_per_server < 1.
double energy_joules(const ScalingTimeline& timeline, const VirtualizationProfile& profile,
                     const ServerPowerParams& server);

struct SimulationReport {
  std::string profile;
  double degraded_minutes_total = 0.0;
  double degraded_minutes_low_provisioning = 0.0;
  double degraded_minutes_startup = 0.0;
  double energy_joules = 0.0;
  double overprovisioned_vnf_minutes = 0.0;
};

SimulationReport simulate(const TrafficTrace& trace, const StepDecisions& decisions, const VnfDeployment& deployment,
                          const VirtualizationProfile& profile, const ServerPowerParams& server);

// Decisions from ground-truth labels of a run of consecutive instances.
StepDecisions label_decisions(const LabeledDataset& steps, LabelKind kind);
// Decisions from a model (moving-average models read `trace`).
StepDecisions model_decisions(const TrainedModel& model, const LabeledDataset& steps, const TrafficTrace& trace);

void write_timeline_csv(std::ostream& out, const ScalingTimeline& timeline);

}  // namespace vnfscale
