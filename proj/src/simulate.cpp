#include "vnfscale/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>

#include "vnfscale/analysis.hpp"
#include "vnfscale/error.hpp"
#include "vnfscale/util.hpp"

namespace vnfscale {

void VirtualizationProfile::validate() const {
  if (!(startup_seconds >= 0.0)) throw DomainError("startup_seconds must be non-negative");
  if (!(per_instance_power_watts >= 0.0)) throw DomainError("per_instance_power_watts must be non-negative");
  if (!(teardown_seconds >= 0.0)) throw DomainError("teardown_seconds must be non-negative");
}

std::vector<VirtualizationProfile> builtin_profiles() {
  // Per-instance power is a configurable placeholder, not a measured value.
  return {
      {"xen", 100.0, 12.0, 0.0},
      {"kvm", 100.0, 11.0, 0.0},
      {"docker", 0.4, 6.0, 0.0},
      {"lxc", 0.4, 7.0, 0.0},
  };
}

VirtualizationProfile builtin_profile(const std::string& name) {
  for (const auto& p : builtin_profiles())
    if (p.name == name) return p;
  throw DomainError("unknown virtualization profile '" + name + "' (expected xen, kvm, docker or lxc)");
}

int ScalingTimeline::available_at(double t) const {
  for (const auto& s : segments)
    if (t >= s.start && t < s.end) return s.available;
  return 0;
}

int ScalingTimeline::decided_at(double t) const {
  for (const auto& s : segments)
    if (t >= s.start && t < s.end) return s.decided;
  return 0;
}

ScalingTimeline replay(const TrafficTrace& trace, const StepDecisions& decisions, const VnfDeployment& deployment,
                       const VirtualizationProfile& profile) {
  deployment.validate();
  profile.validate();
  if (decisions.decisions.empty()) throw DimensionError("no decisions to replay");
  const std::size_t stride = decision_stride(trace, deployment);
  const std::size_t last_sample = (decisions.first_step + decisions.decisions.size()) * stride;
  if (last_sample > trace.size())
    throw DimensionError("decision count mismatch: " + std::to_string(decisions.decisions.size()) +
                         " decisions from step " + std::to_string(decisions.first_step) + " need " +
                         std::to_string(last_sample) + " samples, trace has " + std::to_string(trace.size()));
  for (int d : decisions.decisions)
    if (d < deployment.v_min || d > deployment.v_max) throw DomainError("decision outside [v_min, v_max]");

  const double step_seconds = static_cast<double>(deployment.decision_interval.count());
  ScalingTimeline timeline;
  timeline.origin = trace.start_time;

  auto emit = [&](double start, double end, int decided, int available) {
    if (!(end > start)) return;
    auto& segs = timeline.segments;
    if (!segs.empty() && segs.back().end == start && segs.back().decided == decided &&
        segs.back().available == available) {
      segs.back().end = end;
    } else {
      segs.push_back({start, end, decided, available});
    }
  };

  struct Pending {
    double ready_time;
    int count;
  };
  std::deque<Pending> pending;
  int ready = 0;
  for (std::size_t i = 0; i < decisions.decisions.size(); ++i) {
    const int decided = decisions.decisions[i];
    const double t = static_cast<double>(decisions.first_step + i) * step_seconds;
    const double next = t + step_seconds;
    if (i == 0) {
      ready = decided;
    } else {
      int committed = ready;
      for (const auto& p : pending) committed += p.count;
      if (decided > committed) {
        pending.push_back({t + profile.startup_seconds, decided - committed});
      } else if (decided < committed) {
        int excess = committed - decided;
        while (excess > 0 && !pending.empty()) {
          const int cancel = std::min(excess, pending.back().count);
          pending.back().count -= cancel;
          excess -= cancel;
          if (pending.back().count == 0) pending.pop_back();
        }
        if (excess > 0) {
          ready -= excess;
          timeline.teardowns.push_back({t, excess});
        }
      }
    }
    double cursor = t;
    while (!pending.empty() && pending.front().ready_time < next) {
      const double when = std::max(pending.front().ready_time, t);
      emit(cursor, when, decided, ready);
      ready += pending.front().count;
      pending.pop_front();
      cursor = when;
    }
    emit(cursor, next, decided, ready);
  }
  return timeline;
}

QosSummary degraded_qos(const TrafficTrace& trace, const ScalingTimeline& timeline, const VnfDeployment& deployment) {
  QosSummary out;
  const double interval = static_cast<double>(trace.interval.count());
  double degraded_seconds = 0.0, startup_seconds = 0.0, low_seconds = 0.0;
  double over = 0.0, served = 0.0, provisioned = 0.0;
  auto add_interval = [&](double a, double b) {
    if (!out.degraded_intervals.empty() && out.degraded_intervals.back().end == a)
      out.degraded_intervals.back().end = b;
    else
      out.degraded_intervals.push_back({a, b});
  };
  for (const auto& seg : timeline.segments) {
    auto sample = static_cast<std::size_t>(std::floor(seg.start / interval));
    double cursor = seg.start;
    while (cursor < seg.end) {
      if (sample >= trace.size()) throw DimensionError("timeline extends beyond the trace");
      const double sample_end = static_cast<double>(sample + 1) * interval;
      const double piece_end = std::min(seg.end, sample_end);
      const double dt = piece_end - cursor;
      const int required = qos_required(trace.rate_at(sample), deployment);
      if (seg.available < required) {
        degraded_seconds += dt;
        (seg.decided >= required ? startup_seconds : low_seconds) += dt;
        add_interval(cursor, piece_end);
      }
      over += std::max(seg.available - required, 0) * dt;
      served += std::min(seg.available, required) * dt;
      provisioned += seg.available * dt;
      cursor = piece_end;
      if (piece_end == sample_end) ++sample;
    }
  }
  out.degraded_minutes_total = degraded_seconds / 60.0;
  out.degraded_minutes_startup = startup_seconds / 60.0;
  out.degraded_minutes_low_provisioning = low_seconds / 60.0;
  out.overprovisioned_vnf_minutes = over / 60.0;
  out.served_vnf_minutes = served / 60.0;
  out.provisioned_vnf_minutes = provisioned / 60.0;
  return out;
}

double energy_joules(const ScalingTimeline& timeline, const VirtualizationProfile& profile,
                     const ServerPowerParams& server) {
  if (server.vnfs_per_server < 1) throw DomainError("vnfs_per_server must be at least 1");
  const double slots = static_cast<double>(server.vnfs_per_server);
  double joules = 0.0;
  for (const auto& seg : timeline.segments) {
    const int servers = std::max(1, (seg.available + server.vnfs_per_server - 1) / server.vnfs_per_server);
    // Servers are filled in order, so utilizations sum to available / slots.
    const double watts = servers * server.p_idle_watts + server.p_peak_watts * seg.available / slots +
                         profile.per_instance_power_watts * seg.available;
    joules += watts * (seg.end - seg.start);
  }
  for (const auto& t : timeline.teardowns)
    joules += profile.per_instance_power_watts * profile.teardown_seconds * t.count;
  return joules;
}

SimulationReport simulate(const TrafficTrace& trace, const StepDecisions& decisions, const VnfDeployment& deployment,
                          const VirtualizationProfile& profile, const ServerPowerParams& server) {
  const auto timeline = replay(trace, decisions, deployment, profile);
  const auto qos = degraded_qos(trace, timeline, deployment);
  SimulationReport report;
  report.profile = profile.name;
  report.degraded_minutes_total = qos.degraded_minutes_total;
  report.degraded_minutes_low_provisioning = qos.degraded_minutes_low_provisioning;
  report.degraded_minutes_startup = qos.degraded_minutes_startup;
  report.overprovisioned_vnf_minutes = qos.overprovisioned_vnf_minutes;
  report.energy_joules = energy_joules(timeline, profile, server);
  return report;
}

namespace {

void require_consecutive(const LabeledDataset& steps) {
  if (steps.empty()) throw EmptyDatasetError("no decision steps");
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (steps.instances[i].step != steps.instances[i - 1].step + 1)
      throw DomainError("decision steps must be consecutive");
}

}  // namespace

StepDecisions label_decisions(const LabeledDataset& steps, LabelKind kind) {
  require_consecutive(steps);
  StepDecisions out{steps.instances.front().step, {}};
  for (const auto& inst : steps.instances) out.decisions.push_back(inst.label(kind));
  return out;
}

StepDecisions model_decisions(const TrainedModel& model, const LabeledDataset& steps, const TrafficTrace& trace) {
  require_consecutive(steps);
  StepDecisions out{steps.instances.front().step, {}};
  for (const auto& inst : steps.instances) out.decisions.push_back(decide(model, inst, steps.deployment, &trace));
  return out;
}

void write_timeline_csv(std::ostream& out, const ScalingTimeline& timeline) {
  out << "start_s,end_s,decided,available\n";
  for (const auto& s : timeline.segments)
    out << format_double(s.start) << ',' << format_double(s.end) << ',' << s.decided << ',' << s.available << '\n';
}

}  // namespace vnfscale
