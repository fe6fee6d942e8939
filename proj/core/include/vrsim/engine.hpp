#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>

#include "vrsim/channel.hpp"
#include "vrsim/edge_compute.hpp"
#include "vrsim/matching.hpp"
#include "vrsim/metrics.hpp"
#include "vrsim/scenario.hpp"
#include "vrsim/workload.hpp"

namespace vrsim {

struct RunConfig {
  Scheme scheme = Scheme::kProposed;
  double d_th_s = 0.1;
  double epsilon = 0.1;
  double slot_s = 1e-3;
  double epoch_s = 0.1;  // matching / alignment / frame-cadence interval
  long total_slots = 10000;
  std::uint64_t seed = 0;

  ScenarioParams scenario;
  ChannelParams channel;
  WorkloadParams workload;
  FogConfig fog;
  MatchingParams matching;

  long epoch_slots() const { return std::lround(epoch_s / slot_s); }
  long deadline_slots() const { return std::lround(d_th_s / slot_s); }
  bool proactive() const { return scheme != Scheme::kBaseline1; }
  bool multi_connectivity() const { return scheme == Scheme::kProposed; }
  void validate() const;
};

/// Minimum slot count whose cumulative per-slot payload covers the frame,
/// remainders carried across slots. Returns nullopt when the rate sequence
/// runs out first (deadline exceeded).
std::optional<long> comm_delay_slots(double hd_bits, std::span<const double> rates_bps,
                                     double slot_duration_s);

/// URLLC admission: the association slack of (ap, player) is non-negative.
bool admit(double utility_value);

class Simulation {
 public:
  explicit Simulation(RunConfig config);
  ~Simulation();

  void step();           // one slot
  MetricsReport run();   // all remaining slots, then aggregate

  long slot() const;
  const ArcadeScenario& scenario() const;
  const ComputeFabric& fabric() const;
  std::span<const FrameJob> jobs() const;
  const std::vector<ScheduleDecision>& decision_log() const;
  const std::vector<DeliveryRecord>& delivery_log() const;

  /// Line-delimited exports for regression tests and debugging.
  void set_impulse_trace(std::ostream* out);
  void set_decision_log_stream(std::ostream* out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MetricsReport run(const RunConfig& config);

}  // namespace vrsim
