#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vrsim/workload.hpp"

namespace vrsim {

struct FogConfig {
  int n_servers = 16;             // E
  double cycles_per_s = 1.0;      // c_e
  double cycles_per_bit = 5e-11;  // kappa; only kappa / c_e matters
  int cache_capacity = 320;       // S, in frames
  double window_s = 0.1;          // T_w
  double edge_processing_s = 1e-3;  // tau_EP
  void validate() const;
};

/// kappa * L / c_e.
double compute_time(double hd_bits, double cycles_per_s, double cycles_per_bit);

/// Expected queue wait: sum of L_i / r_i over jobs ahead in the service
/// queue. Unreachable jobs (rate <= 0) contribute the configured cap.
double waiting_time(std::span<const double> queued_bits,
                    std::span<const double> avg_rates_bps, double unreachable_cap_s);

/// (compute + wait) * z * (1 - y): zero when unscheduled or already cached.
double computing_delay(bool scheduled, bool cached, double compute_s, double waiting_s);

struct CacheEntry {
  int job = -1;
  int variant_action = -1;  // -1: baseline content
  bool stale = false;
  long seq = 0;  // insertion order
};

/// Shared fog cache holding at most S rendered frames. Eviction prefers stale
/// entries, then the oldest insertion.
class FrameCache {
 public:
  explicit FrameCache(int capacity) : capacity_(capacity) {}

  struct InsertResult {
    bool inserted = false;
    std::optional<CacheEntry> evicted;
  };
  InsertResult insert(int job, int variant_action);

  bool contains(int job, int variant_action) const;
  void erase_all(int job);
  void mark_stale_all(int job);
  void mark_stale_variants(int job);  // keep the baseline entry fresh
  /// Re-keys a variant entry as the baseline copy after its impulse arrives.
  void promote_variant(int job, int action);

  std::size_t size() const { return entries_.size(); }
  int capacity() const { return capacity_; }
  bool full() const { return static_cast<int>(entries_.size()) >= capacity_; }
  int stale_count() const;
  /// Non-stale baseline (non-variant) entries.
  int fresh_base_count() const;
  const std::vector<CacheEntry>& entries() const { return entries_; }

 private:
  int find(int job, int variant_action) const;
  int capacity_ = 0;
  long next_seq_ = 0;
  std::vector<CacheEntry> entries_;
};

struct ServerState {
  bool busy = false;
  int job = -1;             // index into the job array
  int job_version = 0;      // result discarded if the job was invalidated
  int variant_action = -1;  // >= 0 when pre-rendering an impulse variant
  bool cache_on_complete = false;
  double free_at_s = 0.0;
};

struct ScheduleDecision {
  long slot = 0;
  int priority = 0;  // 1..3
  int server = -1;
  int player = -1;
  int frame = -1;
  int job = -1;
  int variant_action = -1;
  bool cache_on_complete = false;
};

class ComputeFabric {
 public:
  explicit ComputeFabric(const FogConfig& cfg)
      : config_(cfg), cache_(cfg.cache_capacity),
        servers_(static_cast<std::size_t>(cfg.n_servers)) {}

  const FogConfig& config() const { return config_; }
  FrameCache& cache() { return cache_; }
  const FrameCache& cache() const { return cache_; }
  std::vector<ServerState>& servers() { return servers_; }
  const std::vector<ServerState>& servers() const { return servers_; }

  int vacant_server() const;
  int busy_count() const;
  /// Proactive results not yet in the cache but already promised a slot.
  int reserved_count() const;

 private:
  FogConfig config_;
  FrameCache cache_;
  std::vector<ServerState> servers_;
};

/// One pass of the three-priority computing/caching scheduler over the vacant
/// servers: (P1) frames due now, (P2) frames due within the prediction
/// window, cached on completion, (P3) impulse variants of next-epoch frames
/// of impacted players, most popular action first. P2/P3 stop when the cache
/// is full; proactive levels are skipped entirely when proactive = false.
std::vector<ScheduleDecision> schedule_computing(
    ComputeFabric& fabric, std::span<FrameJob> jobs, const FrameCatalog& catalog,
    const ImpulseModel& impulses, long slot, long window_slots, long epoch_slots,
    double now_s, bool proactive);

}  // namespace vrsim
