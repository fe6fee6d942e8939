#include "vrsim/edge_compute.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace vrsim {

void FogConfig::validate() const {
  if (n_servers < 1) throw std::invalid_argument("fog: n_servers must be >= 1");
  if (cycles_per_s <= 0.0) throw std::invalid_argument("fog: cycles_per_s must be positive");
  if (cycles_per_bit <= 0.0) throw std::invalid_argument("fog: cycles_per_bit must be positive");
  if (cache_capacity < 0) throw std::invalid_argument("fog: cache_capacity must be >= 0");
  if (window_s < 0.0) throw std::invalid_argument("fog: window_s must be >= 0");
  if (edge_processing_s < 0.0)
    throw std::invalid_argument("fog: edge_processing_s must be >= 0");
}

double compute_time(double hd_bits, double cycles_per_s, double cycles_per_bit) {
  if (hd_bits < 0.0 || cycles_per_s <= 0.0 || cycles_per_bit <= 0.0)
    throw std::invalid_argument("compute_time: inputs must be positive");
  return cycles_per_bit * hd_bits / cycles_per_s;
}

double waiting_time(std::span<const double> queued_bits,
                    std::span<const double> avg_rates_bps, double unreachable_cap_s) {
  double total = 0.0;
  for (std::size_t i = 0; i < queued_bits.size(); ++i) {
    const double r = avg_rates_bps[i];
    total += r > 0.0 ? queued_bits[i] / r : unreachable_cap_s;
  }
  return total;
}

double computing_delay(bool scheduled, bool cached, double compute_s, double waiting_s) {
  if (!scheduled || cached) return 0.0;
  return compute_s + waiting_s;
}

int FrameCache::find(int job, int variant_action) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].job == job && entries_[i].variant_action == variant_action)
      return static_cast<int>(i);
  }
  return -1;
}

FrameCache::InsertResult FrameCache::insert(int job, int variant_action) {
  InsertResult result;
  if (capacity_ <= 0) return result;
  const int existing = find(job, variant_action);
  if (existing >= 0) {  // re-render of an invalidated entry refreshes it
    entries_[existing].stale = false;
    result.inserted = true;
    return result;
  }
  if (full()) {
    // stale entries go first, then speculative variants, then the oldest
    auto rank = [](const CacheEntry& e) {
      return e.stale ? 0 : (e.variant_action >= 0 ? 1 : 2);
    };
    int victim = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      const int r = rank(entries_[i]);
      const int rv = rank(entries_[victim]);
      if (r < rv || (r == rv && entries_[i].seq < entries_[victim].seq))
        victim = static_cast<int>(i);
    }
    result.evicted = entries_[victim];
    entries_.erase(entries_.begin() + victim);
  }
  entries_.push_back(CacheEntry{job, variant_action, false, next_seq_++});
  result.inserted = true;
  return result;
}

bool FrameCache::contains(int job, int variant_action) const {
  return find(job, variant_action) >= 0;
}

void FrameCache::erase_all(int job) {
  std::erase_if(entries_, [job](const CacheEntry& e) { return e.job == job; });
}

void FrameCache::mark_stale_all(int job) {
  for (auto& e : entries_)
    if (e.job == job) e.stale = true;
}

void FrameCache::mark_stale_variants(int job) {
  for (auto& e : entries_)
    if (e.job == job && e.variant_action >= 0) e.stale = true;
}

void FrameCache::promote_variant(int job, int action) {
  for (auto& e : entries_) {
    if (e.job == job) {
      if (e.variant_action == action) {
        e.variant_action = -1;
        e.stale = false;
      } else {
        e.stale = true;  // old baseline / other variants no longer match
      }
    }
  }
}

int FrameCache::stale_count() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [](const CacheEntry& e) { return e.stale; }));
}

int FrameCache::fresh_base_count() const {
  return static_cast<int>(std::count_if(
      entries_.begin(), entries_.end(),
      [](const CacheEntry& e) { return !e.stale && e.variant_action < 0; }));
}

int ComputeFabric::vacant_server() const {
  for (std::size_t i = 0; i < servers_.size(); ++i)
    if (!servers_[i].busy) return static_cast<int>(i);
  return -1;
}

int ComputeFabric::busy_count() const {
  return static_cast<int>(std::count_if(servers_.begin(), servers_.end(),
                                        [](const ServerState& s) { return s.busy; }));
}

int ComputeFabric::reserved_count() const {
  return static_cast<int>(std::count_if(servers_.begin(), servers_.end(),
                                        [](const ServerState& s) {
                                          return s.busy && s.cache_on_complete;
                                        }));
}

namespace {

// Earliest due slot, then lowest player id.
int pick_job(std::span<const FrameJob> jobs, long lo_slot, long hi_slot) {
  int best = -1;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const FrameJob& job = jobs[j];
    if (job.status != JobStatus::kPending) continue;
    if (job.request_slot < lo_slot || job.request_slot > hi_slot) continue;
    if (best < 0 || job.request_slot < jobs[best].request_slot ||
        (job.request_slot == jobs[best].request_slot && job.player < jobs[best].player)) {
      best = static_cast<int>(j);
    }
  }
  return best;
}

void assign(ComputeFabric& fabric, std::span<FrameJob> jobs, const FrameCatalog& catalog,
            std::vector<ScheduleDecision>& out, long slot, double now_s, int server,
            int job_index, int priority, int variant_action, bool cache_on_complete) {
  FrameJob& job = jobs[job_index];
  ServerState& srv = fabric.servers()[server];
  const double duration = compute_time(catalog.at(job.player, job.frame).hd_bits,
                                       fabric.config().cycles_per_s,
                                       fabric.config().cycles_per_bit);
  srv.busy = true;
  srv.job = job_index;
  srv.job_version = job.version;
  srv.variant_action = variant_action;
  srv.cache_on_complete = cache_on_complete;
  srv.free_at_s = now_s + duration;

  if (variant_action < 0) {
    job.status = JobStatus::kComputing;
    job.scheduled = true;
    job.compute_start_slot = slot;
  } else {
    job.variant_in_flight = variant_action;
  }
  out.push_back(ScheduleDecision{slot, priority, server, job.player, job.frame,
                                 job_index, variant_action, cache_on_complete});
}

}  // namespace

std::vector<ScheduleDecision> schedule_computing(
    ComputeFabric& fabric, std::span<FrameJob> jobs, const FrameCatalog& catalog,
    const ImpulseModel& impulses, long slot, long window_slots, long epoch_slots,
    double now_s, bool proactive) {
  std::vector<ScheduleDecision> decisions;
  int proactive_reserved = fabric.reserved_count();

  while (true) {
    const int server = fabric.vacant_server();
    if (server < 0) break;  // no vacant cloudlets

    const int due = pick_job(jobs, std::numeric_limits<long>::min(), slot);
    if (due >= 0) {
      assign(fabric, jobs, catalog, decisions, slot, now_s, server, due,
             /*priority=*/1, /*variant_action=*/-1, /*cache_on_complete=*/false);
      continue;
    }
    if (!proactive) break;

    // Base-frame pre-renders may evict speculative variants; they only stop
    // once the cache cannot hold another non-stale base frame.
    const bool base_room = fabric.cache().fresh_base_count() + proactive_reserved <
                           fabric.cache().capacity();
    if (!base_room) break;  // cache is full

    const int ahead = pick_job(jobs, slot + 1, slot + window_slots);
    if (ahead >= 0) {
      assign(fabric, jobs, catalog, decisions, slot, now_s, server, ahead,
             /*priority=*/2, /*variant_action=*/-1, /*cache_on_complete=*/true);
      ++proactive_reserved;
      continue;
    }

    // Priority three: pre-render post-impulse variants of next-epoch frames,
    // most popular action first. Variants only take genuinely spare space.
    const bool spare_room =
        static_cast<int>(fabric.cache().size()) - fabric.cache().stale_count() +
            proactive_reserved < fabric.cache().capacity();
    if (!spare_room) break;

    int variant_job = -1;
    int variant_action = -1;
    const long next_frame = slot / epoch_slots + 1;
    if (next_frame < catalog.frames_per_player) {
      for (int i = 0; i < impulses.n_actions && variant_job < 0; ++i) {
        for (int u : impulses.impacted[i]) {
          const auto j = static_cast<std::size_t>(u) * catalog.frames_per_player +
                         static_cast<std::size_t>(next_frame);
          const FrameJob& job = jobs[j];
          if (job.terminal()) continue;
          if (job.request_slot <= slot || job.request_slot > slot + epoch_slots) continue;
          if (job.has_variant(i) || job.variant_in_flight >= 0) continue;
          variant_job = static_cast<int>(j);
          variant_action = i;
          break;
        }
      }
    }
    if (variant_job < 0) break;  // all impulse candidates covered
    assign(fabric, jobs, catalog, decisions, slot, now_s, server, variant_job,
           /*priority=*/3, variant_action, /*cache_on_complete=*/true);
    ++proactive_reserved;
  }
  return decisions;
}

}  // namespace vrsim
