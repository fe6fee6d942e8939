#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace vrsim {

struct WorkloadParams {
  int frames_per_player = 100;
  double mean_hd_bits = 2e9;   // ~exp(2) Gbit, read as mean 2 Gbit
  double lq_ratio = 0.005;     // lq_size = hd_size * ratio, well under 1/100
  long frame_cadence_slots = 100;
  int n_actions = 100;
  double zipf_exponent = 0.8;
  double impulse_rate_per_s = 10.0;
  double impact_prob = 0.2;    // P(theta_ui = 1)
  void validate() const;
};

struct FrameDescriptor {
  double hd_bits = 0.0;
  double lq_bits = 0.0;
  long due_slot = 0;  // request slot; also the start of the delivery budget
};

struct FrameCatalog {
  int n_players = 0;
  int frames_per_player = 0;
  std::vector<FrameDescriptor> frames;  // player-major

  const FrameDescriptor& at(int player, int frame) const {
    return frames[static_cast<std::size_t>(player) * frames_per_player + frame];
  }
};

/// HD sizes i.i.d. exponential with the configured mean, due slots on a fixed
/// cadence. Deterministic per seed.
FrameCatalog build_catalog(int n_players, int frames_per_player, double mean_hd_bits,
                           double lq_ratio, long cadence_slots, std::mt19937_64& rng);

struct ImpulseModel {
  int n_players = 0;
  int n_actions = 0;
  double zipf_exponent = 0.8;
  double rate_per_s = 0.0;
  std::vector<double> popularity;           // normalized 1/i^z masses, rank order
  std::vector<std::vector<int>> impacted;   // action -> impacted player ids
  std::vector<std::uint8_t> theta;          // U x |I| impact matrix, player-major

  bool impacts(int player, int action) const {
    return theta[static_cast<std::size_t>(player) * n_actions + action] != 0;
  }
};

/// Impact matrix with i.i.d. Bernoulli entries; all-zero action columns are
/// resampled so every action impacts a non-empty player subset.
ImpulseModel build_impulse_model(int n_players, const WorkloadParams& params,
                                 std::mt19937_64& rng);

/// Poisson number of events per slot; action ids drawn with mass ~ 1/i^z.
std::vector<int> sample_impulses(const ImpulseModel& model, double slot_duration_s,
                                 std::mt19937_64& rng);

enum class JobStatus {
  kPending,
  kComputing,
  kComputed,     // rendered reactively, held at the server output
  kCached,       // rendered proactively, resident in the fog cache
  kDelivering,
  kDeliveredHd,
  kDeliveredLq,
};

struct FrameJob {
  int player = -1;
  int frame = -1;
  JobStatus status = JobStatus::kPending;
  bool scheduled = false;  // z_fu
  bool cached = false;     // y_fu
  long request_slot = -1;
  long rerequest_slot = -1;  // latest invalidation; computing delay anchor
  long compute_start_slot = -1;
  double compute_ready_s = -1.0;  // valid content ready for delivery
  double delivery_end_s = -1.0;
  int version = 0;  // bumped on invalidation; in-flight results check it
  int variant_in_flight = -1;          // impulse variant being pre-rendered
  std::vector<int> variant_actions;    // impulse variants already cached

  bool terminal() const {
    return status == JobStatus::kDeliveredHd || status == JobStatus::kDeliveredLq;
  }
  bool has_variant(int action) const;
};

/// Invalidates undelivered rendered content of every impacted player. A cached
/// variant pre-rendered for exactly this action is promoted instead of
/// discarded. Returns the indices of jobs that were reset to pending.
std::vector<int> apply_impulse(int action, const ImpulseModel& model,
                               std::span<FrameJob> jobs,
                               std::vector<int>* promoted = nullptr);

}  // namespace vrsim
