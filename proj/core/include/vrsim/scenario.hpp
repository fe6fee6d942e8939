#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "vrsim/geometry.hpp"

namespace vrsim {

enum class Visibility { kLos, kNlos };

struct LinkVisibility {
  Visibility state = Visibility::kLos;
  int blocker = -1;  // blocking player id, NLOS only
  bool los() const { return state == Visibility::kLos; }
};

struct PlayerState {
  int id = -1;
  int pod = -1;
  Vec3 position;
  double yaw = 0.0;  // facing direction of the head-mounted display
  std::deque<Vec3> history;
  static constexpr std::size_t kHistoryDepth = 16;
};

struct MmApState {
  int id = -1;
  Vec3 position;  // ceiling-mounted
  double tx_power_w = 0.0;
  double sector_beamwidth_rad = 0.0;  // sector-level (training)
  double beam_beamwidth_rad = 0.0;    // beam-level (data)
  double boresight_rad = 0.0;         // re-aimed at the served player
};

struct ScenarioParams {
  int rows = 8;
  int cols = 8;
  double pod_side_m = 2.0;
  double height_m = 3.0;
  double head_height_m = 1.6;
  double blocker_diameter_m = 0.4;
  double max_speed_mps = 1.0;
  double max_turn_rad_s = 1.5;
  int n_players = 64;
  int n_mmaps = 16;
  double tx_power_w = 0.01;                                 // 10 dBm
  double sector_beamwidth_rad = std::numbers::pi / 2.0;     // 90 deg
  double beam_beamwidth_rad = std::numbers::pi / 6.0;       // 30 deg
  void validate() const;
};

struct ArcadeScenario {
  ScenarioParams params;
  double length_m = 0.0;
  double width_m = 0.0;
  double height_m = 0.0;
  std::vector<PlayerState> players;
  std::vector<MmApState> mmaps;

  int pod_count() const { return params.rows * params.cols; }
  /// Axis-aligned bounds of a pod cell: {x_min, y_min, x_max, y_max}.
  std::array<double, 4> pod_bounds(int pod) const;
  bool inside_pod(const PlayerState& p) const;
};

/// Lays out a rows x cols pod grid, drops players into distinct pods and
/// places mmAPs on a uniform ceiling grid. Deterministic for a fixed seed.
ArcadeScenario generate_arcade(const ScenarioParams& params, std::uint64_t seed);

/// Bounded random walk clipped to the player's pod cell, plus a bounded yaw
/// turn. The returned state always satisfies pod containment.
PlayerState step_pose(const PlayerState& player, const ArcadeScenario& scenario,
                      std::mt19937_64& rng, double slot_duration_s);

/// NLOS iff some other player's d-diameter circle intercepts the floor
/// projection of the ray from the mmAP to the target.
LinkVisibility los_status(const MmApState& ap, const PlayerState& target,
                          std::span<const PlayerState> others,
                          double blocker_diameter_m);

}  // namespace vrsim
