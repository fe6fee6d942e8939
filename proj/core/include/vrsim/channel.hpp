#pragma once

#include <random>
#include <span>
#include <utility>
#include <vector>

#include "vrsim/scenario.hpp"

namespace vrsim {

struct ChannelParams {
  double alpha_los = 2.0;
  double alpha_nlos = 3.3;
  double m_los = 3.0;   // Nakagami shape, LOS
  double m_nlos = 2.0;  // Nakagami shape, NLOS
  double ref_pathloss = 1.5806e-7;  // (lambda / 4 pi)^2 at 60 GHz, 1 m
  double sidelobe_gain = 0.05;
  double bandwidth_hz = 2.16e9;
  double noise_density_w_hz = 3.1803e-20;  // 290 K thermal + 9 dB noise figure
  double pilot_time_s = 10e-6;
  double slot_duration_s = 1e-3;
  void validate() const;
};

struct LinkState {
  int ap = -1;
  int player = -1;
  LinkVisibility visibility;
  double pathloss = 0.0;
  double fading = 1.0;  // |g|^2, unit mean
  double tx_gain = 1.0;
  double rx_gain = 1.0;
  double gain() const { return pathloss * fading * tx_gain * rx_gain; }
};

/// C * distance^(-alpha), alpha picked by visibility. Rejects distance <= 0.
double pathloss(double distance_m, Visibility visibility, const ChannelParams& params);

/// Nakagami-m power fading: Gamma(m, 1/m) draw, unit mean, fresh each slot.
double sample_fading(Visibility visibility, const ChannelParams& params,
                     std::mt19937_64& rng);

/// 2D sectored antenna pattern: mainlobe gain inside |deviation| <= phi/2,
/// constant sidelobe gain elsewhere. Conserves power over the circle.
double antenna_gain(double beamwidth_rad, double deviation_rad, double sidelobe_gain);

/// Fraction of the scheduling interval spent on beam training,
/// sum of (psi_a / phi_a) * T_p over associated (ap, player) pairs.
/// Throws if training would consume the whole interval.
double alignment_overhead(std::span<const std::pair<int, int>> associations,
                          std::span<const MmApState> aps,
                          const ChannelParams& params,
                          double scheduling_interval_s);

/// Who each mmAP currently transmits to; -1 marks an idle (silent) mmAP.
/// Clones of a split player map back to the owner id, so joint transmitters
/// add up in the SINR numerator instead of interfering with each other.
struct ServiceMap {
  std::vector<int> served;
  int serving_count() const;
};

/// SINR at a player's mmHMD: joint received power of its serving mmAPs over
/// active interferers plus thermal noise. links_to_player is indexed by ap id.
double sinr_linear(int player, const ServiceMap& service,
                   std::span<const LinkState> links_to_player,
                   std::span<const MmApState> aps, const ChannelParams& params);

/// (1 - tau) * B * log2(1 + sinr).
double rate_bps(double sinr, double alignment_fraction, double bandwidth_hz);

}  // namespace vrsim
