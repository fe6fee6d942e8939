#include "vrsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace vrsim {

void ChannelParams::validate() const {
  if (alpha_los > alpha_nlos)
    throw std::invalid_argument("channel: alpha_los must be <= alpha_nlos");
  if (m_nlos < 0.5 || m_los < m_nlos)
    throw std::invalid_argument("channel: need m_los >= m_nlos >= 0.5");
  if (sidelobe_gain <= 0.0 || sidelobe_gain >= 1.0)
    throw std::invalid_argument("channel: sidelobe_gain must be in (0, 1)");
  if (ref_pathloss <= 0.0) throw std::invalid_argument("channel: ref_pathloss must be positive");
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("channel: bandwidth_hz must be positive");
  if (noise_density_w_hz <= 0.0)
    throw std::invalid_argument("channel: noise_density_w_hz must be positive");
  if (pilot_time_s < 0.0) throw std::invalid_argument("channel: pilot_time_s must be >= 0");
  if (slot_duration_s <= 0.0)
    throw std::invalid_argument("channel: slot_duration_s must be positive");
}

double pathloss(double distance_m, Visibility visibility, const ChannelParams& params) {
  if (distance_m <= 0.0) throw std::invalid_argument("pathloss: distance must be positive");
  const double alpha =
      visibility == Visibility::kLos ? params.alpha_los : params.alpha_nlos;
  return params.ref_pathloss * std::pow(distance_m, -alpha);
}

double sample_fading(Visibility visibility, const ChannelParams& params,
                     std::mt19937_64& rng) {
  const double m = visibility == Visibility::kLos ? params.m_los : params.m_nlos;
  std::gamma_distribution<double> gamma(m, 1.0 / m);
  return gamma(rng);
}

double antenna_gain(double beamwidth_rad, double deviation_rad, double sidelobe_gain) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double dev = std::abs(wrap_angle(deviation_rad));
  if (dev <= beamwidth_rad / 2.0) {
    return (two_pi - (two_pi - beamwidth_rad) * sidelobe_gain) / beamwidth_rad;
  }
  return sidelobe_gain;
}

double alignment_overhead(std::span<const std::pair<int, int>> associations,
                          std::span<const MmApState> aps,
                          const ChannelParams& params,
                          double scheduling_interval_s) {
  if (scheduling_interval_s <= 0.0)
    throw std::invalid_argument("alignment_overhead: scheduling interval must be positive");
  double total_s = 0.0;
  for (const auto& [ap, player] : associations) {
    const MmApState& a = aps[static_cast<std::size_t>(ap)];
    total_s += a.sector_beamwidth_rad / a.beam_beamwidth_rad * params.pilot_time_s;
  }
  const double tau = total_s / scheduling_interval_s;
  if (tau >= 1.0) {
    throw std::runtime_error(
        "alignment_overhead: beam training consumes the whole scheduling interval");
  }
  return tau;
}

int ServiceMap::serving_count() const {
  int n = 0;
  for (int u : served)
    if (u >= 0) ++n;
  return n;
}

double sinr_linear(int player, const ServiceMap& service,
                   std::span<const LinkState> links_to_player,
                   std::span<const MmApState> aps, const ChannelParams& params) {
  double signal = 0.0;
  double interference = 0.0;
  for (std::size_t a = 0; a < service.served.size(); ++a) {
    const int u = service.served[a];
    if (u < 0) continue;  // idle mmAPs are silent
    const double p = aps[a].tx_power_w * links_to_player[a].gain();
    if (u == player) {
      signal += p;
    } else {
      interference += p;
    }
  }
  return signal / (interference + params.noise_density_w_hz * params.bandwidth_hz);
}

double rate_bps(double sinr, double alignment_fraction, double bandwidth_hz) {
  return (1.0 - alignment_fraction) * bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace vrsim
