#pragma once

#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "vrsim/channel.hpp"

namespace vrsim {

struct MatchingParams {
  double sinr_threshold_linear = 3.1623;  // 5 dB
  bool allow_splitting = true;            // off for both baselines
  void validate() const;
};

/// Association slack of pair (a, u): the latency budget D_th * eps minus the
/// expected queue wait, compute time and transmission time of u's next frame.
/// Negative slack makes the player unacceptable; an unreachable player
/// (avg_rate <= 0) is never acceptable.
double association_utility(double d_th_s, double epsilon,
                           std::span<const double> queued_bits,
                           std::span<const double> queued_avg_rates_bps,
                           double hd_bits, double compute_s, double avg_rate_bps);

struct PreferenceProfile {
  int n_aps = 0;
  int n_players = 0;
  std::vector<double> utilities;  // ap-major Phi_au
  std::vector<double> gains;      // ap-major composite link gains
  std::vector<std::vector<int>> ap_prefs;      // utility desc, only Phi >= 0
  std::vector<std::vector<int>> player_prefs;  // gain desc, all aps

  double utility_of(int ap, int player) const {
    return utilities[static_cast<std::size_t>(ap) * n_players + player];
  }
  double gain_of(int ap, int player) const {
    return gains[static_cast<std::size_t>(ap) * n_players + player];
  }
};

/// Orders each side's list; ties broken by lower id. Players with negative
/// utility are left off the mmAP's list (individual rationality).
PreferenceProfile build_preferences(int n_aps, int n_players,
                                    std::span<const double> gains_ap_major,
                                    std::span<const double> utilities_ap_major);

/// One-to-one mapping between mmAPs and player clones. A player split for
/// multi-connectivity owns several clones, each matched to a distinct mmAP.
struct MatchState {
  std::vector<int> clone_owner;              // clone -> player
  std::vector<int> clone_to_ap;              // -1: unmatched
  std::vector<int> ap_to_clone;              // -1: unmatched
  std::vector<std::vector<int>> clones_of;   // player -> clone ids
  int n_aps = 0;
  double sinr_threshold = 0.0;

  std::vector<int> serving_aps(int player) const;
  ServiceMap to_service_map() const;
  /// Structural one-to-one conditions of a valid matching.
  bool consistent() const;
};

/// SINR of a player under a tentative matching, used for the splitting test.
using SinrEvaluator = std::function<double(int player, const ServiceMap&)>;

/// Deferred acceptance over (profile, gamma_th): players propose down their
/// gain-ordered lists; an mmAP keeps the highest-utility proposer seen so
/// far. A matched player below the SINR threshold is split into clones, one
/// extra proposer at a time, until the threshold holds or its list runs out.
MatchState deferred_acceptance(const PreferenceProfile& profile,
                               const MatchingParams& params,
                               const SinrEvaluator& sinr = {});

/// Exhaustive blocking-pair scan (Def. 2): (clone, ap) not matched to each
/// other where both strictly prefer each other over their assignments.
/// Empty result == stable.
std::vector<std::pair<int, int>> find_blocking_pairs(const MatchState& matching,
                                                     const PreferenceProfile& profile);

}  // namespace vrsim
