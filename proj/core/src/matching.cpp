#include "vrsim/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vrsim {

void MatchingParams::validate() const {
  if (sinr_threshold_linear < 0.0)
    throw std::invalid_argument("matching: sinr_threshold_linear must be >= 0");
}

double association_utility(double d_th_s, double epsilon,
                           std::span<const double> queued_bits,
                           std::span<const double> queued_avg_rates_bps,
                           double hd_bits, double compute_s, double avg_rate_bps) {
  if (avg_rate_bps <= 0.0) return -std::numeric_limits<double>::infinity();
  double slack = d_th_s * epsilon - compute_s - hd_bits / avg_rate_bps;
  for (std::size_t i = 0; i < queued_bits.size(); ++i) {
    const double r = queued_avg_rates_bps[i];
    slack -= r > 0.0 ? queued_bits[i] / r : d_th_s;
  }
  return slack;
}

PreferenceProfile build_preferences(int n_aps, int n_players,
                                    std::span<const double> gains_ap_major,
                                    std::span<const double> utilities_ap_major) {
  PreferenceProfile p;
  p.n_aps = n_aps;
  p.n_players = n_players;
  p.gains.assign(gains_ap_major.begin(), gains_ap_major.end());
  p.utilities.assign(utilities_ap_major.begin(), utilities_ap_major.end());

  p.ap_prefs.resize(static_cast<std::size_t>(n_aps));
  for (int a = 0; a < n_aps; ++a) {
    auto& list = p.ap_prefs[a];
    for (int u = 0; u < n_players; ++u) {
      if (p.utility_of(a, u) >= 0.0) list.push_back(u);
    }
    std::sort(list.begin(), list.end(), [&](int u1, int u2) {
      const double d = p.utility_of(a, u1) - p.utility_of(a, u2);
      return d != 0.0 ? d > 0.0 : u1 < u2;
    });
  }

  p.player_prefs.resize(static_cast<std::size_t>(n_players));
  for (int u = 0; u < n_players; ++u) {
    auto& list = p.player_prefs[u];
    list.resize(static_cast<std::size_t>(n_aps));
    std::iota(list.begin(), list.end(), 0);
    std::sort(list.begin(), list.end(), [&](int a1, int a2) {
      const double d = p.gain_of(a1, u) - p.gain_of(a2, u);
      return d != 0.0 ? d > 0.0 : a1 < a2;
    });
  }
  return p;
}

std::vector<int> MatchState::serving_aps(int player) const {
  std::vector<int> aps;
  for (int c : clones_of[player]) {
    if (clone_to_ap[c] >= 0) aps.push_back(clone_to_ap[c]);
  }
  return aps;
}

ServiceMap MatchState::to_service_map() const {
  ServiceMap m;
  m.served.assign(static_cast<std::size_t>(n_aps), -1);
  for (int a = 0; a < n_aps; ++a) {
    if (ap_to_clone[a] >= 0) m.served[a] = clone_owner[ap_to_clone[a]];
  }
  return m;
}

bool MatchState::consistent() const {
  for (std::size_t c = 0; c < clone_to_ap.size(); ++c) {
    const int a = clone_to_ap[c];
    if (a >= 0 && ap_to_clone[a] != static_cast<int>(c)) return false;
  }
  for (int a = 0; a < n_aps; ++a) {
    const int c = ap_to_clone[a];
    if (c >= 0 && clone_to_ap[c] != a) return false;
  }
  for (const auto& clones : clones_of) {
    std::vector<int> aps;
    for (int c : clones) {
      if (clone_to_ap[c] >= 0) aps.push_back(clone_to_ap[c]);
    }
    std::sort(aps.begin(), aps.end());
    if (std::adjacent_find(aps.begin(), aps.end()) != aps.end()) return false;
  }
  return true;
}

namespace {

bool ap_prefers(const PreferenceProfile& p, int ap, int u1, int u2) {
  const double d = p.utility_of(ap, u1) - p.utility_of(ap, u2);
  return d != 0.0 ? d > 0.0 : u1 < u2;
}

bool player_prefers(const PreferenceProfile& p, int player, int a1, int a2) {
  const double d = p.gain_of(a1, player) - p.gain_of(a2, player);
  return d != 0.0 ? d > 0.0 : a1 < a2;
}

bool acceptable(const PreferenceProfile& p, int ap, int player) {
  const double phi = p.utility_of(ap, player);
  return std::isfinite(phi) && phi >= 0.0;
}

struct DaState {
  const PreferenceProfile& profile;
  MatchState& m;
  std::vector<std::vector<char>> consumed;  // clone x ap

  bool ap_serves_sibling(int ap, int clone) const {
    const int inc = m.ap_to_clone[ap];
    return inc >= 0 && inc != clone && m.clone_owner[inc] == m.clone_owner[clone];
  }

  void accept(int clone, int ap) {
    const int inc = m.ap_to_clone[ap];
    if (inc >= 0) {
      m.clone_to_ap[inc] = -1;
      consumed[inc][ap] = 1;  // the displaced clone drops this mmAP
    }
    const int prev = m.clone_to_ap[clone];
    if (prev >= 0) m.ap_to_clone[prev] = -1;
    m.clone_to_ap[clone] = ap;
    m.ap_to_clone[ap] = clone;
  }

  int add_clone(int owner) {
    const int c = static_cast<int>(m.clone_owner.size());
    m.clone_owner.push_back(owner);
    m.clone_to_ap.push_back(-1);
    m.clones_of[owner].push_back(c);
    consumed.emplace_back(static_cast<std::size_t>(m.n_aps), 0);
    return c;
  }
};

}  // namespace

MatchState deferred_acceptance(const PreferenceProfile& profile,
                               const MatchingParams& params,
                               const SinrEvaluator& sinr) {
  params.validate();
  MatchState m;
  m.n_aps = profile.n_aps;
  m.sinr_threshold = params.sinr_threshold_linear;
  m.ap_to_clone.assign(static_cast<std::size_t>(profile.n_aps), -1);
  m.clones_of.resize(static_cast<std::size_t>(profile.n_players));
  DaState da{profile, m, {}};
  for (int u = 0; u < profile.n_players; ++u) da.add_clone(u);

  const bool split = params.allow_splitting && static_cast<bool>(sinr);

  auto has_unmatched_clone = [&](int owner) {
    for (int c : m.clones_of[owner])
      if (m.clone_to_ap[c] < 0) return true;
    return false;
  };

  auto maybe_split = [&](int owner) {
    if (!split) return;
    if (static_cast<int>(m.clones_of[owner].size()) >= m.n_aps) return;
    if (has_unmatched_clone(owner)) return;  // one extra proposer at a time
    if (m.serving_aps(owner).empty()) return;
    if (sinr(owner, m.to_service_map()) >= params.sinr_threshold_linear) return;
    da.add_clone(owner);
  };

  auto run_rounds = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int c = 0; c < static_cast<int>(m.clone_owner.size()); ++c) {
        if (m.clone_to_ap[c] >= 0) continue;
        const int owner = m.clone_owner[c];
        for (int ap : profile.player_prefs[owner]) {
          if (da.consumed[c][ap]) continue;
          if (da.ap_serves_sibling(ap, c)) continue;  // joint link already held
          if (!acceptable(profile, ap, owner)) {
            da.consumed[c][ap] = 1;
            continue;
          }
          const int inc = m.ap_to_clone[ap];
          if (inc >= 0 && !ap_prefers(profile, ap, owner, m.clone_owner[inc])) {
            da.consumed[c][ap] = 1;  // rejected
            continue;
          }
          da.accept(c, ap);
          changed = true;
          maybe_split(owner);
          break;
        }
      }
    }
  };

  run_rounds();

  // Clones skip mmAPs held by a sibling without consuming them; if the
  // sibling later moved, a blocking pair can survive the proposal rounds.
  // Satisfying it strictly improves the mmAP, so this terminates.
  const int guard = (static_cast<int>(m.clone_owner.size()) + 1) * (m.n_aps + 1) * 4;
  for (int iter = 0; iter < guard; ++iter) {
    const auto blocking = find_blocking_pairs(m, profile);
    if (blocking.empty()) break;
    da.accept(blocking.front().first, blocking.front().second);
    maybe_split(m.clone_owner[blocking.front().first]);
    run_rounds();
  }
  return m;
}

std::vector<std::pair<int, int>> find_blocking_pairs(const MatchState& m,
                                                     const PreferenceProfile& profile) {
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < static_cast<int>(m.clone_owner.size()); ++c) {
    const int owner = m.clone_owner[c];
    const int current = m.clone_to_ap[c];
    for (int ap = 0; ap < m.n_aps; ++ap) {
      if (ap == current) continue;
      if (!acceptable(profile, ap, owner)) continue;
      const int inc = m.ap_to_clone[ap];
      if (inc >= 0 && m.clone_owner[inc] == owner) continue;  // sibling holds it
      const bool clone_wants = current < 0 || player_prefers(profile, owner, ap, current);
      if (!clone_wants) continue;
      const bool ap_wants = inc < 0 || ap_prefers(profile, ap, owner, m.clone_owner[inc]);
      if (ap_wants) pairs.emplace_back(c, ap);
    }
  }
  return pairs;
}

}  // namespace vrsim
