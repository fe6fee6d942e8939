#include "vrsim/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace vrsim {

void ScenarioParams::validate() const {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("scenario: rows/cols must be positive");
  if (pod_side_m <= 0.0) throw std::invalid_argument("scenario: pod_side_m must be positive");
  if (height_m <= 0.0) throw std::invalid_argument("scenario: height_m must be positive");
  if (head_height_m <= 0.0 || head_height_m >= height_m)
    throw std::invalid_argument("scenario: head_height_m must be in (0, height_m)");
  if (n_players < 1 || n_players > rows * cols)
    throw std::invalid_argument("scenario: n_players must be in [1, rows*cols]");
  if (n_mmaps < 1) throw std::invalid_argument("scenario: n_mmaps must be >= 1");
  if (blocker_diameter_m < 0.0) throw std::invalid_argument("scenario: blocker_diameter_m must be >= 0");
  if (tx_power_w <= 0.0) throw std::invalid_argument("scenario: tx_power_w must be positive");
  if (beam_beamwidth_rad <= 0.0 || beam_beamwidth_rad > sector_beamwidth_rad ||
      sector_beamwidth_rad > 2.0 * std::numbers::pi)
    throw std::invalid_argument("scenario: need 0 < beam <= sector <= 2*pi beamwidths");
}

std::array<double, 4> ArcadeScenario::pod_bounds(int pod) const {
  const int r = pod / params.cols;
  const int c = pod % params.cols;
  const double l = params.pod_side_m;
  return {c * l, r * l, (c + 1) * l, (r + 1) * l};
}

bool ArcadeScenario::inside_pod(const PlayerState& p) const {
  if (p.pod < 0 || p.pod >= pod_count()) return false;
  const auto b = pod_bounds(p.pod);
  return p.position.x >= b[0] && p.position.x <= b[2] &&
         p.position.y >= b[1] && p.position.y <= b[3];
}

namespace {

// Largest factor pair (ra, ca) of n with ra <= sqrt(n), for a ceiling grid
// that degenerates to 4x4 at n=16 and 2x2 at n=4.
std::pair<int, int> grid_dims(int n) {
  int ra = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (ra > 1 && n % ra != 0) --ra;
  return {ra, n / ra};
}

}  // namespace

ArcadeScenario generate_arcade(const ScenarioParams& params, std::uint64_t seed) {
  params.validate();
  ArcadeScenario s;
  s.params = params;
  s.length_m = params.cols * params.pod_side_m;
  s.width_m = params.rows * params.pod_side_m;
  s.height_m = params.height_m;

  std::mt19937_64 rng{seed};

  std::vector<int> pods(static_cast<std::size_t>(s.pod_count()));
  std::iota(pods.begin(), pods.end(), 0);
  std::shuffle(pods.begin(), pods.end(), rng);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  s.players.reserve(params.n_players);
  for (int u = 0; u < params.n_players; ++u) {
    PlayerState p;
    p.id = u;
    p.pod = pods[static_cast<std::size_t>(u)];
    const auto b = s.pod_bounds(p.pod);
    p.position = {b[0] + unit(rng) * (b[2] - b[0]),
                  b[1] + unit(rng) * (b[3] - b[1]),
                  params.head_height_m};
    p.yaw = wrap_angle(unit(rng) * 2.0 * std::numbers::pi);
    p.history.push_back(p.position);
    s.players.push_back(std::move(p));
  }

  const auto [ar, ac] = grid_dims(params.n_mmaps);
  s.mmaps.reserve(params.n_mmaps);
  for (int a = 0; a < params.n_mmaps; ++a) {
    MmApState ap;
    ap.id = a;
    const int r = a / ac;
    const int c = a % ac;
    ap.position = {(c + 0.5) * s.length_m / ac, (r + 0.5) * s.width_m / ar, s.height_m};
    ap.tx_power_w = params.tx_power_w;
    ap.sector_beamwidth_rad = params.sector_beamwidth_rad;
    ap.beam_beamwidth_rad = params.beam_beamwidth_rad;
    s.mmaps.push_back(ap);
  }
  return s;
}

PlayerState step_pose(const PlayerState& player, const ArcadeScenario& scenario,
                      std::mt19937_64& rng, double slot_duration_s) {
  PlayerState next = player;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  const double speed = unit(rng) * scenario.params.max_speed_mps;
  const double heading = unit(rng) * 2.0 * std::numbers::pi;
  next.position.x += speed * slot_duration_s * std::cos(heading);
  next.position.y += speed * slot_duration_s * std::sin(heading);
  next.yaw = wrap_angle(next.yaw + sym(rng) * scenario.params.max_turn_rad_s * slot_duration_s);

  const auto b = scenario.pod_bounds(next.pod);
  next.position.x = std::clamp(next.position.x, b[0], b[2]);
  next.position.y = std::clamp(next.position.y, b[1], b[3]);

  next.history.push_back(next.position);
  while (next.history.size() > PlayerState::kHistoryDepth) next.history.pop_front();
  return next;
}

LinkVisibility los_status(const MmApState& ap, const PlayerState& target,
                          std::span<const PlayerState> others,
                          double blocker_diameter_m) {
  const Vec2 a = floor_projection(ap.position);
  const Vec2 t = floor_projection(target.position);
  const double radius = blocker_diameter_m / 2.0;

  LinkVisibility v;
  double nearest = radius;
  for (const PlayerState& o : others) {
    if (o.id == target.id) continue;
    const double d = point_segment_distance(floor_projection(o.position), a, t);
    if (d <= nearest) {
      nearest = d;
      v.state = Visibility::kNlos;
      v.blocker = o.id;
    }
  }
  return v;
}

}  // namespace vrsim
