#include "vrsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vrsim {

void WorkloadParams::validate() const {
  if (frames_per_player < 1)
    throw std::invalid_argument("workload: frames_per_player must be >= 1");
  if (mean_hd_bits <= 0.0) throw std::invalid_argument("workload: mean_hd_bits must be positive");
  if (lq_ratio <= 0.0 || lq_ratio > 0.01)
    throw std::invalid_argument("workload: lq_ratio must be in (0, 0.01]");
  if (frame_cadence_slots < 1)
    throw std::invalid_argument("workload: frame_cadence_slots must be >= 1");
  if (n_actions < 1) throw std::invalid_argument("workload: n_actions must be >= 1");
  if (zipf_exponent < 0.0) throw std::invalid_argument("workload: zipf_exponent must be >= 0");
  if (impulse_rate_per_s < 0.0)
    throw std::invalid_argument("workload: impulse_rate_per_s must be >= 0");
  if (impact_prob <= 0.0 || impact_prob > 1.0)
    throw std::invalid_argument("workload: impact_prob must be in (0, 1]");
}

FrameCatalog build_catalog(int n_players, int frames_per_player, double mean_hd_bits,
                           double lq_ratio, long cadence_slots, std::mt19937_64& rng) {
  if (n_players < 1 || frames_per_player < 1)
    throw std::invalid_argument("build_catalog: counts must be >= 1");
  FrameCatalog cat;
  cat.n_players = n_players;
  cat.frames_per_player = frames_per_player;
  cat.frames.reserve(static_cast<std::size_t>(n_players) * frames_per_player);
  std::exponential_distribution<double> size(1.0 / mean_hd_bits);
  for (int u = 0; u < n_players; ++u) {
    for (int f = 0; f < frames_per_player; ++f) {
      FrameDescriptor d;
      d.hd_bits = size(rng);
      d.lq_bits = d.hd_bits * lq_ratio;
      d.due_slot = static_cast<long>(f) * cadence_slots;
      cat.frames.push_back(d);
    }
  }
  return cat;
}

ImpulseModel build_impulse_model(int n_players, const WorkloadParams& params,
                                 std::mt19937_64& rng) {
  params.validate();
  ImpulseModel m;
  m.n_players = n_players;
  m.n_actions = params.n_actions;
  m.zipf_exponent = params.zipf_exponent;
  m.rate_per_s = params.impulse_rate_per_s;

  m.popularity.resize(static_cast<std::size_t>(m.n_actions));
  double norm = 0.0;
  for (int i = 0; i < m.n_actions; ++i) {
    m.popularity[i] = std::pow(static_cast<double>(i + 1), -m.zipf_exponent);
    norm += m.popularity[i];
  }
  for (double& p : m.popularity) p /= norm;

  m.theta.assign(static_cast<std::size_t>(n_players) * m.n_actions, 0);
  m.impacted.resize(static_cast<std::size_t>(m.n_actions));
  std::bernoulli_distribution hit(params.impact_prob);
  std::uniform_int_distribution<int> any_player(0, n_players - 1);
  for (int i = 0; i < m.n_actions; ++i) {
    auto& list = m.impacted[i];
    for (int u = 0; u < n_players; ++u) {
      if (hit(rng)) {
        m.theta[static_cast<std::size_t>(u) * m.n_actions + i] = 1;
        list.push_back(u);
      }
    }
    if (list.empty()) {  // every action must impact someone
      const int u = any_player(rng);
      m.theta[static_cast<std::size_t>(u) * m.n_actions + i] = 1;
      list.push_back(u);
    }
  }
  return m;
}

std::vector<int> sample_impulses(const ImpulseModel& model, double slot_duration_s,
                                 std::mt19937_64& rng) {
  std::vector<int> events;
  const double mean = model.rate_per_s * slot_duration_s;
  if (mean <= 0.0) return events;
  std::poisson_distribution<int> count(mean);
  const int n = count(rng);
  if (n <= 0) return events;
  std::discrete_distribution<int> action(model.popularity.begin(), model.popularity.end());
  events.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) events.push_back(action(rng));
  return events;
}

bool FrameJob::has_variant(int action) const {
  return std::find(variant_actions.begin(), variant_actions.end(), action) !=
         variant_actions.end();
}

std::vector<int> apply_impulse(int action, const ImpulseModel& model,
                               std::span<FrameJob> jobs, std::vector<int>* promoted) {
  std::vector<int> invalidated;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    FrameJob& job = jobs[j];
    if (!model.impacts(job.player, action)) continue;
    if (job.terminal() || job.status == JobStatus::kDelivering) continue;

    if (job.has_variant(action)) {
      // The post-action content was pre-rendered; it becomes the live copy.
      job.variant_actions.clear();
      job.cached = true;
      job.scheduled = false;
      job.status = JobStatus::kCached;
      ++job.version;  // stops any in-flight base/variant compute of old content
      job.variant_in_flight = -1;
      if (promoted) promoted->push_back(static_cast<int>(j));
      continue;
    }

    job.variant_actions.clear();
    if (job.status == JobStatus::kPending) continue;
    job.status = JobStatus::kPending;
    job.scheduled = false;
    job.cached = false;
    job.compute_ready_s = -1.0;
    job.compute_start_slot = -1;
    ++job.version;
    job.variant_in_flight = -1;
    invalidated.push_back(static_cast<int>(j));
  }
  return invalidated;
}

}  // namespace vrsim
