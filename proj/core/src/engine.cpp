#include "vrsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "vrsim/rng.hpp"

namespace vrsim {

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed: return "proposed";
    case Scheme::kBaseline1: return "baseline1";
    case Scheme::kBaseline2: return "baseline2";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "proposed") return Scheme::kProposed;
  if (name == "baseline1") return Scheme::kBaseline1;
  if (name == "baseline2") return Scheme::kBaseline2;
  throw std::invalid_argument("unknown scheme: " + name);
}

double percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("percentile: empty sample set");
  if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile: p must be in [0, 100]");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<long>(samples.size());
  long rank = static_cast<long>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp(rank, 1L, n);
  return samples[static_cast<std::size_t>(rank - 1)];
}

void RunConfig::validate() const {
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("run: epsilon must be in (0, 1)");
  if (d_th_s <= 0.0) throw std::invalid_argument("run: d_th_s must be positive");
  if (slot_s <= 0.0) throw std::invalid_argument("run: slot_s must be positive");
  if (epoch_s < slot_s) throw std::invalid_argument("run: epoch_s must be >= slot_s");
  if (total_slots < 1) throw std::invalid_argument("run: total_slots must be >= 1");
  if (workload.frame_cadence_slots != epoch_slots())
    throw std::invalid_argument("run: frame cadence must equal the epoch length");
  if (deadline_slots() > epoch_slots())
    throw std::invalid_argument("run: delivery budget cannot exceed the epoch length");
  scenario.validate();
  channel.validate();
  workload.validate();
  fog.validate();
  matching.validate();
}

std::optional<long> comm_delay_slots(double hd_bits, std::span<const double> rates_bps,
                                     double slot_duration_s) {
  if (hd_bits <= 0.0) return 0;
  double delivered = 0.0;
  long slots = 0;
  for (double r : rates_bps) {
    ++slots;
    delivered += r * slot_duration_s;
    if (delivered >= hd_bits) return slots;
  }
  return std::nullopt;
}

bool admit(double utility_value) { return utility_value >= 0.0; }

namespace {

struct LinkGeo {
  LinkVisibility vis;
  double pathloss = 0.0;
  double az_ap_to_player = 0.0;
  double az_player_to_ap = 0.0;
  double est_fading = 1.0;  // epoch estimate used for preferences
};

}  // namespace

struct Simulation::Impl {
  RunConfig cfg;
  long epoch_slots = 0;
  long deadline_slots = 0;

  ArcadeScenario scenario;
  FrameCatalog catalog;
  ImpulseModel impulses;
  std::vector<FrameJob> jobs;  // player-major
  ComputeFabric fabric;

  std::mt19937_64 pose_rng, impulse_rng, fading_rng;

  long slot = 0;
  int epoch_index = -1;
  double tau = 0.0;
  PreferenceProfile profile;
  MatchState match;
  ServiceMap service;
  std::vector<LinkGeo> geo;  // ap-major, refreshed per epoch

  std::vector<double> rate_sum;  // realized service rates, per player
  std::vector<long> rate_cnt;
  std::vector<double> bits_done;   // per player, current frame
  std::vector<double> tx_start_s;  // per player, -1 when idle

  std::vector<ScheduleDecision> decisions;
  std::vector<DeliveryRecord> deliveries;
  std::ostream* impulse_trace = nullptr;
  std::ostream* decision_stream = nullptr;
  MetricsReport report;

  explicit Impl(RunConfig config)
      : cfg(std::move(config)),
        scenario(generate_arcade(cfg.scenario, derive_seed(cfg.seed, 1))),
        fabric(cfg.fog),
        pose_rng(make_rng(cfg.seed, 2)),
        impulse_rng(make_rng(cfg.seed, 3)),
        fading_rng(make_rng(cfg.seed, 4)) {
    cfg.validate();
    epoch_slots = cfg.epoch_slots();
    deadline_slots = cfg.deadline_slots();

    auto catalog_rng = make_rng(cfg.seed, 5);
    catalog = build_catalog(cfg.scenario.n_players, cfg.workload.frames_per_player,
                            cfg.workload.mean_hd_bits, cfg.workload.lq_ratio,
                            cfg.workload.frame_cadence_slots, catalog_rng);
    auto impulse_model_rng = make_rng(cfg.seed, 6);
    impulses = build_impulse_model(cfg.scenario.n_players, cfg.workload, impulse_model_rng);

    jobs.reserve(catalog.frames.size());
    for (int u = 0; u < catalog.n_players; ++u) {
      for (int f = 0; f < catalog.frames_per_player; ++f) {
        FrameJob j;
        j.player = u;
        j.frame = f;
        j.request_slot = catalog.at(u, f).due_slot;
        jobs.push_back(std::move(j));
      }
    }

    const int u_count = cfg.scenario.n_players;
    rate_sum.assign(static_cast<std::size_t>(u_count), 0.0);
    rate_cnt.assign(static_cast<std::size_t>(u_count), 0);
    bits_done.assign(static_cast<std::size_t>(u_count), 0.0);
    tx_start_s.assign(static_cast<std::size_t>(u_count), -1.0);

    report.scheme = cfg.scheme;
    report.n_players = cfg.scenario.n_players;
    report.n_mmaps = cfg.scenario.n_mmaps;
    report.seed = cfg.seed;
  }

  int n_aps() const { return cfg.scenario.n_mmaps; }
  int n_players() const { return cfg.scenario.n_players; }
  int job_index(int player, int frame) const {
    return player * catalog.frames_per_player + frame;
  }
  const LinkGeo& link(int ap, int player) const {
    return geo[static_cast<std::size_t>(ap) * n_players() + player];
  }

  /// The frame a player is expected to stream during the current epoch.
  int current_job(int player) const {
    const int f = static_cast<int>(slot / epoch_slots);
    if (f >= catalog.frames_per_player) return -1;
    return job_index(player, f);
  }

  double avg_rate(int player) const {
    return rate_cnt[player] > 0 ? rate_sum[player] / static_cast<double>(rate_cnt[player])
                                : 0.0;
  }

  double rx_gain(int ap, int player) const {
    const LinkGeo& g = link(ap, player);
    const double dev = scenario.players[player].yaw - g.az_player_to_ap;
    return antenna_gain(scenario.mmaps[ap].beam_beamwidth_rad, dev,
                        cfg.channel.sidelobe_gain);
  }

  double tx_gain_towards(int ap, int player) const {
    const LinkGeo& g = link(ap, player);
    const double dev = scenario.mmaps[ap].boresight_rad - g.az_ap_to_player;
    return antenna_gain(scenario.mmaps[ap].beam_beamwidth_rad, dev,
                        cfg.channel.sidelobe_gain);
  }

  void refresh_links() {
    geo.resize(static_cast<std::size_t>(n_aps()) * n_players());
    for (int a = 0; a < n_aps(); ++a) {
      const MmApState& ap = scenario.mmaps[a];
      for (int u = 0; u < n_players(); ++u) {
        const PlayerState& p = scenario.players[u];
        LinkGeo g;
        g.vis = los_status(ap, p, scenario.players, cfg.scenario.blocker_diameter_m);
        g.pathloss = pathloss(distance(ap.position, p.position), g.vis.state, cfg.channel);
        g.az_ap_to_player = azimuth(floor_projection(ap.position), floor_projection(p.position));
        g.az_player_to_ap = azimuth(floor_projection(p.position), floor_projection(ap.position));
        g.est_fading = sample_fading(g.vis.state, cfg.channel, fading_rng);
        geo[static_cast<std::size_t>(a) * n_players() + u] = g;
      }
    }
  }

  /// Eq. 3 with the epoch estimate fading and a tentative service map;
  /// boresights follow the tentative matching (perfect steering).
  double estimate_sinr(int player, const ServiceMap& sm) const {
    const double mainlobe = antenna_gain(cfg.scenario.beam_beamwidth_rad, 0.0,
                                         cfg.channel.sidelobe_gain);
    double signal = 0.0;
    double interference = 0.0;
    for (int a = 0; a < n_aps(); ++a) {
      const int served = sm.served[a];
      if (served < 0) continue;
      const LinkGeo& g = link(a, player);
      const double rx = rx_gain(a, player);
      const double base = scenario.mmaps[a].tx_power_w * g.pathloss * g.est_fading * rx;
      if (served == player) {
        signal += base * mainlobe;
      } else {
        const double dev = link(a, served).az_ap_to_player - g.az_ap_to_player;
        interference += base * antenna_gain(cfg.scenario.beam_beamwidth_rad, dev,
                                            cfg.channel.sidelobe_gain);
      }
    }
    return signal /
           (interference + cfg.channel.noise_density_w_hz * cfg.channel.bandwidth_hz);
  }

  void begin_epoch() {
    epoch_index = static_cast<int>(slot / epoch_slots);
    refresh_links();

    const int frame = epoch_index;
    const bool has_frames = frame < catalog.frames_per_player;

    // Real-time jobs still waiting for a server; the wave arriving this
    // epoch negotiates admission against this backlog.
    std::vector<double> queued_bits;
    std::vector<double> queued_rates;
    for (const FrameJob& j : jobs) {
      if (j.status == JobStatus::kPending && j.request_slot >= 0 && j.request_slot < slot &&
          j.request_slot + deadline_slots > slot) {
        queued_bits.push_back(catalog.at(j.player, j.frame).hd_bits);
        queued_rates.push_back(avg_rate(j.player));
      }
    }

    const ServiceMap prev = service.served.empty()
                                ? ServiceMap{std::vector<int>(n_aps(), -1)}
                                : service;
    const double mainlobe = antenna_gain(cfg.scenario.beam_beamwidth_rad, 0.0,
                                         cfg.channel.sidelobe_gain);

    std::vector<double> gains(static_cast<std::size_t>(n_aps()) * n_players());
    std::vector<double> utilities(gains.size(),
                                  -std::numeric_limits<double>::infinity());
    for (int a = 0; a < n_aps(); ++a) {
      for (int u = 0; u < n_players(); ++u) {
        const LinkGeo& g = link(a, u);
        const double composite = g.pathloss * g.est_fading * mainlobe * rx_gain(a, u);
        gains[static_cast<std::size_t>(a) * n_players() + u] = composite;
        if (!has_frames) continue;

        // Candidate rate: a serves u, every other current association persists.
        ServiceMap tentative = prev;
        for (int a2 = 0; a2 < n_aps(); ++a2) {
          if (tentative.served[a2] == u) tentative.served[a2] = -1;
        }
        tentative.served[a] = u;
        const double cand_rate =
            rate_bps(estimate_sinr(u, tentative), tau, cfg.channel.bandwidth_hz);
        const double r_bar = (rate_sum[u] + cand_rate) / (rate_cnt[u] + 1.0);

        const double hd_bits = catalog.at(u, frame).hd_bits;
        const double cp =
            compute_time(hd_bits, cfg.fog.cycles_per_s, cfg.fog.cycles_per_bit);
        utilities[static_cast<std::size_t>(a) * n_players() + u] =
            association_utility(cfg.d_th_s, cfg.epsilon, queued_bits, queued_rates,
                                hd_bits, cp, r_bar);
      }
    }

    profile = build_preferences(n_aps(), n_players(), gains, utilities);
    MatchingParams mp = cfg.matching;
    mp.allow_splitting = cfg.multi_connectivity();
    SinrEvaluator eval = [this](int player, const ServiceMap& sm) {
      return estimate_sinr(player, sm);
    };
    match = deferred_acceptance(profile, mp, eval);
    service = match.to_service_map();
    if (!match.consistent()) {
      ++report.matching_violations;
      throw std::runtime_error("engine: matching violates one-to-one structure");
    }

    std::vector<std::pair<int, int>> associations;
    for (int a = 0; a < n_aps(); ++a) {
      const int u = service.served[a];
      if (u < 0) continue;
      scenario.mmaps[a].boresight_rad = link(a, u).az_ap_to_player;
      associations.emplace_back(a, u);
    }
    tau = alignment_overhead(associations, scenario.mmaps, cfg.channel, cfg.epoch_s);
  }

  void handle_impulses() {
    const auto events = sample_impulses(impulses, cfg.slot_s, impulse_rng);
    for (int action : events) {
      if (impulse_trace) (*impulse_trace) << slot << ',' << action << '\n';
      std::vector<int> promoted;
      const auto invalidated = apply_impulse(action, impulses, jobs, &promoted);
      for (int j : promoted) {
        fabric.cache().promote_variant(j, action);
        jobs[j].compute_ready_s = 0.0;  // cached content: no computing delay
      }
      for (int j : invalidated) {
        fabric.cache().mark_stale_all(j);
        jobs[j].rerequest_slot = slot;
      }
    }
  }

  void on_evicted(const CacheEntry& e) {
    FrameJob& job = jobs[e.job];
    if (job.terminal()) return;
    if (e.variant_action >= 0) {
      std::erase(job.variant_actions, e.variant_action);
      return;
    }
    // a promotion can leave a second, live base copy behind
    if (fabric.cache().contains(e.job, -1)) return;
    job.cached = false;
    if (job.status == JobStatus::kCached) {
      job.status = JobStatus::kPending;
      job.scheduled = false;
      job.compute_ready_s = -1.0;
      ++job.version;
    }
  }

  void run_scheduler() {
    auto batch = schedule_computing(fabric, jobs, catalog, impulses, slot, epoch_slots,
                                    epoch_slots, static_cast<double>(slot) * cfg.slot_s,
                                    cfg.proactive());
    for (const auto& d : batch) {
      if (decision_stream) {
        (*decision_stream) << "slot=" << d.slot << " priority=" << d.priority
                           << " server=" << d.server << " player=" << d.player
                           << " frame=" << d.frame << " variant=" << d.variant_action
                           << " cache=" << (d.cache_on_complete ? 1 : 0) << '\n';
      }
      decisions.push_back(d);
    }
  }

  void progress_computing() {
    const double slot_end = static_cast<double>(slot + 1) * cfg.slot_s;
    for (auto& srv : fabric.servers()) {
      if (!srv.busy || srv.free_at_s > slot_end) continue;
      FrameJob& job = jobs[srv.job];
      const bool valid = srv.job_version == job.version && !job.terminal();
      if (valid) {
        if (srv.variant_action >= 0) {
          auto res = fabric.cache().insert(srv.job, srv.variant_action);
          if (res.evicted) on_evicted(*res.evicted);
          if (res.inserted) job.variant_actions.push_back(srv.variant_action);
          job.variant_in_flight = -1;
        } else {
          job.compute_ready_s = srv.free_at_s;
          if (srv.cache_on_complete) {
            auto res = fabric.cache().insert(srv.job, -1);
            if (res.evicted) on_evicted(*res.evicted);
            if (res.inserted) {
              job.cached = true;
              job.status = JobStatus::kCached;
            } else {
              job.status = JobStatus::kComputed;  // zero-capacity cache
            }
          } else {
            job.status = JobStatus::kComputed;
          }
        }
      } else if (srv.variant_action >= 0 && srv.job_version == job.version) {
        job.variant_in_flight = -1;
      }
      srv.busy = false;
      srv.job = -1;
      srv.variant_action = -1;
      srv.cache_on_complete = false;
    }
  }

  bool delivery_ready(const FrameJob& job, double now_s) const {
    if (job.terminal() || job.request_slot > slot) return false;
    if (job.status == JobStatus::kDelivering) return true;
    if (job.status != JobStatus::kComputed && job.status != JobStatus::kCached) return false;
    return job.compute_ready_s >= 0.0 && job.compute_ready_s <= now_s;
  }

  void progress_transmissions() {
    const double now_s = static_cast<double>(slot) * cfg.slot_s;
    std::vector<int> receivers;
    for (int u = 0; u < n_players(); ++u) {
      const int j = current_job(u);
      if (j < 0) continue;
      if (!delivery_ready(jobs[j], now_s)) continue;
      if (match.clones_of.empty() || match.serving_aps(u).empty()) continue;
      receivers.push_back(u);
    }
    if (receivers.empty()) return;

    ServiceMap active{std::vector<int>(static_cast<std::size_t>(n_aps()), -1)};
    for (int u : receivers) {
      for (int a : match.serving_aps(u)) active.served[a] = u;
    }

    // Per-slot fading redraw, fixed (ap, receiver) order for determinism.
    std::vector<LinkState> links(static_cast<std::size_t>(n_aps()));
    for (int u : receivers) {
      for (int a = 0; a < n_aps(); ++a) {
        const LinkGeo& g = link(a, u);
        LinkState ls;
        ls.ap = a;
        ls.player = u;
        ls.visibility = g.vis;
        ls.pathloss = g.pathloss;
        ls.fading = active.served[a] >= 0
                        ? sample_fading(g.vis.state, cfg.channel, fading_rng)
                        : 1.0;
        ls.tx_gain = tx_gain_towards(a, u);
        ls.rx_gain = rx_gain(a, u);
        links[static_cast<std::size_t>(a)] = ls;
      }
      const double gamma = sinr_linear(u, active, links, scenario.mmaps, cfg.channel);
      const double r = rate_bps(gamma, tau, cfg.channel.bandwidth_hz);
      if (r <= 0.0) continue;

      FrameJob& job = jobs[current_job(u)];
      if (job.status != JobStatus::kDelivering) {
        job.status = JobStatus::kDelivering;
        tx_start_s[u] = now_s;
        bits_done[u] = 0.0;
      }
      rate_sum[u] += r;
      ++rate_cnt[u];

      const double hd_bits = catalog.at(u, job.frame).hd_bits;
      bits_done[u] += r * cfg.slot_s;
      if (bits_done[u] >= hd_bits) {
        const double excess = bits_done[u] - hd_bits;
        const double fraction = 1.0 - excess / (r * cfg.slot_s);
        finalize_hd(job, now_s + fraction * cfg.slot_s);
      }
    }
  }

  void finalize_hd(FrameJob& job, double delivery_end_s) {
    job.status = JobStatus::kDeliveredHd;
    job.delivery_end_s = delivery_end_s;
    const double anchor_s =
        static_cast<double>(std::max(job.request_slot, job.rerequest_slot)) * cfg.slot_s;
    const double cp = std::max(0.0, job.compute_ready_s - anchor_s);
    const double cm = delivery_end_s - tx_start_s[job.player];
    DeliveryRecord rec;
    rec.player = job.player;
    rec.frame = job.frame;
    rec.hd = true;
    rec.compute_delay_s = cp;
    rec.comm_delay_s = cm;
    rec.total_delay_s = cp + cm + cfg.fog.edge_processing_s;
    rec.slots_used = static_cast<long>(std::ceil(cm / cfg.slot_s));
    rec.scheme = cfg.scheme;
    deliveries.push_back(rec);

    report.comm_samples_s.push_back(cm);
    report.compute_samples_s.push_back(cp);
    report.e2e_samples_s.push_back(rec.total_delay_s);
    ++report.hd_delivered;
    if (rec.total_delay_s >= cfg.d_th_s) ++report.admitted_hd_over_threshold;

    fabric.cache().erase_all(job_index(job.player, job.frame));
    bits_done[job.player] = 0.0;
    tx_start_s[job.player] = -1.0;
  }

  void finalize_deadlines() {
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      FrameJob& job = jobs[j];
      if (job.terminal() || job.request_slot < 0) continue;
      if (job.request_slot + deadline_slots != slot + 1) continue;

      // HD missed its budget: the mmHMD falls back to the locally processed
      // LQ frame and the HD transmission is abandoned.
      const double request_s = static_cast<double>(job.request_slot) * cfg.slot_s;
      const double anchor_s =
          static_cast<double>(std::max(job.request_slot, job.rerequest_slot)) * cfg.slot_s;
      const double deadline_s = request_s + cfg.d_th_s;
      const bool ready_in_time =
          job.compute_ready_s >= 0.0 && job.compute_ready_s <= deadline_s;
      DeliveryRecord rec;
      rec.player = job.player;
      rec.frame = job.frame;
      rec.hd = false;
      rec.compute_delay_s =
          ready_in_time ? std::max(0.0, job.compute_ready_s - anchor_s) : cfg.d_th_s;
      rec.scheme = cfg.scheme;
      deliveries.push_back(rec);
      report.compute_samples_s.push_back(rec.compute_delay_s);
      ++report.lq_delivered;

      job.status = JobStatus::kDeliveredLq;
      ++job.version;  // discard any in-flight render
      fabric.cache().erase_all(static_cast<int>(j));
      bits_done[job.player] = 0.0;
      tx_start_s[job.player] = -1.0;
    }
  }

  bool needs_service(int player) const {
    const int j = current_job(player);
    return j >= 0 && !jobs[j].terminal();
  }

  /// Players are matched once per epoch, but an mmAP whose delivery finished
  /// would otherwise idle out the rest of it. Freed mmAPs are re-matched to
  /// the still-unserved players through the same matching game on the
  /// residual instance, using the epoch's preference profile.
  void rematch_freed() {
    if (profile.n_aps == 0) return;
    std::vector<int> free_aps;
    for (int a = 0; a < n_aps(); ++a) {
      const int c = match.ap_to_clone[a];
      if (c >= 0) {
        if (needs_service(match.clone_owner[c])) continue;
        match.clone_to_ap[c] = -1;  // owner done with this epoch's frame
        match.ap_to_clone[a] = -1;
      }
      free_aps.push_back(a);
    }
    if (free_aps.empty()) return;

    std::vector<int> needy;
    for (int u = 0; u < n_players(); ++u) {
      if (needs_service(u) && match.serving_aps(u).empty()) needy.push_back(u);
    }
    if (needy.empty()) {
      service = match.to_service_map();
      return;
    }

    std::vector<double> gains(free_aps.size() * needy.size());
    std::vector<double> utilities(gains.size());
    for (std::size_t ai = 0; ai < free_aps.size(); ++ai) {
      for (std::size_t ui = 0; ui < needy.size(); ++ui) {
        gains[ai * needy.size() + ui] = profile.gain_of(free_aps[ai], needy[ui]);
        utilities[ai * needy.size() + ui] =
            profile.utility_of(free_aps[ai], needy[ui]);
      }
    }
    const auto sub = build_preferences(static_cast<int>(free_aps.size()),
                                       static_cast<int>(needy.size()), gains,
                                       utilities);
    MatchingParams mp = cfg.matching;
    mp.allow_splitting = cfg.multi_connectivity();
    SinrEvaluator eval;
    if (mp.allow_splitting) {
      // residual indices lifted into the full service map
      eval = [this, &free_aps, &needy](int ui, const ServiceMap& sub_map) {
        ServiceMap global = match.to_service_map();
        for (std::size_t ai = 0; ai < free_aps.size(); ++ai) {
          const int served = sub_map.served[ai];
          global.served[free_aps[ai]] = served >= 0 ? needy[served] : -1;
        }
        return estimate_sinr(needy[ui], global);
      };
    }
    const MatchState residual = deferred_acceptance(sub, mp, eval);

    for (std::size_t ai = 0; ai < free_aps.size(); ++ai) {
      const int rc = residual.ap_to_clone[ai];
      if (rc < 0) continue;
      const int a = free_aps[ai];
      const int u = needy[residual.clone_owner[rc]];
      const int c = static_cast<int>(match.clone_owner.size());
      match.clone_owner.push_back(u);
      match.clone_to_ap.push_back(a);
      match.clones_of[u].push_back(c);
      match.ap_to_clone[a] = c;
      scenario.mmaps[a].boresight_rad = link(a, u).az_ap_to_player;
    }
    service = match.to_service_map();
  }

  void check_invariants() {
    if (static_cast<int>(fabric.cache().size()) > cfg.fog.cache_capacity) {
      ++report.cache_violations;
      throw std::runtime_error("engine: cache capacity exceeded");
    }
    if (fabric.busy_count() > cfg.fog.n_servers) {
      ++report.compute_violations;
      throw std::runtime_error("engine: concurrent computing jobs exceed server count");
    }
    for (const PlayerState& p : scenario.players) {
      if (!scenario.inside_pod(p)) {
        throw std::runtime_error("engine: player escaped its pod");
      }
    }
  }

  void step() {
    for (auto& p : scenario.players) p = step_pose(p, scenario, pose_rng, cfg.slot_s);
    handle_impulses();
    if (slot % epoch_slots == 0) begin_epoch();
    run_scheduler();
    progress_computing();
    progress_transmissions();
    finalize_deadlines();
    rematch_freed();
    check_invariants();
    ++slot;
  }

  MetricsReport finalize_report() {
    auto mean = [](const std::vector<double>& v) {
      if (v.empty()) return 0.0;
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    report.mean_comm_s = mean(report.comm_samples_s);
    report.p90_comm_s =
        report.comm_samples_s.empty() ? 0.0 : percentile(report.comm_samples_s, 90.0);
    report.mean_compute_s = mean(report.compute_samples_s);
    report.mean_e2e_s = mean(report.e2e_samples_s);
    const long total = report.hd_delivered + report.lq_delivered;
    report.hd_ratio =
        total > 0 ? static_cast<double>(report.hd_delivered) / static_cast<double>(total)
                  : 0.0;
    return report;
  }
};

Simulation::Simulation(RunConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Simulation::~Simulation() = default;

void Simulation::step() { impl_->step(); }

MetricsReport Simulation::run() {
  while (impl_->slot < impl_->cfg.total_slots) impl_->step();
  return impl_->finalize_report();
}

long Simulation::slot() const { return impl_->slot; }
const ArcadeScenario& Simulation::scenario() const { return impl_->scenario; }
const ComputeFabric& Simulation::fabric() const { return impl_->fabric; }
std::span<const FrameJob> Simulation::jobs() const { return impl_->jobs; }
const std::vector<ScheduleDecision>& Simulation::decision_log() const {
  return impl_->decisions;
}
const std::vector<DeliveryRecord>& Simulation::delivery_log() const {
  return impl_->deliveries;
}
void Simulation::set_impulse_trace(std::ostream* out) { impl_->impulse_trace = out; }
void Simulation::set_decision_log_stream(std::ostream* out) {
  impl_->decision_stream = out;
}

MetricsReport run(const RunConfig& config) {
  Simulation sim(config);
  return sim.run();
}

}  // namespace vrsim
