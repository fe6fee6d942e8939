#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vrsim/rng.hpp"
#include "vrsim/workload.hpp"

using namespace vrsim;

TEST_CASE("catalog sizes are exponential with the configured mean") {
  auto rng = make_rng(3, 0);
  auto cat = build_catalog(1000, 1000, 2e9, 0.005, 100, rng);
  double sum = 0.0;
  for (const auto& f : cat.frames) sum += f.hd_bits;
  CHECK(sum / cat.frames.size() == doctest::Approx(2e9).epsilon(0.005));
}

TEST_CASE("LQ frames are at least a hundred times smaller") {
  auto rng = make_rng(3, 1);
  auto cat = build_catalog(16, 50, 2e9, 0.005, 100, rng);
  for (const auto& f : cat.frames) CHECK(f.lq_bits < f.hd_bits / 100.0);
}

TEST_CASE("due slots strictly increase per player") {
  auto rng = make_rng(3, 2);
  auto cat = build_catalog(4, 10, 1e9, 0.005, 100, rng);
  for (int u = 0; u < 4; ++u) {
    for (int f = 1; f < 10; ++f) CHECK(cat.at(u, f).due_slot > cat.at(u, f - 1).due_slot);
  }
}

TEST_CASE("single frame catalog and determinism") {
  auto r1 = make_rng(77, 0);
  auto r2 = make_rng(77, 0);
  auto a = build_catalog(8, 1, 1e9, 0.005, 100, r1);
  auto b = build_catalog(8, 1, 1e9, 0.005, 100, r2);
  REQUIRE(a.frames.size() == 8);
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    CHECK(a.frames[i].hd_bits == b.frames[i].hd_bits);
  }
}

namespace {

WorkloadParams default_workload() { return WorkloadParams{}; }

std::vector<long> draw_histogram(double z, int n_actions, int draws) {
  WorkloadParams p = default_workload();
  p.zipf_exponent = z;
  p.n_actions = n_actions;
  p.impulse_rate_per_s = 1000.0;  // one expected event per 1 ms slot
  auto model_rng = make_rng(5, 0);
  auto model = build_impulse_model(16, p, model_rng);
  auto rng = make_rng(5, 1);
  std::vector<long> hist(static_cast<std::size_t>(n_actions), 0);
  int total = 0;
  while (total < draws) {
    for (int a : sample_impulses(model, 1e-3, rng)) {
      ++hist[a];
      ++total;
    }
  }
  return hist;
}

}  // namespace

TEST_CASE("Zipf rank-1 to rank-2 frequency ratio") {
  const auto hist = draw_histogram(0.8, 100, 1000000);
  const double ratio = static_cast<double>(hist[0]) / static_cast<double>(hist[1]);
  CHECK(ratio == doctest::Approx(std::pow(2.0, 0.8)).epsilon(0.015));
}

TEST_CASE("zero exponent degenerates to uniform") {
  const int n = 20;
  const auto hist = draw_histogram(0.0, n, 200000);
  double chi2 = 0.0;
  const double expected = 200000.0 / n;
  long total = 0;
  for (long h : hist) total += h;
  for (long h : hist) {
    const double scaled = static_cast<double>(h) * 200000.0 / total;
    chi2 += (scaled - expected) * (scaled - expected) / expected;
  }
  CHECK(chi2 < 36.191);  // chi-square df=19, significance 0.01
}

TEST_CASE("zero arrival rate yields no impulses") {
  WorkloadParams p;
  p.impulse_rate_per_s = 0.0;
  auto model_rng = make_rng(5, 2);
  auto model = build_impulse_model(8, p, model_rng);
  auto rng = make_rng(5, 3);
  for (int i = 0; i < 1000; ++i) CHECK(sample_impulses(model, 1e-3, rng).empty());
}

TEST_CASE("every action impacts someone") {
  WorkloadParams p;
  p.impact_prob = 0.01;  // provoke empty columns before the resample
  auto rng = make_rng(5, 4);
  auto model = build_impulse_model(4, p, rng);
  for (const auto& list : model.impacted) CHECK_FALSE(list.empty());
}

namespace {

std::vector<FrameJob> three_jobs() {
  std::vector<FrameJob> jobs(3);
  for (int i = 0; i < 3; ++i) {
    jobs[i].player = i;
    jobs[i].frame = 0;
    jobs[i].request_slot = 0;
  }
  return jobs;
}

ImpulseModel impact_only(int n_players, int action, std::vector<int> players) {
  ImpulseModel m;
  m.n_players = n_players;
  m.n_actions = action + 1;
  m.popularity.assign(static_cast<std::size_t>(m.n_actions), 1.0 / m.n_actions);
  m.impacted.resize(static_cast<std::size_t>(m.n_actions));
  m.theta.assign(static_cast<std::size_t>(n_players) * m.n_actions, 0);
  for (int u : players) {
    m.theta[static_cast<std::size_t>(u) * m.n_actions + action] = 1;
    m.impacted[action].push_back(u);
  }
  return m;
}

}  // namespace

TEST_CASE("impulse resets only impacted undelivered rendered frames") {
  auto jobs = three_jobs();
  jobs[0].status = JobStatus::kCached;
  jobs[0].cached = true;
  jobs[1].status = JobStatus::kComputed;
  jobs[2].status = JobStatus::kComputed;
  const auto model = impact_only(3, 0, {0, 1});

  const auto invalidated = apply_impulse(0, model, jobs);
  REQUIRE(invalidated.size() == 2);
  CHECK(jobs[0].status == JobStatus::kPending);
  CHECK_FALSE(jobs[0].cached);
  CHECK(jobs[1].status == JobStatus::kPending);
  CHECK(jobs[2].status == JobStatus::kComputed);  // outside the impact set
}

TEST_CASE("delivered frames are never invalidated") {
  auto jobs = three_jobs();
  jobs[0].status = JobStatus::kDeliveredHd;
  jobs[1].status = JobStatus::kDeliveredLq;
  const auto model = impact_only(3, 0, {0, 1});
  const auto invalidated = apply_impulse(0, model, jobs);
  CHECK(invalidated.empty());
  CHECK(jobs[0].status == JobStatus::kDeliveredHd);
  CHECK(jobs[1].status == JobStatus::kDeliveredLq);
}

TEST_CASE("pending frames pass through unchanged") {
  auto jobs = three_jobs();
  const auto model = impact_only(3, 0, {0, 1, 2});
  const auto invalidated = apply_impulse(0, model, jobs);
  CHECK(invalidated.empty());
  for (const auto& j : jobs) CHECK(j.status == JobStatus::kPending);
}

TEST_CASE("a pre-rendered variant is promoted instead of discarded") {
  auto jobs = three_jobs();
  jobs[0].status = JobStatus::kComputed;
  jobs[0].variant_actions = {0, 3};
  ImpulseModel model = impact_only(3, 3, {0});
  std::vector<int> promoted;
  const auto invalidated = apply_impulse(3, model, jobs, &promoted);
  CHECK(invalidated.empty());
  REQUIRE(promoted.size() == 1);
  CHECK(promoted[0] == 0);
  CHECK(jobs[0].status == JobStatus::kCached);
  CHECK(jobs[0].cached);
  CHECK(jobs[0].variant_actions.empty());
}

TEST_CASE("invalidation count matches the impacted rendered population") {
  WorkloadParams p;
  auto model_rng = make_rng(6, 0);
  auto model = build_impulse_model(12, p, model_rng);
  std::vector<FrameJob> jobs(12 * 4);
  auto rng = make_rng(6, 1);
  std::uniform_int_distribution<int> st(0, 6);
  for (int u = 0; u < 12; ++u) {
    for (int f = 0; f < 4; ++f) {
      auto& j = jobs[u * 4 + f];
      j.player = u;
      j.frame = f;
      j.status = static_cast<JobStatus>(st(rng));
    }
  }
  const int action = 7;
  int expect = 0;
  for (const auto& j : jobs) {
    const bool rendered = j.status == JobStatus::kComputing ||
                          j.status == JobStatus::kComputed ||
                          j.status == JobStatus::kCached;
    if (rendered && model.impacts(j.player, action)) ++expect;
  }
  const auto invalidated = apply_impulse(action, model, jobs);
  CHECK(static_cast<int>(invalidated.size()) == expect);
}
