#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "vrsim/channel.hpp"
#include "vrsim/rng.hpp"

using namespace vrsim;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("pathloss at the reference distance is C") {
  ChannelParams p;
  CHECK(pathloss(1.0, Visibility::kLos, p) == doctest::Approx(p.ref_pathloss));
}

TEST_CASE("LOS pathloss follows the exponent") {
  ChannelParams p;
  p.ref_pathloss = 1.0;
  p.alpha_los = 2.0;
  CHECK(pathloss(10.0, Visibility::kLos, p) == doctest::Approx(1e-2));
}

TEST_CASE("NLOS never beats LOS beyond a metre") {
  ChannelParams p;
  for (double d : {1.0, 2.0, 5.0, 20.0}) {
    CHECK(pathloss(d, Visibility::kNlos, p) <=
          pathloss(d, Visibility::kLos, p) + 1e-18);
  }
}

TEST_CASE("zero distance is rejected") {
  ChannelParams p;
  CHECK_THROWS_AS(pathloss(0.0, Visibility::kLos, p), std::invalid_argument);
}

TEST_CASE("fading power is unit mean with Gamma variance") {
  ChannelParams p;
  p.m_los = 3.0;
  auto rng = make_rng(9, 0);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = sample_fading(Visibility::kLos, p, rng);
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.005));
  CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.03));  // Gamma(m, 1/m)
}

TEST_CASE("large shape factor concentrates fading at one") {
  ChannelParams p;
  p.m_los = 1e6;
  auto rng = make_rng(9, 1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample_fading(Visibility::kLos, p, rng) == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("mainlobe gain of a 30 degree beam") {
  const double g = antenna_gain(kPi / 6.0, 0.0, 0.1);
  CHECK(g == doctest::Approx(10.9).epsilon(0.001));
}

TEST_CASE("deviation beyond half the beamwidth lands in the sidelobe") {
  CHECK(antenna_gain(kPi / 6.0, kPi / 6.0, 0.1) == doctest::Approx(0.1));
  CHECK(antenna_gain(kPi / 3.0, -2.0, 0.05) == doctest::Approx(0.05));
}

TEST_CASE("antenna pattern conserves power") {
  for (int i = 1; i <= 40; ++i) {
    const double phi = 2.0 * kPi * i / 41.0;
    for (int j = 1; j <= 25; ++j) {
      const double gsl = j / 26.0;
      const double gm = antenna_gain(phi, 0.0, gsl);
      CHECK(phi * gm + (2.0 * kPi - phi) * gsl ==
            doctest::Approx(2.0 * kPi).epsilon(1e-13));
    }
  }
}

TEST_CASE("alignment overhead for one pair is three pilot times") {
  ChannelParams p;  // T_p = 10 us
  std::vector<MmApState> aps(1);
  aps[0].sector_beamwidth_rad = kPi / 2.0;  // 90 deg
  aps[0].beam_beamwidth_rad = kPi / 6.0;    // 30 deg
  std::vector<std::pair<int, int>> assoc = {{0, 0}};
  const double tau = alignment_overhead(assoc, aps, p, 0.1);
  CHECK(tau == doctest::Approx(3.0 * 10e-6 / 0.1));
}

TEST_CASE("alignment overhead is additive and empty-safe") {
  ChannelParams p;
  std::vector<MmApState> aps(1);
  aps[0].sector_beamwidth_rad = kPi / 2.0;
  aps[0].beam_beamwidth_rad = kPi / 6.0;
  std::vector<std::pair<int, int>> none;
  CHECK(alignment_overhead(none, aps, p, 0.1) == 0.0);
  std::vector<std::pair<int, int>> two = {{0, 0}, {0, 1}};
  std::vector<std::pair<int, int>> one = {{0, 0}};
  CHECK(alignment_overhead(two, aps, p, 0.1) ==
        doctest::Approx(2.0 * alignment_overhead(one, aps, p, 0.1)));
}

TEST_CASE("alignment consuming the whole interval is a config error") {
  ChannelParams p;
  std::vector<MmApState> aps(1);
  aps[0].sector_beamwidth_rad = kPi / 2.0;
  aps[0].beam_beamwidth_rad = kPi / 6.0;
  std::vector<std::pair<int, int>> assoc(40000, {0, 0});  // 40000 * 30 us > 1 s
  CHECK_THROWS_AS(alignment_overhead(assoc, aps, p, 1.0), std::runtime_error);
}

namespace {

LinkState make_link(int ap, int player, double pl, double fading, double tx, double rx) {
  LinkState l;
  l.ap = ap;
  l.player = player;
  l.pathloss = pl;
  l.fading = fading;
  l.tx_gain = tx;
  l.rx_gain = rx;
  return l;
}

}  // namespace

TEST_CASE("single serving AP reduces to the SNR closed form") {
  ChannelParams p;
  auto rng = make_rng(31, 0);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<MmApState> aps(1);
    aps[0].tx_power_w = unit(rng) * 0.02;
    const double pl = unit(rng) * 1e-8;
    const double tx = unit(rng) * 10.0;
    const double rx = unit(rng) * 10.0;
    std::vector<LinkState> links = {make_link(0, 0, pl, 1.0, tx, rx)};
    ServiceMap sm{{0}};
    const double expected =
        aps[0].tx_power_w * pl * tx * rx / (p.noise_density_w_hz * p.bandwidth_hz);
    CHECK(sinr_linear(0, sm, links, aps, p) == doctest::Approx(expected));
  }
}

TEST_CASE("joint transmission doubles the received power") {
  ChannelParams p;
  std::vector<MmApState> aps(2);
  aps[0].tx_power_w = aps[1].tx_power_w = 0.01;
  std::vector<LinkState> links = {make_link(0, 0, 1e-9, 1.0, 5.0, 5.0),
                                  make_link(1, 0, 1e-9, 1.0, 5.0, 5.0)};
  ServiceMap both{{0, 0}};
  ServiceMap solo{{0, -1}};
  CHECK(sinr_linear(0, both, links, aps, p) ==
        doctest::Approx(2.0 * sinr_linear(0, solo, links, aps, p)));
}

TEST_CASE("an active interferer strictly lowers the SINR") {
  ChannelParams p;
  std::vector<MmApState> aps(2);
  aps[0].tx_power_w = aps[1].tx_power_w = 0.01;
  std::vector<LinkState> links = {make_link(0, 0, 1e-9, 1.0, 5.0, 5.0),
                                  make_link(1, 0, 2e-9, 1.0, 5.0, 5.0)};
  ServiceMap quiet{{0, -1}};
  ServiceMap busy{{0, 1}};  // second AP serves someone else
  CHECK(sinr_linear(0, busy, links, aps, p) < sinr_linear(0, quiet, links, aps, p));
}

TEST_CASE("rate formula endpoints") {
  CHECK(rate_bps(1.0, 0.0, 1e9) == doctest::Approx(1e9));
  CHECK(rate_bps(0.0, 0.3, 2e9) == 0.0);
  CHECK(rate_bps(3.0, 0.5, 1e9) == doctest::Approx(0.5 * rate_bps(3.0, 0.0, 1e9)));
}

TEST_CASE("rate is monotone in SINR and alignment overhead") {
  CHECK(rate_bps(2.0, 0.1, 1e9) > rate_bps(1.0, 0.1, 1e9));
  CHECK(rate_bps(2.0, 0.2, 1e9) < rate_bps(2.0, 0.1, 1e9));
}
