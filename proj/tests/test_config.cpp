#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vrsim/config.hpp"
#include "vrsim/plot.hpp"
#include "vrsim/sweep.hpp"

using namespace vrsim;

TEST_CASE("an empty file yields the defaults") {
  std::istringstream in("  \n\t");
  const auto cfg = load_config(in);
  CHECK(cfg.scheme == Scheme::kProposed);
  CHECK(cfg.d_th_s == doctest::Approx(0.1));
  CHECK(cfg.epsilon == doctest::Approx(0.1));
  CHECK(cfg.workload.n_actions == 100);
  CHECK(cfg.workload.zipf_exponent == doctest::Approx(0.8));
  CHECK(cfg.fog.cache_capacity == 320);
  CHECK(cfg.fog.n_servers == 16);
  CHECK(cfg.scenario.n_players == 64);
  CHECK(cfg.scenario.n_mmaps == 16);
}

TEST_CASE("values override defaults with unit conversion") {
  std::istringstream in(R"({
    // comments are fine
    "scheme": "baseline2",
    "d_th_ms": 80,
    "seed": 7,
    "scenario": {"n_players": 8, "tx_power_dbm": 20.0},
    "matching": {"sinr_threshold_db": 10.0},
    "workload": {"mean_hd_bits": 5e7}
  })");
  const auto cfg = load_config(in);
  CHECK(cfg.scheme == Scheme::kBaseline2);
  CHECK(cfg.d_th_s == doctest::Approx(0.08));
  CHECK(cfg.seed == 7);
  CHECK(cfg.scenario.n_players == 8);
  CHECK(cfg.scenario.tx_power_w == doctest::Approx(0.1));  // 20 dBm
  CHECK(cfg.matching.sinr_threshold_linear == doctest::Approx(10.0));
  CHECK(cfg.workload.mean_hd_bits == doctest::Approx(5e7));
}

TEST_CASE("rejecting out-of-range epsilon names the field") {
  std::istringstream in(R"({"epsilon": 1.5})");
  CHECK_THROWS_WITH_AS(load_config(in),
                       doctest::Contains("epsilon"), std::invalid_argument);
}

TEST_CASE("unknown and ill-typed fields are rejected by name") {
  std::istringstream a(R"({"bandwidht": 1.0})");
  CHECK_THROWS_WITH_AS(load_config(a),
                       doctest::Contains("bandwidht"), std::invalid_argument);
  std::istringstream b(R"({"channel": {"m_los": "three"}})");
  CHECK_THROWS_WITH_AS(load_config(b),
                       doctest::Contains("channel.m_los"), std::invalid_argument);
  std::istringstream c(R"({"scenario": {"n_players": 1.5}})");
  CHECK_THROWS_WITH_AS(load_config(c),
                       doctest::Contains("scenario.n_players"), std::invalid_argument);
}

TEST_CASE("save and load round-trip") {
  std::istringstream in(R"({
    "scheme": "baseline1",
    "epoch_ms": 50,
    "d_th_ms": 50,
    "scenario": {"n_players": 12, "n_mmaps": 8},
    "workload": {"zipf_exponent": 1.1}
  })");
  const auto cfg = load_config(in);
  std::stringstream buf;
  save_config(cfg, buf);
  const auto again = load_config(buf);
  CHECK(again.scheme == cfg.scheme);
  CHECK(again.epoch_s == doctest::Approx(cfg.epoch_s));
  CHECK(again.scenario.n_players == cfg.scenario.n_players);
  CHECK(again.scenario.n_mmaps == cfg.scenario.n_mmaps);
  CHECK(again.workload.zipf_exponent == doctest::Approx(cfg.workload.zipf_exponent));
  CHECK(again.matching.sinr_threshold_linear ==
        doctest::Approx(cfg.matching.sinr_threshold_linear));
  CHECK(again.channel.sidelobe_gain == doctest::Approx(cfg.channel.sidelobe_gain));
}

TEST_CASE("sweep axis names round-trip and cells specialize the base") {
  CHECK(axis_from_string(to_string(SweepAxis::kPlayers)) == SweepAxis::kPlayers);
  CHECK(axis_from_string(to_string(SweepAxis::kMmaps)) == SweepAxis::kMmaps);
  CHECK_THROWS_AS(axis_from_string("zombies"), std::invalid_argument);

  SweepSpec spec;
  spec.values = {8};
  spec.schemes = {Scheme::kProposed};
  const auto by_players = cell_config(spec, 8, Scheme::kBaseline1, 0);
  CHECK(by_players.scenario.n_players == 8);
  CHECK(by_players.scheme == Scheme::kBaseline1);

  spec.axis = SweepAxis::kMmaps;
  const auto by_aps = cell_config(spec, 4, Scheme::kProposed, 0);
  CHECK(by_aps.scenario.n_mmaps == 4);
  CHECK(by_aps.fog.n_servers == 4);
  CHECK(by_aps.fog.cache_capacity == 80);  // 20 frames per mmAP

  const auto s0 = cell_config(spec, 4, Scheme::kProposed, 0);
  const auto s1 = cell_config(spec, 4, Scheme::kProposed, 1);
  CHECK(s0.seed != s1.seed);
}

TEST_CASE("csv reader validates header and rows") {
  std::istringstream empty("");
  CHECK_THROWS_WITH_AS(read_csv(empty), doctest::Contains("empty"),
                       std::invalid_argument);

  std::istringstream wrong("foo,bar\n1,2\n");
  CHECK_THROWS_WITH_AS(read_csv(wrong), doctest::Contains("header"),
                       std::invalid_argument);

  const std::string header =
      "axis,axis_value,scheme,seed,mean_cm_ms,p90_cm_ms,mean_cp_ms,mean_e2e_ms,hd_ratio";
  std::istringstream headless(header + "\n");
  CHECK_THROWS_WITH_AS(read_csv(headless), doctest::Contains("no data rows"),
                       std::invalid_argument);

  std::istringstream bad(header + "\nplayers,8,proposed,0,oops,2,3,4,0.5\n");
  CHECK_THROWS_WITH_AS(read_csv(bad), doctest::Contains("row 2"),
                       std::invalid_argument);

  std::istringstream good(header + "\nplayers,8,proposed,0,1.5,2.5,0.5,3.0,0.9\n\n");
  const auto rows = read_csv(good);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].axis == "players");
  CHECK(rows[0].axis_value == 8);
  CHECK(rows[0].mean_cm_ms == doctest::Approx(1.5));
  CHECK(rows[0].hd_ratio == doctest::Approx(0.9));
}

TEST_CASE("plots emit one polyline per series") {
  std::vector<CsvRow> rows;
  for (int v : {4, 8}) {
    for (const char* s : {"proposed", "baseline1"}) {
      CsvRow r;
      r.axis = "players";
      r.axis_value = v;
      r.scheme = s;
      r.mean_cm_ms = 2.0 + v * 0.1;
      r.p90_cm_ms = 4.0 + v * 0.1;
      r.mean_cp_ms = 1.0;
      rows.push_back(r);
    }
  }
  std::ostringstream comm, compute;
  plot_comm_delay(rows, comm);
  plot_compute_delay(rows, compute);
  const std::string c = comm.str();
  CHECK(c.find("<svg") != std::string::npos);
  CHECK(c.find("stroke-dasharray") != std::string::npos);  // dashed mean line
  int polylines = 0;
  for (std::size_t p = c.find("<polyline"); p != std::string::npos;
       p = c.find("<polyline", p + 1))
    ++polylines;
  CHECK(polylines == 4);  // mean + p90 for two schemes
  CHECK(compute.str().find("<polyline") != std::string::npos);

  std::ostringstream sink;
  CHECK_THROWS_AS(plot_comm_delay({}, sink), std::invalid_argument);
}

TEST_CASE("pinned sweep reproduces the golden csv byte for byte") {
  SweepSpec spec;
  spec.axis = SweepAxis::kPlayers;
  spec.values = {4};
  spec.schemes = {Scheme::kBaseline1, Scheme::kProposed};
  spec.seeds = 2;
  spec.base = load_config_file(std::string(TEST_DATA_DIR) + "/golden_config.json");
  const auto rows = run_sweep(spec);
  std::ostringstream out;
  write_csv(rows, out);

  const std::string golden_path = std::string(TEST_DATA_DIR) + "/golden.csv";
  if (std::getenv("VRSIM_REGEN_GOLDEN")) {
    std::ofstream regen(golden_path, std::ios::binary);
    regen << out.str();
    return;
  }
  std::ifstream in(golden_path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream expected;
  expected << in.rdbuf();
  CHECK(out.str() == expected.str());
}
