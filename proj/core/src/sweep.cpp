#include "vrsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <future>
#include <ostream>
#include <stdexcept>

#include "vrsim/rng.hpp"

namespace vrsim {

const char* to_string(SweepAxis axis) {
  return axis == SweepAxis::kPlayers ? "players" : "mmaps";
}

SweepAxis axis_from_string(const std::string& name) {
  if (name == "players") return SweepAxis::kPlayers;
  if (name == "mmaps") return SweepAxis::kMmaps;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep: no axis values");
  if (schemes.empty()) throw std::invalid_argument("sweep: no schemes");
  if (seeds < 1) throw std::invalid_argument("sweep: seeds must be >= 1");
  if (jobs < 1) throw std::invalid_argument("sweep: jobs must be >= 1");
  for (int v : values)
    if (v < 1) throw std::invalid_argument("sweep: axis values must be >= 1");
}

namespace {

// rows x cols grid closest to square covering n units
std::pair<int, int> grid_dims(int n) {
  int best_r = 1;
  for (int r = 1; r * r <= n; ++r) {
    if (n % r == 0) best_r = r;
  }
  return {best_r, n / best_r};
}

}  // namespace

RunConfig cell_config(const SweepSpec& spec, int value, Scheme scheme,
                      std::uint64_t seed) {
  RunConfig cfg = spec.base;
  cfg.scheme = scheme;
  cfg.seed = derive_seed(spec.base.seed, seed + 1);
  if (spec.axis == SweepAxis::kPlayers) {
    cfg.scenario.n_players = value;
    if (value > cfg.scenario.rows * cfg.scenario.cols) {
      const auto [r, c] = grid_dims(value);
      cfg.scenario.rows = r;
      cfg.scenario.cols = c;
    }
  } else {
    cfg.scenario.n_mmaps = value;
    cfg.fog.n_servers = value;
    cfg.fog.cache_capacity = 20 * value;
  }
  cfg.validate();
  return cfg;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();

  std::vector<SweepRow> cells;
  for (int v : spec.values) {
    for (Scheme s : spec.schemes) {
      for (int k = 0; k < spec.seeds; ++k) {
        SweepRow row;
        row.axis = spec.axis;
        row.axis_value = v;
        row.scheme = s;
        row.seed = static_cast<std::uint64_t>(k);
        cells.push_back(row);
      }
    }
  }

  const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(spec.jobs));
  std::vector<std::future<void>> workers;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepRow& row = cells[i];
      row.report = run(cell_config(spec, row.axis_value, row.scheme, row.seed));
    }
  };
  if (stride == 1 || cells.size() == 1) {
    worker();
  } else {
    for (std::size_t w = 0; w < std::min(stride, cells.size()); ++w)
      workers.push_back(std::async(std::launch::async, worker));
    for (auto& f : workers) f.get();
  }
  return cells;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "axis,axis_value,scheme,seed,mean_cm_ms,p90_cm_ms,mean_cp_ms,"
         "mean_e2e_ms,hd_ratio\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f",
                  r.report.mean_comm_s * 1e3, r.report.p90_comm_s * 1e3,
                  r.report.mean_compute_s * 1e3, r.report.mean_e2e_s * 1e3,
                  r.report.hd_ratio);
    out << to_string(r.axis) << ',' << r.axis_value << ',' << to_string(r.scheme)
        << ',' << r.seed << ',' << buf << '\n';
  }
}

}  // namespace vrsim
