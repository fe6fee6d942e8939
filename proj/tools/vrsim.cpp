#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vrsim/config.hpp"
#include "vrsim/plot.hpp"
#include "vrsim/sweep.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<vrsim::Scheme> parse_schemes(const std::string& list) {
  std::vector<vrsim::Scheme> schemes;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) schemes.push_back(vrsim::scheme_from_string(item));
  }
  if (schemes.empty()) throw std::invalid_argument("no schemes given");
  return schemes;
}

std::pair<vrsim::SweepAxis, std::vector<int>> parse_sweep(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("sweep must look like players=8,16,32");
  const auto axis = vrsim::axis_from_string(arg.substr(0, eq));
  std::vector<int> values;
  std::stringstream ss(arg.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stoi(item));
  }
  if (values.empty()) throw std::invalid_argument("sweep has no values");
  return {axis, values};
}

void print_report(const vrsim::MetricsReport& r) {
  auto line = [&](const char* metric, double value) {
    std::printf("%s,%d,%d,%llu,%s,%.6f\n", vrsim::to_string(r.scheme), r.n_players,
                r.n_mmaps, static_cast<unsigned long long>(r.seed), metric, value);
  };
  line("mean_cm_ms", r.mean_comm_s * 1e3);
  line("p90_cm_ms", r.p90_comm_s * 1e3);
  line("mean_cp_ms", r.mean_compute_s * 1e3);
  line("mean_e2e_ms", r.mean_e2e_s * 1e3);
  line("hd_ratio", r.hd_ratio);
  line("hd_delivered", static_cast<double>(r.hd_delivered));
  line("lq_delivered", static_cast<double>(r.lq_delivered));
}

void write_plots(const std::vector<vrsim::CsvRow>& rows, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream svg(dir / "comm_delay.svg");
    vrsim::plot_comm_delay(rows, svg);
  }
  {
    std::ofstream svg(dir / "compute_delay.svg");
    vrsim::plot_compute_delay(rows, svg);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave VR arcade delay simulator"};

  std::string config_path;
  std::string sweep_arg;
  std::string schemes_arg = "proposed,baseline1,baseline2";
  int seeds = 1;
  std::string out_path;
  std::string plots_dir;
  int jobs = 1;
  std::string impulse_trace_path;
  std::string decision_log_path;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--sweep", sweep_arg,
                 "axis sweep, e.g. players=8,16,32,64 or mmaps=4,8,16");
  app.add_option("--schemes", schemes_arg, "comma list of schemes to run");
  app.add_option("--seeds", seeds, "number of seeds per cell (0..N-1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "sweep CSV output path");
  app.add_option("--plots", plots_dir, "directory for SVG figures");
  app.add_option("--jobs", jobs, "parallel sweep workers")->check(CLI::PositiveNumber);
  app.add_option("--impulse-trace", impulse_trace_path,
                 "single run: slot,action log of impulse arrivals");
  app.add_option("--decision-log", decision_log_path,
                 "single run: scheduler decision log");

  CLI11_PARSE(app, argc, argv);

  try {
    vrsim::RunConfig base;
    if (!config_path.empty()) {
      base = vrsim::load_config_file(config_path);
    } else {
      base.validate();
    }

    if (sweep_arg.empty()) {
      // single run per scheme
      for (vrsim::Scheme scheme : parse_schemes(schemes_arg)) {
        vrsim::RunConfig cfg = base;
        cfg.scheme = scheme;
        vrsim::Simulation sim(cfg);
        std::ofstream impulse_out, decision_out;
        if (!impulse_trace_path.empty()) {
          impulse_out.open(impulse_trace_path);
          sim.set_impulse_trace(&impulse_out);
        }
        if (!decision_log_path.empty()) {
          decision_out.open(decision_log_path);
          sim.set_decision_log_stream(&decision_out);
        }
        print_report(sim.run());
      }
      return 0;
    }

    vrsim::SweepSpec spec;
    spec.base = base;
    std::tie(spec.axis, spec.values) = parse_sweep(sweep_arg);
    spec.schemes = parse_schemes(schemes_arg);
    spec.seeds = seeds;
    spec.jobs = jobs;

    const auto rows = vrsim::run_sweep(spec);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open " + out_path);
      vrsim::write_csv(rows, out);
    } else {
      vrsim::write_csv(rows, std::cout);
    }

    if (!plots_dir.empty()) {
      std::stringstream csv;
      vrsim::write_csv(rows, csv);
      write_plots(vrsim::read_csv(csv), plots_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
