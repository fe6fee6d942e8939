#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vrsim/sweep.hpp"

namespace vrsim {

struct CsvRow {
  std::string axis;
  int axis_value = 0;
  std::string scheme;
  std::uint64_t seed = 0;
  double mean_cm_ms = 0.0;
  double p90_cm_ms = 0.0;
  double mean_cp_ms = 0.0;
  double mean_e2e_ms = 0.0;
  double hd_ratio = 0.0;
};

/// Parses the sweep CSV. Rejects a missing or wrong header, short or
/// ill-typed rows (error names the 1-based row) and an empty body.
std::vector<CsvRow> read_csv(std::istream& in);

/// Communication-delay figure: per scheme the seed-averaged mean (dashed) and
/// 90th percentile (solid) against the axis value.
void plot_comm_delay(const std::vector<CsvRow>& rows, std::ostream& svg);

/// Computing-delay figure: per scheme the seed-averaged mean against the
/// axis value.
void plot_compute_delay(const std::vector<CsvRow>& rows, std::ostream& svg);

}  // namespace vrsim
