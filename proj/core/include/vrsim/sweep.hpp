#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vrsim/engine.hpp"

namespace vrsim {

enum class SweepAxis { kPlayers, kMmaps };

const char* to_string(SweepAxis axis);
SweepAxis axis_from_string(const std::string& name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kPlayers;
  std::vector<int> values;
  std::vector<Scheme> schemes;
  int seeds = 1;  // seeds 0 .. seeds-1
  RunConfig base;
  int jobs = 1;
  void validate() const;
};

/// The base configuration specialized to one sweep cell. The mmAP axis also
/// scales the server pool and the cache (20 frames per mmAP) with it.
RunConfig cell_config(const SweepSpec& spec, int value, Scheme scheme,
                      std::uint64_t seed);

struct SweepRow {
  SweepAxis axis = SweepAxis::kPlayers;
  int axis_value = 0;
  Scheme scheme = Scheme::kProposed;
  std::uint64_t seed = 0;
  MetricsReport report;
};

/// Runs every (value, scheme, seed) cell, up to `jobs` in parallel. Row order
/// is deterministic regardless of the parallelism.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// CSV columns: axis,axis_value,scheme,seed,mean_cm_ms,p90_cm_ms,mean_cp_ms,
/// mean_e2e_ms,hd_ratio. Fixed six-decimal formatting, byte-stable output.
void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace vrsim
