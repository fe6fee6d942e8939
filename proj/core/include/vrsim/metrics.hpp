#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vrsim {

enum class Scheme { kProposed, kBaseline1, kBaseline2 };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct DeliveryRecord {
  int player = -1;
  int frame = -1;
  bool hd = false;  // xi_fu
  double compute_delay_s = 0.0;
  double comm_delay_s = 0.0;
  double total_delay_s = 0.0;  // compute + comm + tau_EP for HD, 0 for LQ
  long slots_used = 0;
  Scheme scheme = Scheme::kProposed;
};

struct MetricsReport {
  Scheme scheme = Scheme::kProposed;
  int n_players = 0;
  int n_mmaps = 0;
  std::uint64_t seed = 0;

  double mean_comm_s = 0.0;
  double p90_comm_s = 0.0;
  double mean_compute_s = 0.0;
  double mean_e2e_s = 0.0;
  double hd_ratio = 0.0;
  long hd_delivered = 0;
  long lq_delivered = 0;
  long admitted_hd_over_threshold = 0;  // HD deliveries with D >= D_th

  // comm/e2e samples cover HD deliveries; compute samples cover every
  // finalized frame, capped at D_th when rendering never finished in time.
  std::vector<double> comm_samples_s;
  std::vector<double> compute_samples_s;
  std::vector<double> e2e_samples_s;

  long cache_violations = 0;
  long compute_violations = 0;
  long matching_violations = 0;
};

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample.
/// Rejects empty input.
double percentile(std::vector<double> samples, double p);

}  // namespace vrsim
