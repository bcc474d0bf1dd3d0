#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "starfd/config.hpp"

namespace starfd {

struct SchemeResult {
  double weighted_sum_rate = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  sca::ScaStatus status = sca::ScaStatus::kConverged;
  int iterations = 0;
  double wall_time_s = 0.0;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;
  Index m = 0;
  double snr_db = 0.0;
  std::array<std::optional<SchemeResult>, 4> results;  // indexed by Scheme

  const std::optional<SchemeResult>& operator[](Scheme s) const {
    return results[static_cast<std::size_t>(s)];
  }
};

// gamma1 = gamma, gamma2' = gamma/2, gamma2 per the uplink mode.
rate::LinkBudget link_budget(const ExperimentConfig& cfg, double snr_db, cd g_ap);
// log2(1 + kappa * gamma_i) with the nominal gamma1 = gamma, gamma2 = gamma/2.
rate::QosThresholds qos_thresholds(const ExperimentConfig& cfg, double snr_db);

TrialRecord run_trial(const ExperimentConfig& cfg, Index m, double snr_db,
                      std::uint64_t trial_index);

enum class SweepAxis { kSnr, kM };

struct SchemeSummary {
  double mean = 0.0;
  double stderr_ = 0.0;
  double infeasible_frac = 0.0;
  int trials = 0;
};

struct SweepPoint {
  double axis = 0.0;
  std::array<std::optional<SchemeSummary>, 4> summaries;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kSnr;
  std::vector<Scheme> schemes;
  std::vector<SweepPoint> points;
  std::vector<std::vector<TrialRecord>> records;  // [point][trial]
};

SchemeSummary summarize(const std::vector<TrialRecord>& records, Scheme s);

// Worker count: cfg.workers, overridden by STARFD_WORKERS, else hardware
// concurrency.
int resolve_workers(const ExperimentConfig& cfg);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// The non-swept coordinate is m_elems.front() or snr_db.front().
SweepResult run_sweep(const ExperimentConfig& cfg, SweepAxis axis, const ProgressFn& progress = {});

// Rates are multiplied by scale (bandwidth for absolute output).
std::string format_csv(const SweepResult& result, double scale = 1.0);
// Throws std::ios_base::failure naming the path.
void emit_csv(const SweepResult& result, const std::string& path, double scale = 1.0);

}  // namespace starfd
