#pragma once

// Seeded experiment runner.
//
// Run r of a batch draws policy randomness from stream (base_seed, 2r) and
// environment randomness from stream (base_seed, 2r + 1).

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ssb/core.hpp"
#include "ssb/environments.hpp"
#include "ssb/policies.hpp"

namespace ssb {

/// Two-sided normal quantile for a central 97.5% interval, Phi^{-1}(0.9875).
inline constexpr double kCi975Z = 2.2414027276;

struct ExperimentSpec {
  EnvConfig env;
  PolicyConfig policy;
  std::uint64_t horizon = 10'000;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t checkpoint_every = 100;
  double ci_z = kCi975Z;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Observed sum_t sum_{a in A_t} (n_{a,t} + 1)^{-1/2} against 2 sqrt(m N T).
struct PullSumAudit {
  double observed = 0.0;
  double bound = 0.0;
  bool holds() const { return observed <= bound; }
};

struct Trajectory {
  std::vector<RoundRecord> records;  // empty unless requested
  std::vector<Round> checkpoints;
  std::vector<double> cum_regret;    // at each checkpoint
  double final_regret = 0.0;
  PullSumAudit pull_sum;
  std::uint64_t total_pulls = 0;     // sum_a n_{a,T+1}
  std::uint64_t played_arms = 0;     // sum_t |A_t|
  std::size_t num_arms = 0;
  std::size_t max_cardinality = 0;
  std::uint64_t policy_normal_draws = 0;
  std::vector<ArmStats> final_stats;

  /// sum_a n_{a,T+1} == sum_t |A_t| <= m T.
  bool counts_conserved(std::uint64_t horizon) const;
};

struct ExperimentResult {
  std::string policy;
  double gamma = 0.0;
  std::uint64_t horizon = 0;
  std::vector<Round> checkpoints;
  std::vector<double> mean_cum_regret;
  std::vector<double> ci_halfwidth;
  std::vector<double> per_run_final;
  std::vector<std::vector<double>> per_run_curves;  // [run][checkpoint]
  std::vector<PullSumAudit> pull_sum;                  // per run
  std::size_t pull_sum_violations = 0;
  std::size_t count_violations = 0;
};

/// z * s / sqrt(R) with s the sample standard deviation; 0 when R < 2.
double ci_halfwidth(std::span<const double> values, double z);

/// Checkpoint rounds: every `every` rounds, plus the horizon.
std::vector<Round> checkpoint_rounds(std::uint64_t horizon, std::uint64_t every);

/// One run of reveal -> select -> observe -> update for `horizon` rounds.
/// Throws InvariantError if count conservation or the pull-sum inequality
/// fails at the end of the run.
Trajectory run_single(const ExperimentSpec& spec, std::size_t run_index, bool keep_records = true);

/// `spec.runs` independent runs (in parallel when threads allow) and their
/// per-checkpoint mean and CI half-width z * s / sqrt(R). R = 1 gives zero
/// half-widths.
ExperimentResult run_batch(const ExperimentSpec& spec);

enum class ExportFormat { Csv, Json };

/// Sibling path used for the aggregate CSV: "<stem>.aggregate.csv".
std::filesystem::path aggregate_path_for(const std::filesystem::path& runs_path);

/// CSV: per-run rows `policy,gamma,run,checkpoint_t,cum_regret` to `path`
/// and aggregate rows `policy,gamma,checkpoint_t,mean,ci_halfwidth` to
/// aggregate_path_for(path). JSON: one document with "runs" and "aggregate"
/// arrays carrying the same fields.
void export_results(const ExperimentResult& result, ExportFormat format, const std::filesystem::path& path);

struct RunRow {
  std::string policy;
  double gamma = 0.0;
  std::size_t run = 0;
  Round checkpoint_t = 0;
  double cum_regret = 0.0;
};

struct AggregateRow {
  std::string policy;
  double gamma = 0.0;
  Round checkpoint_t = 0;
  double mean = 0.0;
  double ci_halfwidth = 0.0;
};

std::vector<RunRow> read_runs_csv(const std::filesystem::path& path);
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);

struct LowerBoundRunReport {
  LowerBoundInstance instance;
  std::size_t runs = 0;
  double mean_regret = 0.0;
  double ci_halfwidth = 0.0;
  double reference_sqrt_mNT_lnT = 0.0;   // sqrt(m N T ln T)
  double reference_m_sqrt_NT_lnT = 0.0;  // m sqrt(N T ln T)
};

/// Runs the targeted policy (gamma = 1) on a lower-bound instance and
/// reports measured regret next to the reference growth rates.
LowerBoundRunReport run_lower_bound_demo(const LowerBoundInstance& instance, std::size_t runs,
                                         std::uint64_t seed);

}  // namespace ssb
