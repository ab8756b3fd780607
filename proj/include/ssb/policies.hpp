#pragma once

// Selection rules for sleeping semi-bandits. Every rule builds a per-arm
// index over the arms that appear in the round's feasible set (ascending
// arm order) and plays the oracle argmax of those indices.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssb/core.hpp"
#include "ssb/random.hpp"

namespace ssb {

enum class PolicyKind { CtsG, ClSg, CtsB, BgCts, CombUcb };

/// Exploration schedule g(t) for BG-CTS.
enum class GFunction { Log, LogLogLog };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);
std::string_view to_string(GFunction g);
GFunction parse_g_function(std::string_view name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::ClSg;
  double gamma = 0.1;      // CTS-G, CL-SG
  double sigma_sq = 0.25;  // BG-CTS
  GFunction g = GFunction::Log;
  std::size_t m = 1;  // CTS-G posterior variance scales with m

  void validate() const;
};

double g_value(GFunction g, Round t);

/// Per-arm indices. Entries for arms outside `arms_appearing(feasible)` are 0.
std::vector<double> cts_g_indices(std::span<const ArmStats> stats, const PolicyConfig& config,
                                  const FeasibleSet& feasible, Round t, RandomSource& rng);
std::vector<double> cl_sg_indices(std::span<const ArmStats> stats, const PolicyConfig& config,
                                  const FeasibleSet& feasible, Round t, RandomSource& rng);
std::vector<double> cts_b_indices(std::span<const ArmStats> stats, const FeasibleSet& feasible,
                                  RandomSource& rng);
std::vector<double> bg_cts_indices(std::span<const ArmStats> stats, const PolicyConfig& config,
                                   const FeasibleSet& feasible, Round t, RandomSource& rng);
std::vector<double> comb_ucb_indices(std::span<const ArmStats> stats, const FeasibleSet& feasible, Round t);

/// nullopt is the "no action" result for an empty feasible set.
std::optional<SuperArm> cts_g_select(std::span<const ArmStats> stats, const PolicyConfig& config,
                                     const FeasibleSet& feasible, Round t, RandomSource& rng);
std::optional<SuperArm> cl_sg_select(std::span<const ArmStats> stats, const PolicyConfig& config,
                                     const FeasibleSet& feasible, Round t, RandomSource& rng);
std::optional<SuperArm> cts_b_select(std::span<const ArmStats> stats, const FeasibleSet& feasible,
                                     RandomSource& rng);
std::optional<SuperArm> bg_cts_select(std::span<const ArmStats> stats, const PolicyConfig& config,
                                      const FeasibleSet& feasible, Round t, RandomSource& rng);
std::optional<SuperArm> comb_ucb_select(std::span<const ArmStats> stats, const FeasibleSet& feasible,
                                        Round t);

/// A selection rule plus the statistics it has accumulated.
class Policy {
 public:
  Policy(PolicyConfig config, std::size_t num_arms);

  std::optional<SuperArm> select(const FeasibleSet& feasible, Round t, RandomSource& rng) const;

  /// Applies semi-bandit feedback. The reward keys must equal chosen.arms().
  void update(const SuperArm& chosen, const RewardMap& rewards);

  const PolicyConfig& config() const { return config_; }
  std::span<const ArmStats> stats() const { return stats_; }

 private:
  PolicyConfig config_;
  std::vector<ArmStats> stats_;
};

}  // namespace ssb
