#pragma once

// Exact argmax of a per-arm weight vector over the round's feasible set.
//
// Weights at or above kSentinelIndex mark "never pulled" arms. They are
// ranked first: a super arm's score is (number of sentinel arms, sum of
// the remaining finite weights), compared in that order. Remaining ties go
// to the lexicographically smallest sorted index sequence.

#include <compare>
#include <optional>
#include <span>

#include "ssb/core.hpp"

namespace ssb {

inline constexpr double kSentinelIndex = 1e9;

struct Score {
  std::size_t sentinels = 0;
  double value = 0.0;

  Score& operator+=(const Score& o) {
    sentinels += o.sentinels;
    value += o.value;
    return *this;
  }
  friend Score operator+(Score a, const Score& b) { return a += b; }
  friend bool operator==(const Score&, const Score&) = default;
  friend std::partial_ordering operator<=>(const Score& a, const Score& b) {
    if (a.sentinels != b.sentinels) return a.sentinels <=> b.sentinels;
    return a.value <=> b.value;
  }
};

Score arm_score(double weight);

/// Sum of arm scores, accumulated in ascending arm order.
Score super_arm_score(std::span<const double> weights, const SuperArm& arm);

/// The min(m, |available|) available arms with the largest weights.
SuperArm oracle_top_m(std::span<const double> weights, const ArmSet& available, std::size_t m);

/// Maximum-weight monotone path from (0,0) to (W-1,H-1) over available
/// edges, or nullopt when availability disconnects every route.
std::optional<SuperArm> oracle_monotone_path(const GridShape& grid, std::span<const double> weights,
                                             const ArmSet& available_edges);

/// Dispatches to the structured oracle for the variant. nullopt when the
/// feasible set is empty.
std::optional<SuperArm> oracle_argmax(const FeasibleSet& feasible, std::span<const double> weights);

inline constexpr std::size_t kBruteForceCap = 1'000'000;

/// Lists every member of the feasible collection. Throws ConfigError when
/// there are more than `cap`.
std::vector<SuperArm> enumerate_super_arms(const FeasibleSet& feasible,
                                           std::size_t cap = kBruteForceCap);

/// Reference oracle: exhaustive scan with the same ranking and tie rule.
std::optional<SuperArm> oracle_bruteforce(const FeasibleSet& feasible, std::span<const double> weights,
                                          std::size_t cap = kBruteForceCap);

/// Sum of true means over the arm, in ascending arm order.
double super_arm_value(std::span<const double> means, const SuperArm& arm);

/// Pseudo-regret of one round: value of the exact best feasible super arm
/// minus value of `chosen`. Zero when the feasible set is empty and nothing
/// was played. Throws InvariantError if `chosen` is not feasible.
double instantaneous_regret(std::span<const double> true_means, const FeasibleSet& feasible,
                            const SuperArm& chosen);

double instantaneous_regret(const ProblemInstance& instance, const FeasibleSet& feasible,
                            const SuperArm& chosen);

}  // namespace ssb
