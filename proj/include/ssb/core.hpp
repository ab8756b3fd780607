#pragma once

// Shared domain types for sleeping combinatorial semi-bandits: per-arm
// statistics, super arms, the per-round feasible set, and grid geometry.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ssb {

using ArmIndex = std::size_t;
using Round = std::uint64_t;

/// Observed rewards of the played base arms, keyed by arm index.
using RewardMap = std::map<ArmIndex, double>;

/// Sorted, duplicate-free collection of arm (or edge) indices.
using ArmSet = std::vector<ArmIndex>;

/// Rejected configuration or violated precondition on user input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or out-of-range data (trace rows, rewards).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A broken internal contract, e.g. a policy that played an infeasible arm.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArmStats {
  std::uint64_t pull_count = 0;
  double reward_sum = 0.0;

  double mean() const {
    return pull_count == 0 ? 0.0 : reward_sum / static_cast<double>(pull_count);
  }

  friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

/// Returns `stats` after one more pull with the given reward.
/// Throws DataError if the reward lies outside [0, 1].
ArmStats update_stats(ArmStats stats, double reward);

/// A set of base arms played together. Indices are kept sorted and unique.
class SuperArm {
 public:
  SuperArm() = default;
  explicit SuperArm(std::vector<ArmIndex> arms);

  const std::vector<ArmIndex>& arms() const { return arms_; }
  std::size_t size() const { return arms_.size(); }
  bool empty() const { return arms_.empty(); }
  bool contains(ArmIndex a) const;

  friend bool operator==(const SuperArm&, const SuperArm&) = default;
  // Lexicographic order over the sorted index sequence; the global tie rule.
  friend auto operator<=>(const SuperArm& a, const SuperArm& b) { return a.arms_ <=> b.arms_; }

 private:
  std::vector<ArmIndex> arms_;
};

std::string to_string(const SuperArm& arm);

/// Edge layout of a W x H grid of nodes. Paths run from node (0,0) to
/// (W-1,H-1) using right-steps and up-steps only.
///
/// Right edge at (x,y) has index y*(W-1)+x. Up edge at (x,y) has index
/// H*(W-1) + y*W + x.
struct GridShape {
  std::size_t width = 4;
  std::size_t height = 4;

  std::size_t num_nodes() const { return width * height; }
  std::size_t num_horizontal() const { return height * (width - 1); }
  std::size_t num_edges() const { return num_horizontal() + width * (height - 1); }
  std::size_t path_length() const { return width + height - 2; }
  std::size_t node(std::size_t x, std::size_t y) const { return y * width + x; }
  ArmIndex right_edge(std::size_t x, std::size_t y) const { return y * (width - 1) + x; }
  ArmIndex up_edge(std::size_t x, std::size_t y) const { return num_horizontal() + y * width + x; }
  bool is_horizontal(ArmIndex e) const { return e < num_horizontal(); }
  std::size_t edge_tail(ArmIndex e) const;  // node the edge leaves
  std::size_t edge_head(ArmIndex e) const;  // node the edge enters

  void validate() const;
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Structured feasible-set variants. None of them enumerate super arms
/// except Explicit.
struct TopM {
  std::size_t m = 1;
  ArmSet available;
};

struct MonotonePaths {
  GridShape grid;
  ArmSet available_edges;
};

struct Explicit {
  std::vector<SuperArm> super_arms;
};

using FeasibleSet = std::variant<TopM, MonotonePaths, Explicit>;

/// True if no super arm can be played this round.
bool is_empty(const FeasibleSet& feasible);

/// Membership test for a super arm in the round's decision set.
bool contains(const FeasibleSet& feasible, const SuperArm& arm);

/// Arms that belong to at least one feasible super arm, ascending.
ArmSet arms_appearing(const FeasibleSet& feasible);

/// Normalizes an index list into a sorted unique ArmSet.
ArmSet make_arm_set(std::vector<ArmIndex> indices);

enum class RewardKind { Bernoulli, Deterministic };

struct RewardModel {
  RewardKind kind = RewardKind::Bernoulli;
  double value = 0.0;  // p for Bernoulli, v for Deterministic
};

struct ProblemInstance {
  std::size_t num_arms = 0;
  std::size_t max_cardinality = 1;
  std::vector<RewardModel> reward_model;
  std::vector<double> true_means;

  void validate() const;
};

struct RoundRecord {
  Round round = 0;
  SuperArm chosen;
  RewardMap observed_rewards;
  double optimal_value = 0.0;
  double chosen_true_value = 0.0;
  double instantaneous_regret = 0.0;
};

}  // namespace ssb
