#pragma once

// Round generators. Each round the harness calls reveal(t) and then, if an
// arm was played, draw_rewards(chosen, t) for the same t.
//
// Stochastic environments consume a fixed number of variates per round (one
// availability and one reward uniform per arm, in ascending arm order) so
// that policies with different draw counts still see identical availability
// and reward realizations under the same seed.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ssb/core.hpp"
#include "ssb/ingest.hpp"
#include "ssb/random.hpp"
#include "ssb/theory.hpp"

namespace ssb {

struct SyntheticTopMConfig {
  std::size_t num_arms = 0;
  std::size_t m = 1;
  std::vector<double> means;
  std::vector<double> availability;  // per-arm probability
};

struct GridMeshConfig {
  GridShape grid{4, 4};
  double optimal_path_mean = 0.9;
  double other_mean = 0.8;
  double availability = 0.75;
};

enum class TraceMode { Path, TopM };

struct TraceDrivenConfig {
  std::shared_ptr<const TraceDataset> trace;
  TraceMode mode = TraceMode::TopM;
  std::size_t m = 1;             // TopM mode
  std::string source, target;    // Path mode
  std::size_t max_hops = 4;      // Path mode
};

struct LowerBoundConfig {
  LowerBoundTarget target = LowerBoundTarget::CtsG;
  std::size_t m = 1;
  std::uint64_t horizon = 0;
  std::size_t num_arms = 0;  // 0 = smallest admissible
};

using EnvConfig = std::variant<SyntheticTopMConfig, GridMeshConfig, TraceDrivenConfig, LowerBoundConfig>;

class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual std::size_t num_arms() const = 0;
  /// Largest super-arm size the environment can ever offer.
  virtual std::size_t max_cardinality() const = 0;

  virtual FeasibleSet reveal(Round t, RandomSource& rng) = 0;
  virtual RewardMap draw_rewards(const SuperArm& chosen, Round t, RandomSource& rng) = 0;
  /// Mean reward per arm at round t (the benchmark for regret).
  virtual std::vector<double> true_means(Round t) const = 0;
};

std::unique_ptr<Environment> make_environment(const EnvConfig& config);

/// Edges of the designated optimal route of a grid mesh: the bottom row,
/// then the right column.
ArmSet grid_optimal_path(const GridShape& grid);

/// Simple source-to-target paths over the trace's link graph with at most
/// `max_hops` links, as sorted link-index sets. Throws ConfigError if the
/// node names are unknown or there are more than 1e6 paths.
std::vector<SuperArm> enumerate_trace_paths(const TraceDataset& trace, const std::string& source,
                                            const std::string& target, std::size_t max_hops);

}  // namespace ssb
