#include "ssb/environments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ssb/oracles.hpp"

namespace ssb {

ArmSet grid_optimal_path(const GridShape& g) {
  ArmSet path;
  for (std::size_t x = 0; x + 1 < g.width; ++x) path.push_back(g.right_edge(x, 0));
  for (std::size_t y = 0; y + 1 < g.height; ++y) path.push_back(g.up_edge(g.width - 1, y));
  return make_arm_set(std::move(path));
}

std::vector<SuperArm> enumerate_trace_paths(const TraceDataset& trace, const std::string& source,
                                            const std::string& target, std::size_t max_hops) {
  std::map<std::string, std::vector<std::pair<std::string, ArmIndex>>> adj;
  for (ArmIndex i = 0; i < trace.links().size(); ++i) {
    const TraceLink& l = trace.links()[i];
    adj[l.a].emplace_back(l.b, i);
    adj[l.b].emplace_back(l.a, i);
  }
  if (!adj.contains(source)) throw ConfigError("unknown source node '" + source + "'");
  if (!adj.contains(target)) throw ConfigError("unknown target node '" + target + "'");
  if (source == target) throw ConfigError("source and target must differ");
  if (max_hops == 0) throw ConfigError("max_hops must be positive");

  std::vector<SuperArm> paths;
  std::vector<std::string> visited{source};
  std::vector<ArmIndex> links;
  auto dfs = [&](auto&& self, const std::string& node) -> void {
    if (node == target) {
      if (paths.size() >= kBruteForceCap) throw ConfigError("too many source-target paths; lower max_hops");
      paths.emplace_back(links);
      return;
    }
    if (links.size() == max_hops) return;
    for (const auto& [next, link] : adj.at(node)) {
      if (std::find(visited.begin(), visited.end(), next) != visited.end()) continue;
      visited.push_back(next);
      links.push_back(link);
      self(self, next);
      links.pop_back();
      visited.pop_back();
    }
  };
  dfs(dfs, source);
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  return paths;
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0,1]");
}

// Shared machinery for environments with independent Bernoulli availability
// and Bernoulli rewards.
class BernoulliEnvironment : public Environment {
 public:
  BernoulliEnvironment(std::vector<double> means, std::vector<double> availability)
      : means_(std::move(means)), availability_(std::move(availability)) {
    for (double p : means_) check_probability(p, "arm mean");
    for (double p : availability_) check_probability(p, "availability probability");
  }

  std::size_t num_arms() const override { return means_.size(); }
  std::vector<double> true_means(Round) const override { return means_; }

  RewardMap draw_rewards(const SuperArm& chosen, Round t, RandomSource&) override {
    if (t != round_) throw InvariantError("draw_rewards called for a round that was not revealed");
    RewardMap out;
    for (ArmIndex a : chosen.arms()) {
      if (a >= means_.size()) throw InvariantError("played arm out of range");
      out.emplace(a, reward_draw_[a] < means_[a] ? 1.0 : 0.0);
    }
    return out;
  }

 protected:
  ArmSet draw_round(Round t, RandomSource& rng) {
    const std::size_t n = means_.size();
    ArmSet available;
    for (ArmIndex a = 0; a < n; ++a)
      if (rng.uniform() < availability_[a]) available.push_back(a);
    reward_draw_.resize(n);
    for (ArmIndex a = 0; a < n; ++a) reward_draw_[a] = rng.uniform();
    round_ = t;
    return available;
  }

 private:
  std::vector<double> means_;
  std::vector<double> availability_;
  std::vector<double> reward_draw_;
  Round round_ = 0;
};

class SyntheticTopMEnvironment final : public BernoulliEnvironment {
 public:
  explicit SyntheticTopMEnvironment(const SyntheticTopMConfig& c)
      : BernoulliEnvironment(c.means, c.availability), m_(c.m) {
    if (c.num_arms == 0) throw ConfigError("topm environment needs at least one arm");
    if (c.means.size() != c.num_arms) throw ConfigError("topm: need one mean per arm");
    if (c.availability.size() != c.num_arms) throw ConfigError("topm: need one availability per arm");
    if (c.m == 0) throw ConfigError("topm: m must be at least 1");
  }

  std::string name() const override { return "topm"; }
  std::size_t max_cardinality() const override { return std::min(m_, num_arms()); }
  FeasibleSet reveal(Round t, RandomSource& rng) override { return TopM{m_, draw_round(t, rng)}; }

 private:
  std::size_t m_;
};

std::vector<double> grid_means(const GridMeshConfig& c) {
  c.grid.validate();
  std::vector<double> means(c.grid.num_edges(), c.other_mean);
  for (ArmIndex e : grid_optimal_path(c.grid)) means[e] = c.optimal_path_mean;
  return means;
}

class GridMeshEnvironment final : public BernoulliEnvironment {
 public:
  explicit GridMeshEnvironment(const GridMeshConfig& c)
      : BernoulliEnvironment(grid_means(c), std::vector<double>(c.grid.num_edges(), c.availability)),
        grid_(c.grid) {}

  std::string name() const override { return "grid"; }
  std::size_t max_cardinality() const override { return grid_.path_length(); }
  FeasibleSet reveal(Round t, RandomSource& rng) override { return MonotonePaths{grid_, draw_round(t, rng)}; }

 private:
  GridShape grid_;
};

class TraceEnvironment final : public Environment {
 public:
  explicit TraceEnvironment(const TraceDrivenConfig& c) : config_(c) {
    if (!config_.trace) throw ConfigError("trace environment needs a trace");
    if (config_.trace->links().empty()) throw ConfigError("trace has no links");
    if (config_.mode == TraceMode::TopM) {
      if (config_.m == 0) throw ConfigError("trace top_m: m must be at least 1");
      max_cardinality_ = std::min(config_.m, config_.trace->links().size());
    } else {
      paths_ = enumerate_trace_paths(*config_.trace, config_.source, config_.target, config_.max_hops);
      if (paths_.empty()) throw ConfigError("no path between source and target within max_hops");
      for (const SuperArm& p : paths_) max_cardinality_ = std::max(max_cardinality_, p.size());
    }
  }

  std::string name() const override { return "trace"; }
  std::size_t num_arms() const override { return config_.trace->links().size(); }
  std::size_t max_cardinality() const override { return max_cardinality_; }

  FeasibleSet reveal(Round t, RandomSource&) override {
    check_round(t);
    ArmSet available = config_.trace->available(t);
    if (config_.mode == TraceMode::TopM) return TopM{config_.m, std::move(available)};
    Explicit out;
    for (const SuperArm& p : paths_) {
      if (std::all_of(p.arms().begin(), p.arms().end(),
                      [&](ArmIndex a) { return std::binary_search(available.begin(), available.end(), a); }))
        out.super_arms.push_back(p);
    }
    return out;
  }

  RewardMap draw_rewards(const SuperArm& chosen, Round t, RandomSource&) override {
    check_round(t);
    RewardMap out;
    for (ArmIndex a : chosen.arms()) {
      const auto r = config_.trace->reward(t, a);
      if (!r) throw InvariantError("played link " + std::to_string(a) + " absent at minute " + std::to_string(t));
      out.emplace(a, *r);
    }
    return out;
  }

  std::vector<double> true_means(Round t) const override {
    check_round(t);
    return config_.trace->rewards(t);
  }

 private:
  void check_round(Round t) const {
    if (t == 0 || t > config_.trace->minutes())
      throw DataError("trace exhausted: round " + std::to_string(t) + " beyond " +
                      std::to_string(config_.trace->minutes()) + " minutes");
  }

  TraceDrivenConfig config_;
  std::vector<SuperArm> paths_;
  std::size_t max_cardinality_ = 0;
};

class LowerBoundEnvironment final : public Environment {
 public:
  explicit LowerBoundEnvironment(const LowerBoundConfig& c)
      : instance_(build_lower_bound_instance(c.target, c.m, c.horizon, c.num_arms)), means_(instance_.means()) {
    all_.resize(instance_.num_arms);
    for (ArmIndex a = 0; a < all_.size(); ++a) all_[a] = a;
  }

  std::string name() const override { return "lowerbound"; }
  std::size_t num_arms() const override { return instance_.num_arms; }
  std::size_t max_cardinality() const override { return instance_.m; }
  FeasibleSet reveal(Round, RandomSource&) override { return TopM{instance_.m, all_}; }

  RewardMap draw_rewards(const SuperArm& chosen, Round, RandomSource&) override {
    RewardMap out;
    for (ArmIndex a : chosen.arms()) out.emplace(a, means_.at(a));
    return out;
  }

  std::vector<double> true_means(Round) const override { return means_; }

 private:
  LowerBoundInstance instance_;
  std::vector<double> means_;
  ArmSet all_;
};

}  // namespace

std::unique_ptr<Environment> make_environment(const EnvConfig& config) {
  return std::visit(
      [](const auto& c) -> std::unique_ptr<Environment> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SyntheticTopMConfig>) {
          return std::make_unique<SyntheticTopMEnvironment>(c);
        } else if constexpr (std::is_same_v<T, GridMeshConfig>) {
          check_probability(c.availability, "availability probability");
          return std::make_unique<GridMeshEnvironment>(c);
        } else if constexpr (std::is_same_v<T, TraceDrivenConfig>) {
          return std::make_unique<TraceEnvironment>(c);
        } else {
          return std::make_unique<LowerBoundEnvironment>(c);
        }
      },
      config);
}

}  // namespace ssb
