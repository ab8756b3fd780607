#include "ssb/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ssb {

ArmStats update_stats(ArmStats stats, double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) {
    std::ostringstream msg;
    msg << "reward " << reward << " outside [0,1]";
    throw DataError(msg.str());
  }
  stats.pull_count += 1;
  stats.reward_sum += reward;
  return stats;
}

SuperArm::SuperArm(std::vector<ArmIndex> arms) : arms_(std::move(arms)) {
  std::sort(arms_.begin(), arms_.end());
  if (std::adjacent_find(arms_.begin(), arms_.end()) != arms_.end())
    throw InvariantError("super arm contains a repeated base arm");
}

bool SuperArm::contains(ArmIndex a) const {
  return std::binary_search(arms_.begin(), arms_.end(), a);
}

std::string to_string(const SuperArm& arm) {
  std::string out = "{";
  for (std::size_t i = 0; i < arm.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(arm.arms()[i]);
  }
  return out + "}";
}

std::size_t GridShape::edge_tail(ArmIndex e) const {
  if (is_horizontal(e)) {
    const std::size_t y = e / (width - 1), x = e % (width - 1);
    return node(x, y);
  }
  const std::size_t k = e - num_horizontal();
  return node(k % width, k / width);
}

std::size_t GridShape::edge_head(ArmIndex e) const {
  return is_horizontal(e) ? edge_tail(e) + 1 : edge_tail(e) + width;
}

void GridShape::validate() const {
  if (width == 0 || height == 0 || width + height < 3)
    throw ConfigError("grid must have at least two nodes along a monotone path");
}

ArmSet make_arm_set(std::vector<ArmIndex> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

namespace {

bool in_set(const ArmSet& s, ArmIndex a) { return std::binary_search(s.begin(), s.end(), a); }

// Nodes reachable from the source, and nodes that can reach the sink, using
// only available edges.
struct PathReach {
  std::vector<char> from_source;
  std::vector<char> to_sink;
};

PathReach path_reach(const MonotonePaths& paths) {
  const GridShape& g = paths.grid;
  std::vector<char> avail(g.num_edges(), 0);
  for (ArmIndex e : paths.available_edges)
    if (e < g.num_edges()) avail[e] = 1;

  PathReach r{std::vector<char>(g.num_nodes(), 0), std::vector<char>(g.num_nodes(), 0)};
  r.from_source[0] = 1;
  for (std::size_t y = 0; y < g.height; ++y) {
    for (std::size_t x = 0; x < g.width; ++x) {
      const std::size_t v = g.node(x, y);
      if (!r.from_source[v]) continue;
      if (x + 1 < g.width && avail[g.right_edge(x, y)]) r.from_source[v + 1] = 1;
      if (y + 1 < g.height && avail[g.up_edge(x, y)]) r.from_source[v + g.width] = 1;
    }
  }
  r.to_sink[g.num_nodes() - 1] = 1;
  for (std::size_t y = g.height; y-- > 0;) {
    for (std::size_t x = g.width; x-- > 0;) {
      const std::size_t v = g.node(x, y);
      if (x + 1 < g.width && avail[g.right_edge(x, y)] && r.to_sink[v + 1]) r.to_sink[v] = 1;
      if (y + 1 < g.height && avail[g.up_edge(x, y)] && r.to_sink[v + g.width]) r.to_sink[v] = 1;
    }
  }
  return r;
}

}  // namespace

bool is_empty(const FeasibleSet& feasible) {
  return std::visit(
      [](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TopM>) {
          return f.available.empty() || f.m == 0;
        } else if constexpr (std::is_same_v<T, MonotonePaths>) {
          return !path_reach(f).to_sink[0];
        } else {
          return f.super_arms.empty();
        }
      },
      feasible);
}

bool contains(const FeasibleSet& feasible, const SuperArm& arm) {
  return std::visit(
      [&](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TopM>) {
          const std::size_t k = std::min(f.m, f.available.size());
          if (k == 0 || arm.size() != k) return false;
          return std::all_of(arm.arms().begin(), arm.arms().end(),
                             [&](ArmIndex a) { return in_set(f.available, a); });
        } else if constexpr (std::is_same_v<T, MonotonePaths>) {
          const GridShape& g = f.grid;
          if (arm.size() != g.path_length()) return false;
          for (ArmIndex e : arm.arms())
            if (e >= g.num_edges() || !in_set(f.available_edges, e)) return false;
          std::size_t x = 0, y = 0;
          for (std::size_t step = 0; step < g.path_length(); ++step) {
            if (x + 1 < g.width && arm.contains(g.right_edge(x, y))) {
              ++x;
            } else if (y + 1 < g.height && arm.contains(g.up_edge(x, y))) {
              ++y;
            } else {
              return false;
            }
          }
          return x + 1 == g.width && y + 1 == g.height;
        } else {
          return std::find(f.super_arms.begin(), f.super_arms.end(), arm) != f.super_arms.end();
        }
      },
      feasible);
}

ArmSet arms_appearing(const FeasibleSet& feasible) {
  return std::visit(
      [](const auto& f) -> ArmSet {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TopM>) {
          return f.m == 0 ? ArmSet{} : make_arm_set(f.available);
        } else if constexpr (std::is_same_v<T, MonotonePaths>) {
          const GridShape& g = f.grid;
          const PathReach r = path_reach(f);
          ArmSet out;
          for (ArmIndex e : f.available_edges) {
            if (e >= g.num_edges()) continue;
            if (r.from_source[g.edge_tail(e)] && r.to_sink[g.edge_head(e)]) out.push_back(e);
          }
          return make_arm_set(std::move(out));
        } else {
          std::vector<ArmIndex> all;
          for (const SuperArm& s : f.super_arms) all.insert(all.end(), s.arms().begin(), s.arms().end());
          return make_arm_set(std::move(all));
        }
      },
      feasible);
}

void ProblemInstance::validate() const {
  if (num_arms == 0) throw ConfigError("problem instance needs at least one arm");
  if (max_cardinality == 0) throw ConfigError("max cardinality must be positive");
  if (true_means.size() != num_arms || reward_model.size() != num_arms)
    throw ConfigError("true_means and reward_model must have one entry per arm");
  for (std::size_t a = 0; a < num_arms; ++a) {
    const double v = reward_model[a].value;
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("reward parameter outside [0,1]");
    if (!(true_means[a] >= 0.0 && true_means[a] <= 1.0))
      throw ConfigError("true mean outside [0,1]");
  }
}

}  // namespace ssb
