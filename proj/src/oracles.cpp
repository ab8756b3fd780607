#include "ssb/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ssb {

Score arm_score(double weight) {
  if (weight >= kSentinelIndex) return Score{1, 0.0};
  return Score{0, weight};
}

Score super_arm_score(std::span<const double> weights, const SuperArm& arm) {
  Score s;
  for (ArmIndex a : arm.arms()) s += arm_score(weights[a]);
  return s;
}

SuperArm oracle_top_m(std::span<const double> weights, const ArmSet& available, std::size_t m) {
  std::vector<ArmIndex> order;
  order.reserve(available.size());
  for (ArmIndex a : available) {
    if (a >= weights.size()) throw InvariantError("available arm " + std::to_string(a) + " has no weight");
    order.push_back(a);
  }
  const std::size_t k = std::min(m, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](ArmIndex a, ArmIndex b) {
                      const Score sa = arm_score(weights[a]), sb = arm_score(weights[b]);
                      if (sa != sb) return sa > sb;
                      return a < b;
                    });
  order.resize(k);
  return SuperArm(std::move(order));
}

namespace {

// Existence of a source-to-sink path over `allowed` edges that contains every
// edge flagged in `forced`.
bool path_through(const GridShape& g, const std::vector<char>& allowed, const std::vector<char>& forced,
                  std::size_t forced_count) {
  std::vector<long> covered(g.num_nodes(), -1);
  covered[0] = 0;
  for (std::size_t y = 0; y < g.height; ++y) {
    for (std::size_t x = 0; x < g.width; ++x) {
      const std::size_t v = g.node(x, y);
      if (covered[v] < 0) continue;
      auto relax = [&](ArmIndex e, std::size_t head) {
        if (!allowed[e]) return;
        covered[head] = std::max(covered[head], covered[v] + (forced[e] ? 1 : 0));
      };
      if (x + 1 < g.width) relax(g.right_edge(x, y), v + 1);
      if (y + 1 < g.height) relax(g.up_edge(x, y), v + g.width);
    }
  }
  return covered[g.num_nodes() - 1] == static_cast<long>(forced_count);
}

}  // namespace

std::optional<SuperArm> oracle_monotone_path(const GridShape& g, std::span<const double> weights,
                                             const ArmSet& available_edges) {
  g.validate();
  const std::size_t num_edges = g.num_edges();
  if (weights.size() < num_edges) throw InvariantError("edge weight vector shorter than the grid");
  std::vector<char> avail(num_edges, 0);
  for (ArmIndex e : available_edges)
    if (e < num_edges) avail[e] = 1;

  // Best score from each node to the sink.
  std::vector<std::optional<Score>> best(g.num_nodes());
  best[g.num_nodes() - 1] = Score{};
  for (std::size_t y = g.height; y-- > 0;) {
    for (std::size_t x = g.width; x-- > 0;) {
      const std::size_t v = g.node(x, y);
      auto consider = [&](ArmIndex e, std::size_t head) {
        if (!avail[e] || !best[head]) return;
        const Score s = arm_score(weights[e]) + *best[head];
        if (!best[v] || s > *best[v]) best[v] = s;
      };
      if (x + 1 < g.width) consider(g.right_edge(x, y), v + 1);
      if (y + 1 < g.height) consider(g.up_edge(x, y), v + g.width);
    }
  }
  if (!best[0]) return std::nullopt;

  // Edges on some optimal path.
  std::vector<char> tight(num_edges, 0);
  for (ArmIndex e = 0; e < num_edges; ++e) {
    if (!avail[e]) continue;
    const std::size_t tail = g.edge_tail(e), head = g.edge_head(e);
    if (best[tail] && best[head] && arm_score(weights[e]) + *best[head] == *best[tail]) tight[e] = 1;
  }

  // Count optimal paths; a unique one is read off directly.
  std::vector<double> count(g.num_nodes(), 0.0);
  count[0] = 1.0;
  for (std::size_t y = 0; y < g.height; ++y) {
    for (std::size_t x = 0; x < g.width; ++x) {
      const std::size_t v = g.node(x, y);
      if (count[v] == 0.0) continue;
      if (x + 1 < g.width && tight[g.right_edge(x, y)]) count[v + 1] += count[v];
      if (y + 1 < g.height && tight[g.up_edge(x, y)]) count[v + g.width] += count[v];
    }
  }

  std::vector<ArmIndex> path;
  path.reserve(g.path_length());
  if (count[g.num_nodes() - 1] == 1.0) {
    std::size_t x = 0, y = 0;
    while (x + 1 < g.width || y + 1 < g.height) {
      if (x + 1 < g.width && tight[g.right_edge(x, y)] && best[g.node(x + 1, y)]) {
        path.push_back(g.right_edge(x, y));
        ++x;
      } else {
        path.push_back(g.up_edge(x, y));
        ++y;
      }
    }
    return SuperArm(std::move(path));
  }

  // Several optimal paths: take edges in ascending index order whenever some
  // optimal path still contains all edges taken so far plus this one. This
  // yields the lexicographically smallest sorted edge set.
  std::vector<char> allowed = tight;
  std::vector<char> forced(num_edges, 0);
  std::size_t forced_count = 0;
  for (ArmIndex e = 0; e < num_edges && forced_count < g.path_length(); ++e) {
    if (!allowed[e]) continue;
    forced[e] = 1;
    if (path_through(g, allowed, forced, forced_count + 1)) {
      ++forced_count;
      path.push_back(e);
    } else {
      forced[e] = 0;
      allowed[e] = 0;
    }
  }
  if (forced_count != g.path_length()) throw InvariantError("monotone path reconstruction failed");
  return SuperArm(std::move(path));
}

std::optional<SuperArm> oracle_argmax(const FeasibleSet& feasible, std::span<const double> weights) {
  return std::visit(
      [&](const auto& f) -> std::optional<SuperArm> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TopM>) {
          if (f.m == 0 || f.available.empty()) return std::nullopt;
          return oracle_top_m(weights, f.available, f.m);
        } else if constexpr (std::is_same_v<T, MonotonePaths>) {
          return oracle_monotone_path(f.grid, weights, f.available_edges);
        } else {
          return oracle_bruteforce(feasible, weights);
        }
      },
      feasible);
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

void refuse(std::size_t cap) {
  throw ConfigError("feasible collection exceeds the brute-force cap of " + std::to_string(cap));
}

}  // namespace

std::vector<SuperArm> enumerate_super_arms(const FeasibleSet& feasible, std::size_t cap) {
  std::vector<SuperArm> out;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, TopM>) {
          const std::size_t n = f.available.size();
          const std::size_t k = std::min(f.m, n);
          if (k == 0) return;
          if (binomial(n, k) > static_cast<double>(cap)) refuse(cap);
          std::vector<std::size_t> pick(k);
          std::iota(pick.begin(), pick.end(), 0);
          while (true) {
            std::vector<ArmIndex> arms(k);
            for (std::size_t i = 0; i < k; ++i) arms[i] = f.available[pick[i]];
            out.emplace_back(std::move(arms));
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
          }
        } else if constexpr (std::is_same_v<T, MonotonePaths>) {
          const GridShape& g = f.grid;
          g.validate();
          std::vector<char> avail(g.num_edges(), 0);
          for (ArmIndex e : f.available_edges)
            if (e < g.num_edges()) avail[e] = 1;
          std::vector<ArmIndex> stack;
          auto walk = [&](auto&& self, std::size_t x, std::size_t y) -> void {
            if (x + 1 == g.width && y + 1 == g.height) {
              if (out.size() >= cap) refuse(cap);
              out.emplace_back(stack);
              return;
            }
            if (x + 1 < g.width && avail[g.right_edge(x, y)]) {
              stack.push_back(g.right_edge(x, y));
              self(self, x + 1, y);
              stack.pop_back();
            }
            if (y + 1 < g.height && avail[g.up_edge(x, y)]) {
              stack.push_back(g.up_edge(x, y));
              self(self, x, y + 1);
              stack.pop_back();
            }
          };
          walk(walk, 0, 0);
        } else {
          if (f.super_arms.size() > cap) refuse(cap);
          out = f.super_arms;
        }
      },
      feasible);
  return out;
}

std::optional<SuperArm> oracle_bruteforce(const FeasibleSet& feasible, std::span<const double> weights,
                                          std::size_t cap) {
  std::optional<SuperArm> best;
  Score best_score;
  for (SuperArm& arm : enumerate_super_arms(feasible, cap)) {
    for (ArmIndex a : arm.arms())
      if (a >= weights.size()) throw InvariantError("super arm references an arm without weight");
    const Score s = super_arm_score(weights, arm);
    if (!best || s > best_score || (s == best_score && arm < *best)) {
      best_score = s;
      best = std::move(arm);
    }
  }
  return best;
}

double super_arm_value(std::span<const double> means, const SuperArm& arm) {
  double v = 0.0;
  for (ArmIndex a : arm.arms()) v += means[a];
  return v;
}

double instantaneous_regret(std::span<const double> true_means, const FeasibleSet& feasible,
                            const SuperArm& chosen) {
  if (chosen.empty() && is_empty(feasible)) return 0.0;
  if (!contains(feasible, chosen))
    throw InvariantError("chosen super arm " + to_string(chosen) + " is not feasible");
  const std::optional<SuperArm> best = oracle_argmax(feasible, true_means);
  const double gap = super_arm_value(true_means, *best) - super_arm_value(true_means, chosen);
  // Equal-valued sets can differ in the last ulp.
  if (gap < -1e-9) throw InvariantError("oracle returned a suboptimal super arm");
  return std::max(gap, 0.0);
}

double instantaneous_regret(const ProblemInstance& instance, const FeasibleSet& feasible,
                            const SuperArm& chosen) {
  return instantaneous_regret(instance.true_means, feasible, chosen);
}

}  // namespace ssb
