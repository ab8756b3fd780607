#include "ssb/policies.hpp"

#include <cmath>
#include <string>

#include "ssb/oracles.hpp"

namespace ssb {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::CtsG: return "cts-g";
    case PolicyKind::ClSg: return "cl-sg";
    case PolicyKind::CtsB: return "cts-b";
    case PolicyKind::BgCts: return "bg-cts";
    case PolicyKind::CombUcb: return "comb-ucb";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (PolicyKind k : {PolicyKind::CtsG, PolicyKind::ClSg, PolicyKind::CtsB, PolicyKind::BgCts,
                       PolicyKind::CombUcb})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::string_view to_string(GFunction g) { return g == GFunction::Log ? "log" : "log-loglog"; }

GFunction parse_g_function(std::string_view name) {
  if (name == "log") return GFunction::Log;
  if (name == "log-loglog") return GFunction::LogLogLog;
  throw ConfigError("unknown g function '" + std::string(name) + "'");
}

void PolicyConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be a positive finite real");
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw ConfigError("sigma_sq must be positive");
  if (m == 0) throw ConfigError("m must be at least 1");
}

double g_value(GFunction g, Round t) {
  const double lt = std::log(static_cast<double>(t));
  if (g == GFunction::Log) return lt;
  return lt * std::log(std::log(static_cast<double>(std::max<Round>(t, 3))));
}

namespace {

void require_round(Round t) {
  if (t == 0) throw InvariantError("rounds are 1-indexed");
}

std::optional<SuperArm> play(const FeasibleSet& feasible, const std::vector<double>& indices) {
  return oracle_argmax(feasible, indices);
}

}  // namespace

std::vector<double> cts_g_indices(std::span<const ArmStats> stats, const PolicyConfig& config,
                                  const FeasibleSet& feasible, Round t, RandomSource& rng) {
  require_round(t);
  std::vector<double> w(stats.size(), 0.0);
  const double scale = config.gamma * static_cast<double>(config.m) * std::log(static_cast<double>(t));
  for (ArmIndex a : arms_appearing(feasible)) {
    const double var = scale / static_cast<double>(stats[a].pull_count + 1);
    w[a] = rng.normal(stats[a].mean(), std::sqrt(var));
  }
  return w;
}

std::vector<double> cl_sg_indices(std::span<const ArmStats> stats, const PolicyConfig& config,
                                  const FeasibleSet& feasible, Round t, RandomSource& rng) {
  require_round(t);
  // One shared seed per round, drawn even if nothing is playable.
  const double seed = rng.standard_normal();
  std::vector<double> r(stats.size(), 0.0);
  const double scale = config.gamma * std::log(static_cast<double>(t));
  for (ArmIndex a : arms_appearing(feasible)) {
    r[a] = stats[a].mean() + seed * std::sqrt(scale / static_cast<double>(stats[a].pull_count + 1));
  }
  return r;
}

std::vector<double> cts_b_indices(std::span<const ArmStats> stats, const FeasibleSet& feasible,
                                  RandomSource& rng) {
  std::vector<double> theta(stats.size(), 0.0);
  for (ArmIndex a : arms_appearing(feasible)) {
    const double n = static_cast<double>(stats[a].pull_count);
    const double alpha = stats[a].reward_sum + 1.0;
    const double beta = n - stats[a].reward_sum + 1.0;
    if (!(alpha >= 1.0 - 1e-9 && beta >= 1.0 - 1e-9))
      throw InvariantError("Beta parameter below 1 for arm " + std::to_string(a));
    theta[a] = rng.beta(std::max(alpha, 1.0), std::max(beta, 1.0));
  }
  return theta;
}

std::vector<double> bg_cts_indices(std::span<const ArmStats> stats, const PolicyConfig& config,
                                   const FeasibleSet& feasible, Round t, RandomSource& rng) {
  require_round(t);
  std::vector<double> theta(stats.size(), 0.0);
  const double g = g_value(config.g, t);
  for (ArmIndex a : arms_appearing(feasible)) {
    if (stats[a].pull_count == 0) {
      theta[a] = kSentinelIndex;
      continue;
    }
    const double var = 2.0 * g * config.sigma_sq / static_cast<double>(stats[a].pull_count);
    theta[a] = rng.normal(stats[a].mean(), std::sqrt(var));
  }
  return theta;
}

std::vector<double> comb_ucb_indices(std::span<const ArmStats> stats, const FeasibleSet& feasible, Round t) {
  require_round(t);
  std::vector<double> theta(stats.size(), 0.0);
  const double lt = std::log(static_cast<double>(t));
  for (ArmIndex a : arms_appearing(feasible)) {
    if (stats[a].pull_count == 0) {
      theta[a] = kSentinelIndex;
      continue;
    }
    theta[a] = stats[a].mean() + std::sqrt(1.5 * lt / static_cast<double>(stats[a].pull_count));
  }
  return theta;
}

std::optional<SuperArm> cts_g_select(std::span<const ArmStats> stats, const PolicyConfig& config,
                                     const FeasibleSet& feasible, Round t, RandomSource& rng) {
  return play(feasible, cts_g_indices(stats, config, feasible, t, rng));
}

std::optional<SuperArm> cl_sg_select(std::span<const ArmStats> stats, const PolicyConfig& config,
                                     const FeasibleSet& feasible, Round t, RandomSource& rng) {
  return play(feasible, cl_sg_indices(stats, config, feasible, t, rng));
}

std::optional<SuperArm> cts_b_select(std::span<const ArmStats> stats, const FeasibleSet& feasible,
                                     RandomSource& rng) {
  return play(feasible, cts_b_indices(stats, feasible, rng));
}

std::optional<SuperArm> bg_cts_select(std::span<const ArmStats> stats, const PolicyConfig& config,
                                      const FeasibleSet& feasible, Round t, RandomSource& rng) {
  return play(feasible, bg_cts_indices(stats, config, feasible, t, rng));
}

std::optional<SuperArm> comb_ucb_select(std::span<const ArmStats> stats, const FeasibleSet& feasible,
                                        Round t) {
  return play(feasible, comb_ucb_indices(stats, feasible, t));
}

Policy::Policy(PolicyConfig config, std::size_t num_arms) : config_(config), stats_(num_arms) {
  config_.validate();
  if (num_arms == 0) throw ConfigError("policy needs at least one arm");
}

std::optional<SuperArm> Policy::select(const FeasibleSet& feasible, Round t, RandomSource& rng) const {
  switch (config_.kind) {
    case PolicyKind::CtsG: return cts_g_select(stats_, config_, feasible, t, rng);
    case PolicyKind::ClSg: return cl_sg_select(stats_, config_, feasible, t, rng);
    case PolicyKind::CtsB: return cts_b_select(stats_, feasible, rng);
    case PolicyKind::BgCts: return bg_cts_select(stats_, config_, feasible, t, rng);
    case PolicyKind::CombUcb: return comb_ucb_select(stats_, feasible, t);
  }
  return std::nullopt;
}

void Policy::update(const SuperArm& chosen, const RewardMap& rewards) {
  if (rewards.size() != chosen.size())
    throw InvariantError("reward keys do not match the played super arm");
  for (ArmIndex a : chosen.arms()) {
    if (a >= stats_.size()) throw InvariantError("played arm out of range");
    if (!rewards.contains(a)) throw InvariantError("no reward observed for played arm " + std::to_string(a));
  }
  std::vector<ArmStats> next;
  next.reserve(chosen.size());
  for (ArmIndex a : chosen.arms()) next.push_back(update_stats(stats_[a], rewards.at(a)));
  for (std::size_t i = 0; i < chosen.size(); ++i) stats_[chosen.arms()[i]] = next[i];
}

}  // namespace ssb
