#include "ssb/harness.hpp"

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ssb/oracles.hpp"

namespace ssb {

void ExperimentSpec::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (checkpoint_every < 1) throw ConfigError("checkpoint interval must be at least 1");
  if (!(ci_z >= 0.0)) throw ConfigError("CI quantile must be non-negative");
  policy.validate();
}

bool Trajectory::counts_conserved(std::uint64_t horizon) const {
  return total_pulls == played_arms && played_arms <= static_cast<std::uint64_t>(max_cardinality) * horizon;
}

double ci_halfwidth(std::span<const double> values, double z) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return z * std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

std::vector<Round> checkpoint_rounds(std::uint64_t horizon, std::uint64_t every) {
  std::vector<Round> out;
  if (every == 0) return out;
  for (Round t = every; t <= horizon; t += every) out.push_back(t);
  if (horizon > 0 && (out.empty() || out.back() != horizon)) out.push_back(horizon);
  return out;
}

Trajectory run_single(const ExperimentSpec& spec, std::size_t run_index, bool keep_records) {
  spec.validate();
  std::unique_ptr<Environment> env = make_environment(spec.env);
  PolicyConfig config = spec.policy;
  config.m = env->max_cardinality();
  Policy policy(config, env->num_arms());

  RngStream policy_rng(spec.base_seed, 2 * static_cast<std::uint64_t>(run_index));
  RngStream env_rng(spec.base_seed, 2 * static_cast<std::uint64_t>(run_index) + 1);

  Trajectory traj;
  traj.num_arms = env->num_arms();
  traj.max_cardinality = env->max_cardinality();
  traj.checkpoints = checkpoint_rounds(spec.horizon, spec.checkpoint_every);
  traj.cum_regret.reserve(traj.checkpoints.size());
  if (keep_records) traj.records.reserve(spec.horizon);

  double cum = 0.0;
  std::size_t next_checkpoint = 0;
  for (Round t = 1; t <= spec.horizon; ++t) {
    const FeasibleSet feasible = env->reveal(t, env_rng);
    const std::optional<SuperArm> choice = policy.select(feasible, t, policy_rng);
    RoundRecord rec;
    rec.round = t;
    if (choice) {
      const std::vector<double> means = env->true_means(t);
      rec.instantaneous_regret = instantaneous_regret(means, feasible, *choice);
      rec.chosen_true_value = super_arm_value(means, *choice);
      rec.optimal_value = rec.chosen_true_value + rec.instantaneous_regret;
      for (ArmIndex a : choice->arms())
        traj.pull_sum.observed += 1.0 / std::sqrt(static_cast<double>(policy.stats()[a].pull_count + 1));
      rec.observed_rewards = env->draw_rewards(*choice, t, env_rng);
      policy.update(*choice, rec.observed_rewards);
      traj.played_arms += choice->size();
      rec.chosen = *choice;
    } else if (!is_empty(feasible)) {
      throw InvariantError("policy returned no action for a non-empty feasible set");
    }
    cum += rec.instantaneous_regret;
    while (next_checkpoint < traj.checkpoints.size() && traj.checkpoints[next_checkpoint] == t) {
      traj.cum_regret.push_back(cum);
      ++next_checkpoint;
    }
    if (keep_records) traj.records.push_back(std::move(rec));
  }

  traj.final_regret = cum;
  traj.final_stats.assign(policy.stats().begin(), policy.stats().end());
  for (const ArmStats& s : traj.final_stats) traj.total_pulls += s.pull_count;
  traj.policy_normal_draws = policy_rng.normal_draws();
  traj.pull_sum.bound = 2.0 * std::sqrt(static_cast<double>(traj.max_cardinality) *
                                      static_cast<double>(traj.num_arms) * static_cast<double>(spec.horizon));
  if (!traj.counts_conserved(spec.horizon))
    throw InvariantError("count conservation violated: sum of pulls " + std::to_string(traj.total_pulls) +
                         ", sum of |A_t| " + std::to_string(traj.played_arms));
  if (!traj.pull_sum.holds())
    throw InvariantError("sum of (n+1)^{-1/2} exceeds 2 sqrt(mNT)");
  return traj;
}

namespace {

[[noreturn]] void rethrow_with_context(std::exception_ptr error, const std::string& prefix) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

}  // namespace

ExperimentResult run_batch(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t runs = spec.runs;
  std::vector<Trajectory> trajectories(runs);
  std::vector<std::exception_ptr> errors(runs);

  unsigned threads = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t r = next++; r < runs && !failed; r = next++) {
      try {
        trajectories[r] = run_single(spec, r, false);
      } catch (...) {
        errors[r] = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (std::size_t r = 0; r < runs; ++r) {
    if (errors[r])
      rethrow_with_context(errors[r], "run " + std::to_string(r) + " (seed " + std::to_string(spec.base_seed) +
                                          ", streams " + std::to_string(2 * r) + "/" + std::to_string(2 * r + 1) +
                                          "): ");
  }

  ExperimentResult result;
  result.policy = std::string(to_string(spec.policy.kind));
  result.gamma = spec.policy.gamma;
  result.horizon = spec.horizon;
  result.checkpoints = checkpoint_rounds(spec.horizon, spec.checkpoint_every);
  const std::size_t k = result.checkpoints.size();
  result.mean_cum_regret.assign(k, 0.0);
  result.ci_halfwidth.assign(k, 0.0);
  for (Trajectory& tr : trajectories) {
    result.per_run_final.push_back(tr.final_regret);
    result.per_run_curves.push_back(std::move(tr.cum_regret));
    result.pull_sum.push_back(tr.pull_sum);
    if (!tr.pull_sum.holds()) ++result.pull_sum_violations;
    if (!tr.counts_conserved(spec.horizon)) ++result.count_violations;
  }
  std::vector<double> column(runs);
  for (std::size_t c = 0; c < k; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) sum += column[r] = result.per_run_curves[r][c];
    result.mean_cum_regret[c] = sum / static_cast<double>(runs);
    result.ci_halfwidth[c] = ci_halfwidth(column, spec.ci_z);
  }
  return result;
}

std::filesystem::path aggregate_path_for(const std::filesystem::path& runs_path) {
  std::filesystem::path p = runs_path;
  p.replace_filename(runs_path.stem().string() + ".aggregate.csv");
  return p;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

void export_results(const ExperimentResult& result, ExportFormat format, const std::filesystem::path& path) {
  const std::string gamma = fmt_double(result.gamma);
  if (format == ExportFormat::Csv) {
    {
      std::ofstream out = open_for_write(path);
      out << "policy,gamma,run,checkpoint_t,cum_regret\n";
      for (std::size_t r = 0; r < result.per_run_curves.size(); ++r)
        for (std::size_t c = 0; c < result.checkpoints.size(); ++c)
          out << result.policy << ',' << gamma << ',' << r << ',' << result.checkpoints[c] << ','
              << fmt_double(result.per_run_curves[r][c]) << '\n';
      finish(out, path);
    }
    const std::filesystem::path agg = aggregate_path_for(path);
    std::ofstream out = open_for_write(agg);
    out << "policy,gamma,checkpoint_t,mean,ci_halfwidth\n";
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c)
      out << result.policy << ',' << gamma << ',' << result.checkpoints[c] << ','
          << fmt_double(result.mean_cum_regret[c]) << ',' << fmt_double(result.ci_halfwidth[c]) << '\n';
    finish(out, agg);
    return;
  }

  nlohmann::json j;
  j["policy"] = result.policy;
  j["gamma"] = result.gamma;
  j["horizon"] = result.horizon;
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t r = 0; r < result.per_run_curves.size(); ++r)
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c)
      runs.push_back({{"policy", result.policy},
                      {"gamma", result.gamma},
                      {"run", r},
                      {"checkpoint_t", result.checkpoints[c]},
                      {"cum_regret", result.per_run_curves[r][c]}});
  nlohmann::json aggregate = nlohmann::json::array();
  for (std::size_t c = 0; c < result.checkpoints.size(); ++c)
    aggregate.push_back({{"policy", result.policy},
                         {"gamma", result.gamma},
                         {"checkpoint_t", result.checkpoints[c]},
                         {"mean", result.mean_cum_regret[c]},
                         {"ci_halfwidth", result.ci_halfwidth[c]}});
  nlohmann::json audit = nlohmann::json::array();
  for (const PullSumAudit& a : result.pull_sum) audit.push_back({{"observed", a.observed}, {"bound", a.bound}});
  j["runs"] = std::move(runs);
  j["aggregate"] = std::move(aggregate);
  j["pull_sum"] = std::move(audit);
  std::ofstream out = open_for_write(path);
  out << j.dump(1) << '\n';
  finish(out, path);
}

namespace {

// Reads a CSV with a header, returning rows as field vectors ordered like
// `columns`. Missing columns are named in the error.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::vector<std::string>& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) {
      if (!f.empty() && f.back() == '\r') f.pop_back();
      out.push_back(f);
    }
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  const auto header = split(line);
  std::vector<std::size_t> pos;
  for (const std::string& c : columns) {
    const auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) throw DataError(path.string() + ": missing column '" + c + "'");
    pos.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != header.size())
      throw DataError(path.string() + ": line " + std::to_string(line_no) + " has wrong field count");
    std::vector<std::string> row;
    for (std::size_t p : pos) row.push_back(fields[p]);
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
T parse_number(const std::string& s, const std::filesystem::path& path) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw DataError(path.string() + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<RunRow> read_runs_csv(const std::filesystem::path& path) {
  std::vector<RunRow> out;
  for (const auto& f : read_csv(path, {"policy", "gamma", "run", "checkpoint_t", "cum_regret"}))
    out.push_back(RunRow{f[0], parse_number<double>(f[1], path), parse_number<std::size_t>(f[2], path),
                         parse_number<Round>(f[3], path), parse_number<double>(f[4], path)});
  return out;
}

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path) {
  std::vector<AggregateRow> out;
  for (const auto& f : read_csv(path, {"policy", "gamma", "checkpoint_t", "mean", "ci_halfwidth"}))
    out.push_back(AggregateRow{f[0], parse_number<double>(f[1], path), parse_number<Round>(f[2], path),
                               parse_number<double>(f[3], path), parse_number<double>(f[4], path)});
  return out;
}

LowerBoundRunReport run_lower_bound_demo(const LowerBoundInstance& instance, std::size_t runs, std::uint64_t seed) {
  instance.validate();
  ExperimentSpec spec;
  spec.env = LowerBoundConfig{instance.target, instance.m, instance.horizon, instance.num_arms};
  spec.policy.kind = instance.target == LowerBoundTarget::CtsG ? PolicyKind::CtsG : PolicyKind::ClSg;
  spec.policy.gamma = 1.0;
  spec.horizon = instance.horizon;
  spec.runs = runs;
  spec.base_seed = seed;
  spec.checkpoint_every = instance.horizon;
  const ExperimentResult result = run_batch(spec);

  LowerBoundRunReport report;
  report.instance = instance;
  report.runs = runs;
  report.mean_regret = result.mean_cum_regret.back();
  report.ci_halfwidth = result.ci_halfwidth.back();
  const double m = static_cast<double>(instance.m), N = static_cast<double>(instance.num_arms),
               T = static_cast<double>(instance.horizon);
  report.reference_sqrt_mNT_lnT = std::sqrt(m * N * T * std::log(T));
  report.reference_m_sqrt_NT_lnT = m * std::sqrt(N * T * std::log(T));
  return report;
}

}  // namespace ssb
