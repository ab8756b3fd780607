#include "ssb/config.hpp"

#include <chrono>
#include <set>

#include "ssb/random.hpp"

namespace ssb {

using nlohmann::json;

namespace {

void allow_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, _] : j.items())
    if (!allowed.contains(k)) throw ConfigError(std::string(what) + ": unknown key '" + k + "'");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

template <typename T>
T get_required(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw ConfigError(std::string(what) + ": missing key '" + key + "'");
  return get_or<T>(j, key, T{});
}

std::vector<double> per_arm(const json& j, const char* key, std::size_t n, double fallback) {
  if (!j.contains(key)) return std::vector<double>(n, fallback);
  const json& v = j.at(key);
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  auto out = get_or<std::vector<double>>(j, key, {});
  if (out.size() != n) throw ConfigError(std::string("'") + key + "' needs one entry per arm");
  return out;
}

}  // namespace

EnvConfig env_from_json(const json& j, std::uint64_t default_horizon) {
  if (!j.is_object()) throw ConfigError("env must be a JSON object");
  const std::string type = get_required<std::string>(j, "type", "env");
  if (type == "grid") {
    allow_keys(j, {"type", "width", "height", "optimal_mean", "other_mean", "availability"}, "grid env");
    GridMeshConfig c;
    c.grid.width = get_or<std::size_t>(j, "width", 4);
    c.grid.height = get_or<std::size_t>(j, "height", 4);
    c.optimal_path_mean = get_or(j, "optimal_mean", 0.9);
    c.other_mean = get_or(j, "other_mean", 0.8);
    c.availability = get_or(j, "availability", 0.75);
    c.grid.validate();
    return c;
  }
  if (type == "topm") {
    allow_keys(j, {"type", "num_arms", "m", "means", "means_seed", "availability"}, "topm env");
    SyntheticTopMConfig c;
    c.num_arms = get_required<std::size_t>(j, "num_arms", "topm env");
    c.m = get_required<std::size_t>(j, "m", "topm env");
    if (j.contains("means")) {
      c.means = per_arm(j, "means", c.num_arms, 0.0);
    } else {
      RngStream rng(get_or<std::uint64_t>(j, "means_seed", 0), 0x6d65616e73ull);
      for (std::size_t a = 0; a < c.num_arms; ++a) c.means.push_back(rng.uniform());
    }
    c.availability = per_arm(j, "availability", c.num_arms, 1.0);
    return c;
  }
  if (type == "trace") {
    allow_keys(j, {"type", "trace", "mode", "m", "source", "target", "max_hops", "normalization"}, "trace env");
    TraceDrivenConfig c;
    const std::string path = get_required<std::string>(j, "trace", "trace env");
    const auto norm = parse_normalization(get_or<std::string>(j, "normalization", "global"));
    c.trace = std::make_shared<const TraceDataset>(ingest_trace(path, norm));
    const std::string mode = get_or<std::string>(j, "mode", "top_m");
    if (mode == "top_m") {
      c.mode = TraceMode::TopM;
      c.m = get_or<std::size_t>(j, "m", 1);
    } else if (mode == "path") {
      c.mode = TraceMode::Path;
      c.source = get_required<std::string>(j, "source", "trace env");
      c.target = get_required<std::string>(j, "target", "trace env");
      c.max_hops = get_or<std::size_t>(j, "max_hops", 4);
    } else {
      throw ConfigError("trace env: mode must be 'top_m' or 'path'");
    }
    return c;
  }
  if (type == "lowerbound") {
    allow_keys(j, {"type", "algo", "m", "horizon", "num_arms"}, "lowerbound env");
    LowerBoundConfig c;
    c.target = parse_lower_bound_target(get_or<std::string>(j, "algo", "cts-g"));
    c.m = get_or<std::size_t>(j, "m", 1);
    c.horizon = get_or<std::uint64_t>(j, "horizon", default_horizon);
    c.num_arms = get_or<std::size_t>(j, "num_arms", 0);
    build_lower_bound_instance(c.target, c.m, c.horizon, c.num_arms);
    return c;
  }
  throw ConfigError("unknown env type '" + type + "'");
}

PolicyConfig policy_from_json(const json& j) {
  allow_keys(j, {"kind", "gamma", "sigma_sq", "g"}, "policy");
  PolicyConfig c;
  c.kind = parse_policy_kind(get_required<std::string>(j, "kind", "policy"));
  c.gamma = get_or(j, "gamma", c.gamma);
  c.sigma_sq = get_or(j, "sigma_sq", c.sigma_sq);
  c.g = parse_g_function(get_or<std::string>(j, "g", "log"));
  c.validate();
  return c;
}

ExperimentSpec spec_from_json(const json& j) {
  allow_keys(j, {"env", "policy", "horizon", "runs", "seed", "checkpoint", "ci_z", "threads"}, "spec");
  ExperimentSpec s;
  s.horizon = get_or<std::uint64_t>(j, "horizon", s.horizon);
  s.runs = get_or<std::size_t>(j, "runs", s.runs);
  s.base_seed = get_or<std::uint64_t>(j, "seed", s.base_seed);
  s.checkpoint_every = get_or<std::uint64_t>(j, "checkpoint", s.checkpoint_every);
  s.ci_z = get_or(j, "ci_z", s.ci_z);
  s.threads = get_or<unsigned>(j, "threads", 0);
  if (!j.contains("env")) throw ConfigError("spec: missing key 'env'");
  if (!j.contains("policy")) throw ConfigError("spec: missing key 'policy'");
  s.env = env_from_json(j.at("env"), s.horizon);
  s.policy = policy_from_json(j.at("policy"));
  s.validate();
  return s;
}

ExperimentSpec spec_from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("spec is not valid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

json to_json(const ExperimentResult& r) {
  json audits = json::array();
  double worst_ratio = 0.0;
  for (const PullSumAudit& a : r.pull_sum) {
    audits.push_back({{"observed", a.observed}, {"bound", a.bound}});
    if (a.bound > 0.0) worst_ratio = std::max(worst_ratio, a.observed / a.bound);
  }
  return json{{"policy", r.policy},
              {"gamma", r.gamma},
              {"horizon", r.horizon},
              {"runs", r.per_run_final.size()},
              {"checkpoints", r.checkpoints},
              {"mean_cum_regret", r.mean_cum_regret},
              {"ci_halfwidth", r.ci_halfwidth},
              {"per_run_final", r.per_run_final},
              {"pull_sum", audits},
              {"pull_sum_worst_ratio", worst_ratio},
              {"pull_sum_violations", r.pull_sum_violations},
              {"count_violations", r.count_violations}};
}

json to_json(const LowerBoundInstance& inst) {
  return json{{"algo", std::string(to_string(inst.target))},
              {"num_arms", inst.num_arms},
              {"m", inst.m},
              {"horizon", inst.horizon},
              {"gap", inst.gap},
              {"optimal_arms", inst.optimal}};
}

json to_json(const GaussianFactReport& report) {
  json rows = json::array();
  for (const GaussianFactRow& r : report.rows) {
    json row{{"z", r.z},
             {"samples", r.samples},
             {"one_sided_estimate", r.one_sided_estimate},
             {"one_sided_exact", r.one_sided_exact},
             {"one_sided_stderr", r.one_sided_stderr},
             {"two_sided_estimate", r.two_sided_estimate},
             {"two_sided_exact", r.two_sided_exact},
             {"two_sided_stderr", r.two_sided_stderr},
             {"lower_bound", r.lower_bound},
             {"upper_bound", r.upper_bound},
             {"lower_bound_holds", r.lower_bound_holds},
             {"upper_bound_one_sided_holds", r.upper_bound_one_sided_holds},
             {"upper_bound_two_sided_holds", r.upper_bound_two_sided_holds},
             {"estimate_matches_exact", r.estimate_matches_exact}};
    if (r.z > 0.0) {
      row["tail_lower_bound"] = r.tail_lower_bound;
      row["tail_lower_bound_holds"] = r.tail_lower_bound_holds;
    }
    if (!r.upper_bound_two_sided_holds)
      row["note"] = "two-sided tail exceeds e^{-z^2/2}/2; the upper bound holds for the one-sided tail only";
    rows.push_back(std::move(row));
  }
  return json{{"seed", report.seed}, {"rows", rows}, {"all_hold", report.all_hold()}};
}

json to_json(const LowerBoundRunReport& r) {
  return json{{"instance", to_json(r.instance)},
              {"runs", r.runs},
              {"mean_regret", r.mean_regret},
              {"ci_halfwidth", r.ci_halfwidth},
              {"reference_sqrt_mNT_lnT", r.reference_sqrt_mNT_lnT},
              {"reference_m_sqrt_NT_lnT", r.reference_m_sqrt_NT_lnT}};
}

json coefficient_report(LowerBoundTarget algo) {
  const bool ctsg = algo == LowerBoundTarget::CtsG;
  const auto f = ctsg ? cts_g_coefficient : cl_sg_coefficient;
  const double ref_gamma = ctsg ? 6.4 : 4.57;
  const double ref_value = ctsg ? 175.74 : 144.43;
  const auto start = std::chrono::steady_clock::now();
  const Minimum best = optimize_coefficient(f);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return json{{"algo", std::string(to_string(algo))},
              {"search_interval", {1e-4, 100.0}},
              {"argmin", best.argmin},
              {"minimum", best.value},
              {"reference_gamma", ref_gamma},
              {"reference_value", ref_value},
              {"value_at_reference_gamma", f(ref_gamma)},
              {"minimum_minus_reference", best.value - ref_value},
              {"seconds", seconds}};
}

}  // namespace ssb
