// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssb/ssb.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int report(ssb_status status) {
  if (status == SSB_OK) return 0;
  std::cerr << "error: " << ssb_last_error() << '\n';
  return status == SSB_ERR_CONFIG || status == SSB_ERR_INVALID_ARGUMENT ? kExitConfig : kExitRuntime;
}

int print_owned(ssb_status status, char*& text) {
  if (status != SSB_OK) return report(status);
  std::cout << nlohmann::json::parse(text).dump(2) << '\n';
  ssb_string_free(text);
  return 0;
}

struct RunArgs {
  std::string env = "grid";
  std::string policy = "cl-sg";
  double gamma = 0.1;
  std::uint64_t horizon = 10'000;
  std::uint64_t runs = 100;
  std::uint64_t seed = 0;
  std::uint64_t checkpoint = 100;
  unsigned threads = 0;
  std::string out;
  std::string trace;
  std::string config;
};

int do_run(const RunArgs& a) {
  nlohmann::json env = nlohmann::json::object();
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) {
      std::cerr << "error: cannot open config " << a.config << '\n';
      return kExitConfig;
    }
    try {
      env = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << '\n';
      return kExitConfig;
    }
    if (!env.is_object()) {
      std::cerr << "error: config must be a JSON object of environment settings\n";
      return kExitConfig;
    }
  }
  env["type"] = a.env;
  if (!a.trace.empty()) env["trace"] = a.trace;
  if (a.env == "topm" && !env.contains("num_arms")) {
    std::cerr << "error: --env topm needs --config with num_arms and m\n";
    return kExitConfig;
  }
  const nlohmann::json spec{{"env", env},
                            {"policy", {{"kind", a.policy}, {"gamma", a.gamma}}},
                            {"horizon", a.horizon},
                            {"runs", a.runs},
                            {"seed", a.seed},
                            {"checkpoint", a.checkpoint},
                            {"threads", a.threads}};

  ssb_result* result = nullptr;
  if (const ssb_status s = ssb_run_experiment(spec.dump().c_str(), &result); s != SSB_OK) return report(s);
  int rc = 0;
  if (!a.out.empty()) {
    const bool json = a.out.size() >= 5 && a.out.substr(a.out.size() - 5) == ".json";
    rc = report(ssb_result_export(result, json ? "json" : "csv", a.out.c_str()));
  }
  if (rc == 0) {
    char* summary = nullptr;
    rc = print_owned(ssb_result_summary_json(result, &summary), summary);
  }
  ssb_result_free(result);
  return rc;
}

int do_ingest(const std::string& trace_path, const std::string& out, const std::string& normalization) {
  ssb_trace* trace = nullptr;
  if (const ssb_status s = ssb_trace_ingest(trace_path.c_str(), normalization.c_str(), &trace); s != SSB_OK)
    return report(s);
  const int rc = report(ssb_trace_export_json(trace, out.c_str()));
  if (rc == 0) {
    const nlohmann::json summary{{"links", ssb_trace_link_count(trace)},
                                 {"minutes", ssb_trace_minute_count(trace)},
                                 {"rejected_rows", ssb_trace_rejected_rows(trace)},
                                 {"out", out}};
    std::cout << summary.dump(2) << '\n';
  }
  ssb_trace_free(trace);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sleeping combinatorial semi-bandit experiments"};
  app.require_subcommand(1);
  int rc = 0;

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a batch of seeded experiments");
  run_cmd->add_option("--env", run.env, "Environment")->check(CLI::IsMember({"grid", "topm", "trace", "lowerbound"}));
  run_cmd->add_option("--policy", run.policy, "Policy")
      ->check(CLI::IsMember({"cts-g", "cl-sg", "cts-b", "bg-cts", "comb-ucb"}));
  run_cmd->add_option("--gamma", run.gamma, "Exploration rate")->check(CLI::PositiveNumber);
  run_cmd->add_option("--horizon", run.horizon, "Rounds per run");
  run_cmd->add_option("--runs", run.runs, "Independent runs");
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--checkpoint", run.checkpoint, "Checkpoint interval in rounds");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_option("--out", run.out, "Output file (.csv or .json)");
  run_cmd->add_option("--trace", run.trace, "Trace file for --env trace");
  run_cmd->add_option("--config", run.config, "JSON file with environment settings");
  run_cmd->callback([&] { rc = do_run(run); });

  std::string trace_in, trace_out, normalization = "global";
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert a CSV trace to canonical JSON");
  ingest_cmd->add_option("--trace", trace_in, "Input CSV")->required();
  ingest_cmd->add_option("--out", trace_out, "Output JSON")->required();
  ingest_cmd->add_option("--normalization", normalization, "ETT normalization")
      ->check(CLI::IsMember({"global", "per-link"}));
  ingest_cmd->callback([&] { rc = do_ingest(trace_in, trace_out, normalization); });

  auto* theory_cmd = app.add_subcommand("theory", "Numeric checks of the regret analysis");
  theory_cmd->require_subcommand(1);

  std::string algo = "cts-g";
  auto* coeff_cmd = theory_cmd->add_subcommand("coeff", "Optimize the leading bound coefficient");
  coeff_cmd->add_option("--algo", algo, "Algorithm")->check(CLI::IsMember({"cts-g", "cl-sg"}));
  coeff_cmd->callback([&] {
    char* out = nullptr;
    rc = print_owned(ssb_theory_coefficient(algo.c_str(), &out), out);
  });

  std::uint64_t lb_m = 1, lb_horizon = 1'000'000, lb_runs = 5, lb_seed = 0;
  bool lb_run = false;
  auto* lb_cmd = theory_cmd->add_subcommand("lower-bound", "Build a lower-bound instance");
  lb_cmd->add_option("--algo", algo, "Algorithm")->check(CLI::IsMember({"cts-g", "cl-sg"}));
  lb_cmd->add_option("--m", lb_m, "Super-arm size");
  lb_cmd->add_option("--horizon", lb_horizon, "Horizon T");
  lb_cmd->add_flag("--run", lb_run, "Also measure the regret of the targeted policy");
  lb_cmd->add_option("--runs", lb_runs, "Runs for --run");
  lb_cmd->add_option("--seed", lb_seed, "Seed for --run");
  lb_cmd->callback([&] {
    char* out = nullptr;
    rc = print_owned(ssb_theory_lower_bound(algo.c_str(), lb_m, lb_horizon, lb_run ? 1 : 0, lb_runs, lb_seed, &out),
                     out);
  });

  std::uint64_t samples = 10'000'000, facts_seed = 0;
  auto* facts_cmd = theory_cmd->add_subcommand("facts", "Monte Carlo check of Gaussian tail bounds");
  facts_cmd->add_option("--samples", samples, "Standard normal draws (>= 1e6)");
  facts_cmd->add_option("--seed", facts_seed, "Seed");
  facts_cmd->callback([&] {
    char* out = nullptr;
    rc = print_owned(ssb_theory_facts(samples, facts_seed, &out), out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return rc;
}
