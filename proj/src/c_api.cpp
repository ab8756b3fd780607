#include "ssb/ssb.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "ssb/config.hpp"
#include "ssb/harness.hpp"
#include "ssb/ingest.hpp"
#include "ssb/theory.hpp"

struct ssb_result {
  ssb::ExperimentResult value;
};

struct ssb_trace {
  ssb::TraceDataset value;
};

namespace {

thread_local std::string last_error;

ssb_status fail(ssb_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps the exception categories of the C++ core onto status codes.
template <typename F>
ssb_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return SSB_OK;
  } catch (const ssb::ConfigError& e) {
    return fail(SSB_ERR_CONFIG, e.what());
  } catch (const ssb::IoError& e) {
    return fail(SSB_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SSB_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(SSB_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(SSB_ERR_RUNTIME, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* ssb_version(void) { return "1.0.0"; }

const char* ssb_last_error(void) { return last_error.c_str(); }

void ssb_string_free(char* s) { std::free(s); }

ssb_status ssb_run_experiment(const char* spec_json, ssb_result** out) {
  if (spec_json == nullptr || out == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const ssb::ExperimentSpec spec = ssb::spec_from_json_text(spec_json);
    *out = new ssb_result{ssb::run_batch(spec)};
  });
}

void ssb_result_free(ssb_result* result) { delete result; }

size_t ssb_result_checkpoint_count(const ssb_result* result) {
  return result == nullptr ? 0 : result->value.checkpoints.size();
}

ssb_status ssb_result_checkpoint(const ssb_result* result, size_t index, uint64_t* round, double* mean_cum_regret,
                                 double* ci_halfwidth) {
  if (result == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null result");
  if (index >= result->value.checkpoints.size()) return fail(SSB_ERR_INVALID_ARGUMENT, "checkpoint index out of range");
  if (round) *round = result->value.checkpoints[index];
  if (mean_cum_regret) *mean_cum_regret = result->value.mean_cum_regret[index];
  if (ci_halfwidth) *ci_halfwidth = result->value.ci_halfwidth[index];
  return SSB_OK;
}

size_t ssb_result_violations(const ssb_result* result) {
  return result == nullptr ? 0 : result->value.pull_sum_violations + result->value.count_violations;
}

ssb_status ssb_result_export(const ssb_result* result, const char* format, const char* path) {
  if (result == nullptr || format == nullptr || path == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  const std::string f = format;
  if (f != "csv" && f != "json") return fail(SSB_ERR_CONFIG, "format must be 'csv' or 'json'");
  return guarded([&] {
    ssb::export_results(result->value, f == "csv" ? ssb::ExportFormat::Csv : ssb::ExportFormat::Json, path);
  });
}

ssb_status ssb_result_summary_json(const ssb_result* result, char** out_json) {
  if (result == nullptr || out_json == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out_json = dup_string(ssb::to_json(result->value).dump()); });
}

ssb_status ssb_trace_ingest(const char* path, const char* normalization, ssb_trace** out) {
  if (path == nullptr || out == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto norm = ssb::parse_normalization(normalization ? normalization : "global");
    *out = new ssb_trace{ssb::ingest_trace(path, norm)};
  });
}

void ssb_trace_free(ssb_trace* trace) { delete trace; }

size_t ssb_trace_link_count(const ssb_trace* trace) { return trace ? trace->value.links().size() : 0; }
size_t ssb_trace_minute_count(const ssb_trace* trace) { return trace ? trace->value.minutes() : 0; }
size_t ssb_trace_rejected_rows(const ssb_trace* trace) { return trace ? trace->value.rejected_rows() : 0; }

ssb_status ssb_trace_export_json(const ssb_trace* trace, const char* path) {
  if (trace == nullptr || path == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { ssb::export_trace_json(trace->value, path); });
}

ssb_status ssb_theory_coefficient(const char* algo, char** out_json) {
  if (algo == nullptr || out_json == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out_json = dup_string(ssb::coefficient_report(ssb::parse_lower_bound_target(algo)).dump());
  });
}

ssb_status ssb_theory_lower_bound(const char* algo, uint64_t m, uint64_t horizon, int run, uint64_t runs,
                                  uint64_t seed, char** out_json) {
  if (algo == nullptr || out_json == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto inst = ssb::build_lower_bound_instance(ssb::parse_lower_bound_target(algo), m, horizon);
    nlohmann::json j{{"instance", ssb::to_json(inst)}};
    if (run) j["run"] = ssb::to_json(ssb::run_lower_bound_demo(inst, runs == 0 ? 1 : runs, seed));
    *out_json = dup_string(j.dump());
  });
}

ssb_status ssb_theory_facts(uint64_t samples, uint64_t seed, char** out_json) {
  if (out_json == nullptr) return fail(SSB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const double z[] = {0.0, 0.5, 1.0, 2.0};
    *out_json = dup_string(ssb::to_json(ssb::check_gaussian_facts(z, samples, seed)).dump());
  });
}

}  // extern "C"
