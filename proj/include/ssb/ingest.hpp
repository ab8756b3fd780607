#pragma once

// Per-minute link-quality traces.
//
// CSV input has the header `minute_iso8601,node,neighbor,ett_ms`, one row
// per (minute, directed neighbor entry). Links are undirected; minutes are
// re-indexed densely from 1 in chronological order. Each link's reward at a
// minute is 1 - normalized ETT.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssb/core.hpp"

namespace ssb {

enum class EttNormalization { Global, PerLink };

std::string_view to_string(EttNormalization n);
EttNormalization parse_normalization(std::string_view name);

struct TraceLink {
  std::string a;  // a < b
  std::string b;
  friend auto operator<=>(const TraceLink&, const TraceLink&) = default;
};

struct TraceSample {
  std::size_t minute = 0;  // 1-based
  std::size_t link = 0;
  double ett = 0.0;
  double reward = 0.0;
  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

class TraceDataset {
 public:
  TraceDataset() = default;
  /// Builds the dataset from raw (minute, link, ett) samples and computes
  /// the rewards. Samples are sorted by (minute, link); duplicates rejected.
  TraceDataset(std::vector<TraceLink> links, std::size_t minutes, std::vector<TraceSample> samples,
               EttNormalization normalization);

  const std::vector<TraceLink>& links() const { return links_; }
  std::size_t minutes() const { return minutes_; }
  const std::vector<TraceSample>& samples() const { return samples_; }
  EttNormalization normalization() const { return normalization_; }

  /// Rows dropped at ingest because ett <= 0.
  std::size_t rejected_rows() const { return rejected_rows_; }
  void set_rejected_rows(std::size_t n) { rejected_rows_ = n; }

  /// Links present at `minute`, ascending.
  ArmSet available(std::size_t minute) const;
  /// Reward per link at `minute`; 0 for absent links.
  std::vector<double> rewards(std::size_t minute) const;
  std::optional<double> reward(std::size_t minute, std::size_t link) const;

  friend bool operator==(const TraceDataset& x, const TraceDataset& y) {
    return x.links_ == y.links_ && x.minutes_ == y.minutes_ && x.samples_ == y.samples_ &&
           x.normalization_ == y.normalization_;
  }

 private:
  std::vector<TraceLink> links_;
  std::size_t minutes_ = 0;
  std::vector<TraceSample> samples_;
  std::vector<std::size_t> minute_begin_;  // offsets into samples_, size minutes_+2
  EttNormalization normalization_ = EttNormalization::Global;
  std::size_t rejected_rows_ = 0;
};

/// Minutes since the Unix epoch for an ISO-8601 timestamp
/// (YYYY-MM-DDTHH:MM[:SS[.fff]][Z|+hh:mm|-hh:mm]). Seconds are truncated.
std::optional<long long> parse_iso8601_minute(std::string_view text);

TraceDataset parse_trace_csv(std::istream& in, EttNormalization normalization = EttNormalization::Global);
TraceDataset parse_trace_json(std::string_view text);
std::string trace_to_json(const TraceDataset& trace);

/// Reads a CSV trace, or a canonical JSON trace when the file starts with '{'.
TraceDataset ingest_trace(const std::filesystem::path& path,
                          EttNormalization normalization = EttNormalization::Global);
void export_trace_json(const TraceDataset& trace, const std::filesystem::path& path);

}  // namespace ssb
