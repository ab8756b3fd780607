#include "ssb/ingest.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ssb {

std::string_view to_string(EttNormalization n) { return n == EttNormalization::Global ? "global" : "per-link"; }

EttNormalization parse_normalization(std::string_view name) {
  if (name == "global") return EttNormalization::Global;
  if (name == "per-link") return EttNormalization::PerLink;
  throw ConfigError("unknown ETT normalization '" + std::string(name) + "'");
}

TraceDataset::TraceDataset(std::vector<TraceLink> links, std::size_t minutes, std::vector<TraceSample> samples,
                           EttNormalization normalization)
    : links_(std::move(links)), minutes_(minutes), samples_(std::move(samples)), normalization_(normalization) {
  for (const TraceSample& s : samples_) {
    if (s.minute == 0 || s.minute > minutes_) throw DataError("trace sample minute out of range");
    if (s.link >= links_.size()) throw DataError("trace sample references an unknown link");
    if (!(s.ett > 0.0) || !std::isfinite(s.ett)) throw DataError("trace sample has non-positive ETT");
  }
  std::sort(samples_.begin(), samples_.end(), [](const TraceSample& x, const TraceSample& y) {
    return std::tie(x.minute, x.link) < std::tie(y.minute, y.link);
  });
  for (std::size_t i = 1; i < samples_.size(); ++i)
    if (samples_[i].minute == samples_[i - 1].minute && samples_[i].link == samples_[i - 1].link)
      throw DataError("duplicate trace sample for one (minute, link)");

  std::vector<double> lo(links_.size(), INFINITY), hi(links_.size(), -INFINITY);
  double glo = INFINITY, ghi = -INFINITY;
  for (const TraceSample& s : samples_) {
    lo[s.link] = std::min(lo[s.link], s.ett);
    hi[s.link] = std::max(hi[s.link], s.ett);
    glo = std::min(glo, s.ett);
    ghi = std::max(ghi, s.ett);
  }
  for (TraceSample& s : samples_) {
    const double a = normalization_ == EttNormalization::Global ? glo : lo[s.link];
    const double b = normalization_ == EttNormalization::Global ? ghi : hi[s.link];
    s.reward = b > a ? std::clamp(1.0 - (s.ett - a) / (b - a), 0.0, 1.0) : 1.0;
  }

  // minute_begin_[m] = first sample with minute >= m.
  minute_begin_.assign(minutes_ + 2, 0);
  std::size_t i = 0;
  for (std::size_t m = 1; m <= minutes_ + 1; ++m) {
    while (i < samples_.size() && samples_[i].minute < m) ++i;
    minute_begin_[m] = i;
  }
}

ArmSet TraceDataset::available(std::size_t minute) const {
  if (minute == 0 || minute > minutes_) throw DataError("minute " + std::to_string(minute) + " beyond trace");
  ArmSet out;
  for (std::size_t i = minute_begin_[minute]; i < minute_begin_[minute + 1]; ++i) out.push_back(samples_[i].link);
  return out;
}

std::vector<double> TraceDataset::rewards(std::size_t minute) const {
  if (minute == 0 || minute > minutes_) throw DataError("minute " + std::to_string(minute) + " beyond trace");
  std::vector<double> out(links_.size(), 0.0);
  for (std::size_t i = minute_begin_[minute]; i < minute_begin_[minute + 1]; ++i)
    out[samples_[i].link] = samples_[i].reward;
  return out;
}

std::optional<double> TraceDataset::reward(std::size_t minute, std::size_t link) const {
  if (minute == 0 || minute > minutes_) return std::nullopt;
  for (std::size_t i = minute_begin_[minute]; i < minute_begin_[minute + 1]; ++i)
    if (samples_[i].link == link) return samples_[i].reward;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool read_int(std::string_view& s, std::size_t digits, int& out) {
  if (s.size() < digits) return false;
  int v = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  s.remove_prefix(digits);
  return true;
}

bool expect(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

}  // namespace

std::optional<long long> parse_iso8601_minute(std::string_view s) {
  int year, month, day, hour, minute;
  if (!read_int(s, 4, year) || !expect(s, '-') || !read_int(s, 2, month) || !expect(s, '-') ||
      !read_int(s, 2, day))
    return std::nullopt;
  if (s.empty() || (s.front() != 'T' && s.front() != ' ')) return std::nullopt;
  s.remove_prefix(1);
  if (!read_int(s, 2, hour) || !expect(s, ':') || !read_int(s, 2, minute)) return std::nullopt;
  if (!s.empty() && s.front() == ':') {
    int sec;
    s.remove_prefix(1);
    if (!read_int(s, 2, sec) || sec > 60) return std::nullopt;
    if (!s.empty() && s.front() == '.') {
      s.remove_prefix(1);
      if (s.empty() || s.front() < '0' || s.front() > '9') return std::nullopt;
      while (!s.empty() && s.front() >= '0' && s.front() <= '9') s.remove_prefix(1);
    }
  }
  int offset = 0;
  if (!s.empty()) {
    if (s == "Z") {
      s.remove_prefix(1);
    } else if (s.front() == '+' || s.front() == '-') {
      const int sign = s.front() == '+' ? 1 : -1;
      s.remove_prefix(1);
      int oh, om;
      if (!read_int(s, 2, oh) || !expect(s, ':') || !read_int(s, 2, om) || oh > 23 || om > 59)
        return std::nullopt;
      offset = sign * (oh * 60 + om);
    }
  }
  if (!s.empty() || hour > 23 || minute > 59) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  const long long days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return days * 1440 + hour * 60 + minute - offset;
}

TraceDataset parse_trace_csv(std::istream& in, EttNormalization normalization) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("trace is empty");
  std::string_view header = trim(line);
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (header != "minute_iso8601,node,neighbor,ett_ms")
    throw DataError("line 1: expected header 'minute_iso8601,node,neighbor,ett_ms'");

  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::pair<long long, TraceLink>, Acc> acc;
  std::size_t rejected = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      fields.push_back(trim(row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != 4) throw DataError(where + "expected 4 fields, got " + std::to_string(fields.size()));
    const auto minute = parse_iso8601_minute(fields[0]);
    if (!minute) throw DataError(where + "bad timestamp '" + std::string(fields[0]) + "'");
    if (fields[1].empty() || fields[2].empty()) throw DataError(where + "empty node identifier");
    if (fields[1] == fields[2]) throw DataError(where + "link from a node to itself");
    double ett = 0.0;
    const char* end = fields[3].data() + fields[3].size();
    const auto [ptr, ec] = std::from_chars(fields[3].data(), end, ett);
    if (ec != std::errc{} || ptr != end || !std::isfinite(ett))
      throw DataError(where + "bad ETT value '" + std::string(fields[3]) + "'");
    if (ett <= 0.0) {
      ++rejected;
      continue;
    }
    TraceLink link{std::string(fields[1]), std::string(fields[2])};
    if (link.b < link.a) std::swap(link.a, link.b);
    Acc& a = acc[{*minute, std::move(link)}];
    a.sum += ett;
    a.count += 1;
  }
  if (acc.empty()) throw DataError("trace has no usable rows");

  std::set<long long> minute_keys;
  std::set<TraceLink> link_keys;
  for (const auto& [key, _] : acc) {
    minute_keys.insert(key.first);
    link_keys.insert(key.second);
  }
  std::map<long long, std::size_t> minute_index;
  for (long long k : minute_keys) minute_index.emplace(k, minute_index.size() + 1);
  std::vector<TraceLink> links(link_keys.begin(), link_keys.end());

  std::vector<TraceSample> samples;
  samples.reserve(acc.size());
  for (const auto& [key, a] : acc) {
    const auto it = std::lower_bound(links.begin(), links.end(), key.second);
    samples.push_back(TraceSample{minute_index.at(key.first), static_cast<std::size_t>(it - links.begin()),
                                  a.sum / static_cast<double>(a.count), 0.0});
  }
  TraceDataset ds(std::move(links), minute_keys.size(), std::move(samples), normalization);
  ds.set_rejected_rows(rejected);
  return ds;
}

std::string trace_to_json(const TraceDataset& trace) {
  nlohmann::json j;
  j["format"] = "ssb-trace/1";
  j["normalization"] = std::string(to_string(trace.normalization()));
  j["minutes"] = trace.minutes();
  j["rejected_rows"] = trace.rejected_rows();
  nlohmann::json links = nlohmann::json::array();
  for (const TraceLink& l : trace.links()) links.push_back({l.a, l.b});
  j["links"] = std::move(links);
  nlohmann::json samples = nlohmann::json::array();
  for (const TraceSample& s : trace.samples()) samples.push_back({s.minute, s.link, s.ett});
  j["samples"] = std::move(samples);
  return j.dump();
}

TraceDataset parse_trace_json(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<TraceLink> links;
    for (const auto& l : j.at("links")) {
      TraceLink link{l.at(0).get<std::string>(), l.at(1).get<std::string>()};
      if (link.b < link.a) std::swap(link.a, link.b);
      links.push_back(std::move(link));
    }
    std::vector<TraceSample> samples;
    for (const auto& s : j.at("samples"))
      samples.push_back(TraceSample{s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>(), s.at(2).get<double>(), 0.0});
    const auto norm = parse_normalization(j.value("normalization", std::string("global")));
    TraceDataset ds(std::move(links), j.at("minutes").get<std::size_t>(), std::move(samples), norm);
    ds.set_rejected_rows(j.value("rejected_rows", std::size_t{0}));
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed JSON trace: ") + e.what());
  }
}

TraceDataset ingest_trace(const std::filesystem::path& path, EttNormalization normalization) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  const int first = in.peek();
  if (first == '{') {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace_json(buf.str());
  }
  return parse_trace_csv(in, normalization);
}

void export_trace_json(const TraceDataset& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  out << trace_to_json(trace) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ssb
