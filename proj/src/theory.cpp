#include "ssb/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "ssb/random.hpp"

namespace ssb {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

double inverse_tail(double gamma) { return 1.0 / normal_cdf(-std::sqrt(4.0 / gamma)); }

}  // namespace

double cts_g_coefficient(double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  return 2.0 * std::sqrt(6.0 * gamma) + 8.0 * std::sqrt(3.0 * gamma) * inverse_tail(gamma);
}

double cl_sg_coefficient(double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  return 4.0 * std::sqrt(gamma) + 8.0 * std::sqrt(2.0 * gamma) * inverse_tail(gamma);
}

Minimum optimize_coefficient(const std::function<double(double)>& f, double lo, double hi,
                             std::size_t grid_points, double tolerance) {
  if (!(lo > 0.0) || !(lo < hi)) throw ConfigError("search interval must satisfy 0 < lo < hi");
  if (grid_points < 3) throw ConfigError("need at least 3 grid points");

  const double log_lo = std::log(lo), log_hi = std::log(hi);
  std::vector<double> xs(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i)
    xs[i] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1));
  xs.front() = lo;
  xs.back() = hi;

  std::size_t best = 0;
  double best_value = INFINITY;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double v = f(xs[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  Minimum out{xs[best], best_value};
  if (!std::isfinite(best_value)) return out;

  // Golden section on the bracket around the best grid point.
  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[std::min(best + 1, grid_points - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double v = f(x);
  if (v < out.value) out = Minimum{x, v};
  return out;
}

std::string_view to_string(LowerBoundTarget t) { return t == LowerBoundTarget::CtsG ? "cts-g" : "cl-sg"; }

LowerBoundTarget parse_lower_bound_target(std::string_view name) {
  if (name == "cts-g") return LowerBoundTarget::CtsG;
  if (name == "cl-sg") return LowerBoundTarget::ClSg;
  throw ConfigError("unknown lower-bound target '" + std::string(name) + "'");
}

void LowerBoundInstance::validate() const {
  if (m == 0) throw ConfigError("m must be at least 1");
  if (horizon < 2) throw ConfigError("horizon must be at least 2 (ln T > 0)");
  const double T = static_cast<double>(horizon);
  const double N = static_cast<double>(num_arms);
  const double lnT = std::log(T);
  if (target == LowerBoundTarget::CtsG) {
    if (num_arms < 400 * m) throw ConfigError("violated N >= 400m");
    if (!(T > 16.0 / 25.0 * N * lnT)) throw ConfigError("violated T > (16/25) N ln T");
    const double expected = 0.8 * std::sqrt(N * lnT / T);
    if (std::abs(gap - expected) > 1e-12 * expected) throw ConfigError("gap != (4/5) sqrt(N ln T / T)");
  } else {
    if (num_arms != 2 * m) throw ConfigError("violated N = 2m");
    const double expected = std::sqrt(N * lnT / (1e4 * static_cast<double>(m) * T));
    if (std::abs(gap - expected) > 1e-12 * expected) throw ConfigError("gap != sqrt(N ln T / (1e4 m T))");
  }
  if (!(gap > 0.0 && gap < 1.0)) throw ConfigError("violated 0 < gap < 1");
  if (optimal.size() != m || optimal.back() >= num_arms) throw ConfigError("optimal set must hold m valid arms");
}

std::vector<double> LowerBoundInstance::means() const {
  std::vector<double> out(num_arms, 0.0);
  for (ArmIndex a : optimal) out[a] = gap;
  return out;
}

LowerBoundInstance build_lower_bound_instance(LowerBoundTarget target, std::size_t m, std::uint64_t horizon,
                                              std::size_t num_arms) {
  if (m == 0) throw ConfigError("m must be at least 1");
  LowerBoundInstance inst;
  inst.target = target;
  inst.m = m;
  inst.horizon = horizon;
  if (target == LowerBoundTarget::CtsG) {
    inst.num_arms = num_arms == 0 ? 400 * m : num_arms;
  } else {
    if (num_arms != 0 && num_arms != 2 * m) throw ConfigError("violated N = 2m");
    inst.num_arms = 2 * m;
  }
  const double T = static_cast<double>(horizon);
  const double N = static_cast<double>(inst.num_arms);
  const double lnT = horizon >= 2 ? std::log(T) : 0.0;
  inst.gap = target == LowerBoundTarget::CtsG ? 0.8 * std::sqrt(N * lnT / T)
                                              : std::sqrt(N * lnT / (1e4 * static_cast<double>(m) * T));
  inst.optimal.resize(m);
  for (std::size_t i = 0; i < m; ++i) inst.optimal[i] = i;
  inst.validate();
  return inst;
}

bool GaussianFactReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const GaussianFactRow& r) {
    return r.lower_bound_holds && r.upper_bound_one_sided_holds && r.tail_lower_bound_holds &&
           r.estimate_matches_exact;
  });
}

GaussianFactReport check_gaussian_facts(std::span<const double> z_values, std::uint64_t samples,
                                        std::uint64_t seed) {
  if (samples < 1'000'000) throw ConfigError("Gaussian fact checks need at least 1e6 samples");
  for (double z : z_values)
    if (!(z >= 0.0) || !std::isfinite(z)) throw ConfigError("z values must be finite and non-negative");

  constexpr std::size_t kShards = 8;
  const std::size_t nz = z_values.size();
  std::vector<std::vector<std::uint64_t>> upper(kShards, std::vector<std::uint64_t>(nz, 0));
  std::vector<std::vector<std::uint64_t>> absolute(kShards, std::vector<std::uint64_t>(nz, 0));
  {
    std::vector<std::jthread> workers;
    for (std::size_t s = 0; s < kShards; ++s) {
      workers.emplace_back([&, s] {
        RngStream rng(seed, s);
        const std::uint64_t n = samples / kShards + (s < samples % kShards ? 1 : 0);
        for (std::uint64_t i = 0; i < n; ++i) {
          const double x = rng.standard_normal();
          const double ax = std::abs(x);
          for (std::size_t k = 0; k < nz; ++k) {
            upper[s][k] += x > z_values[k];
            absolute[s][k] += ax > z_values[k];
          }
        }
      });
    }
  }

  GaussianFactReport report;
  report.seed = seed;
  const double n = static_cast<double>(samples);
  for (std::size_t k = 0; k < nz; ++k) {
    GaussianFactRow r;
    const double z = z_values[k];
    std::uint64_t up = 0, ab = 0;
    for (std::size_t s = 0; s < kShards; ++s) {
      up += upper[s][k];
      ab += absolute[s][k];
    }
    r.z = z;
    r.samples = samples;
    r.one_sided_estimate = static_cast<double>(up) / n;
    r.two_sided_estimate = static_cast<double>(ab) / n;
    r.one_sided_exact = normal_cdf(-z);
    r.two_sided_exact = 2.0 * normal_cdf(-z);
    r.one_sided_stderr = std::sqrt(r.one_sided_exact * (1.0 - r.one_sided_exact) / n);
    r.two_sided_stderr = std::sqrt(r.two_sided_exact * (1.0 - r.two_sided_exact) / n);
    r.lower_bound = std::exp(-3.5 * z * z) / (4.0 * std::sqrt(std::numbers::pi));
    r.upper_bound = 0.5 * std::exp(-0.5 * z * z);
    const double slack1 = 5.0 * r.one_sided_stderr, slack2 = 5.0 * r.two_sided_stderr;
    r.lower_bound_holds = r.two_sided_estimate + slack2 >= r.lower_bound;
    r.upper_bound_one_sided_holds = r.one_sided_estimate - slack1 <= r.upper_bound;
    r.upper_bound_two_sided_holds = r.two_sided_estimate - slack2 <= r.upper_bound;
    if (z > 0.0) {
      r.tail_lower_bound = z / (z * z + 1.0) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
      r.tail_lower_bound_holds = r.one_sided_estimate + slack1 >= r.tail_lower_bound;
    }
    r.estimate_matches_exact = std::abs(r.one_sided_estimate - r.one_sided_exact) <= slack1 + 1e-12 &&
                               std::abs(r.two_sided_estimate - r.two_sided_exact) <= slack2 + 1e-12;
    report.rows.push_back(r);
  }
  return report;
}

}  // namespace ssb
