#pragma once

#include <cstdint>
#include <random>

namespace ssb {

/// Source of the random variates consumed by policies and environments.
/// Tests substitute scripted implementations to freeze draws.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform on [0, 1).
  virtual double uniform() = 0;
  virtual double standard_normal() = 0;
  /// Gamma(shape, 1).
  virtual double gamma(double shape) = 0;

  double normal(double mean, double stddev) { return mean + stddev * standard_normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  double beta(double a, double b);
};

/// Seeded Mersenne-Twister stream. Equal (seed, stream_id) pairs replay the
/// same sequence; distinct stream ids are seeded through std::seed_seq.
/// Counts every variate it hands out.
class RngStream final : public RandomSource {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform() override;
  double standard_normal() override;
  double gamma(double shape) override;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t uniform_draws() const { return uniform_draws_; }
  std::uint64_t normal_draws() const { return normal_draws_; }
  std::uint64_t gamma_draws() const { return gamma_draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t uniform_draws_ = 0;
  std::uint64_t normal_draws_ = 0;
  std::uint64_t gamma_draws_ = 0;
};

}  // namespace ssb
