#include "ssb/random.hpp"

namespace ssb {

double RandomSource::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream_id) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream_id),
                       static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  auto seq = make_seed_seq(seed, stream_id);
  engine_.seed(seq);
}

double RngStream::uniform() {
  ++uniform_draws_;
  // 53 random mantissa bits; never returns 1.0.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::standard_normal() {
  ++normal_draws_;
  return normal_(engine_);
}

double RngStream::gamma(double shape) {
  ++gamma_draws_;
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

}  // namespace ssb
