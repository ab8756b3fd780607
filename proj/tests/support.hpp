#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ssb/random.hpp"

namespace ssb::testing {

// Replays scripted standard normals; uniforms and gammas are fixed.
class ScriptedSource final : public RandomSource {
 public:
  explicit ScriptedSource(std::vector<double> normals = {}) : normals_(std::move(normals)) {}

  double uniform() override { return 0.5; }
  double standard_normal() override {
    if (next_ >= normals_.size()) throw std::out_of_range("script exhausted");
    return normals_[next_++];
  }
  double gamma(double shape) override { return shape; }

  std::size_t consumed() const { return next_; }

 private:
  std::vector<double> normals_;
  std::size_t next_ = 0;
};

// Always returns the same standard normal.
class ConstantNormal final : public RandomSource {
 public:
  explicit ConstantNormal(double z) : z_(z) {}
  double uniform() override { return 0.5; }
  double standard_normal() override {
    ++draws_;
    return z_;
  }
  double gamma(double shape) override { return shape; }
  std::size_t draws() const { return draws_; }

 private:
  double z_;
  std::size_t draws_ = 0;
};

}  // namespace ssb::testing
