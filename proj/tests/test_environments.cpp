#include <cmath>
#include <memory>
#include <sstream>

#include "doctest.h"
#include "ssb/environments.hpp"
#include "ssb/oracles.hpp"

using namespace ssb;

namespace {

std::shared_ptr<const TraceDataset> small_trace() {
  std::istringstream csv(
      "minute_iso8601,node,neighbor,ett_ms\n"
      "2023-05-01T12:00Z,a,b,50\n"
      "2023-05-01T12:00Z,b,c,120\n"
      "2023-05-01T12:00Z,a,c,250\n"
      "2023-05-01T12:01Z,a,b,120\n"
      "2023-05-01T12:01Z,c,b,50\n");
  return std::make_shared<const TraceDataset>(parse_trace_csv(csv));
}

}  // namespace

TEST_CASE("grid mesh availability extremes") {
  GridMeshConfig c;
  c.availability = 1.0;
  auto env = make_environment(c);
  RngStream rng(1, 1);
  for (Round t = 1; t <= 20; ++t) {
    const auto f = std::get<MonotonePaths>(env->reveal(t, rng));
    CHECK(f.available_edges.size() == 24);
  }
  c.availability = 0.0;
  env = make_environment(c);
  for (Round t = 1; t <= 20; ++t) CHECK(is_empty(env->reveal(t, rng)));
  c.availability = 1.5;
  CHECK_THROWS_AS(make_environment(c), ConfigError);
}

TEST_CASE("grid mesh true means") {
  auto env = make_environment(GridMeshConfig{});
  const auto means = env->true_means(1);
  REQUIRE(means.size() == 24);
  CHECK(std::count(means.begin(), means.end(), 0.9) == 6);
  CHECK(std::count(means.begin(), means.end(), 0.8) == 18);
  for (ArmIndex e : grid_optimal_path(GridShape{4, 4})) CHECK(means[e] == 0.9);
  CHECK(env->max_cardinality() == 6);
  CHECK(env->name() == "grid");
}

TEST_CASE("grid mesh rewards are Bernoulli with the stated means") {
  GridMeshConfig c;
  c.availability = 1.0;
  auto env = make_environment(c);
  RngStream rng(9, 1);
  const SuperArm all_bottom({0, 1, 2, 15, 19, 23});
  double sum_opt = 0.0;
  const int rounds = 50000;
  for (Round t = 1; t <= static_cast<Round>(rounds); ++t) {
    env->reveal(t, rng);
    for (const auto& [a, r] : env->draw_rewards(all_bottom, t, rng)) {
      CHECK((r == 0.0 || r == 1.0));
      if (a == 0) sum_opt += r;
    }
  }
  // 0.9 with sd 0.3/sqrt(n), five standard errors.
  CHECK(std::abs(sum_opt / rounds - 0.9) < 5 * 0.3 / std::sqrt(rounds));
  CHECK_THROWS_AS(env->draw_rewards(all_bottom, rounds + 5, rng), InvariantError);
}

TEST_CASE("stochastic environments consume a fixed number of uniforms per round") {
  GridMeshConfig c;
  auto env = make_environment(c);
  RngStream rng(2, 1);
  for (Round t = 1; t <= 10; ++t) {
    env->reveal(t, rng);
    if (t % 2) env->draw_rewards(SuperArm({0}), t, rng);
  }
  CHECK(rng.uniform_draws() == 10 * 2 * 24);
  CHECK(rng.normal_draws() == 0);
}

TEST_CASE("availability is independent across arms") {
  // 2x2 contingency test on two arms with availability 0.5.
  SyntheticTopMConfig c{2, 1, {0.5, 0.5}, {0.5, 0.5}};
  auto env = make_environment(c);
  RngStream rng(17, 1);
  double counts[2][2] = {{0, 0}, {0, 0}};
  const int rounds = 40000;
  for (Round t = 1; t <= static_cast<Round>(rounds); ++t) {
    const auto f = std::get<TopM>(env->reveal(t, rng));
    const bool a0 = std::binary_search(f.available.begin(), f.available.end(), 0);
    const bool a1 = std::binary_search(f.available.begin(), f.available.end(), 1);
    counts[a0][a1] += 1;
  }
  double chi2 = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double row = counts[i][0] + counts[i][1];
      const double col = counts[0][j] + counts[1][j];
      const double expected = row * col / rounds;
      chi2 += (counts[i][j] - expected) * (counts[i][j] - expected) / expected;
    }
  // chi-square with 1 dof; 10.83 is the 0.999 quantile.
  CHECK(chi2 < 10.83);
}

TEST_CASE("synthetic top-m validation and Bernoulli(1)") {
  CHECK_THROWS_AS(make_environment(SyntheticTopMConfig{2, 1, {0.5}, {1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(make_environment(SyntheticTopMConfig{2, 0, {0.5, 0.5}, {1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(make_environment(SyntheticTopMConfig{1, 1, {1.2}, {1.0}}), ConfigError);
  auto env = make_environment(SyntheticTopMConfig{3, 2, {1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}});
  RngStream rng(4, 1);
  for (Round t = 1; t <= 100; ++t) {
    env->reveal(t, rng);
    const auto r = env->draw_rewards(SuperArm({0, 1}), t, rng);
    CHECK(r.at(0) == 1.0);
    CHECK(r.at(1) == 0.0);
  }
}

TEST_CASE("all-zero means give zero regret for any choice") {
  auto env = make_environment(SyntheticTopMConfig{4, 2, {0, 0, 0, 0}, {0.7, 0.7, 0.7, 0.7}});
  RngStream rng(8, 1);
  for (Round t = 1; t <= 50; ++t) {
    const FeasibleSet f = env->reveal(t, rng);
    const auto means = env->true_means(t);
    for (const SuperArm& s : enumerate_super_arms(f)) CHECK(instantaneous_regret(means, f, s) == 0.0);
  }
}

TEST_CASE("lower-bound environment") {
  auto env = make_environment(LowerBoundConfig{LowerBoundTarget::CtsG, 1, 1'000'000, 0});
  RngStream rng(0, 1);
  const auto f = std::get<TopM>(env->reveal(1, rng));
  CHECK(f.m == 1);
  REQUIRE(f.available.size() == 400);
  CHECK(f.available.front() == 0);
  CHECK(f.available.back() == 399);
  const auto means = env->true_means(1);
  std::size_t gapped = 0;
  for (double x : means) {
    if (x != 0.0) {
      ++gapped;
      CHECK(x == doctest::Approx(0.05947075502159741).epsilon(1e-12));
    }
  }
  CHECK(gapped == 1);
  for (ArmIndex a : {ArmIndex{0}, ArmIndex{399}}) {
    const auto r = env->draw_rewards(SuperArm({a}), 3, rng);
    CHECK(r.at(a) == means[a]);
  }
  CHECK(rng.uniform_draws() == 0);
  CHECK_THROWS_AS(make_environment(LowerBoundConfig{LowerBoundTarget::CtsG, 1, 100, 0}), ConfigError);
}

TEST_CASE("trace-driven environment") {
  const auto trace = small_trace();
  // Links sorted: (a,b)=0, (a,c)=1, (b,c)=2. ETT range 50..250.
  TraceDrivenConfig c;
  c.trace = trace;
  c.mode = TraceMode::TopM;
  c.m = 1;
  auto env = make_environment(c);
  RngStream rng(0, 1);
  CHECK(std::get<TopM>(env->reveal(1, rng)).available == ArmSet{0, 1, 2});
  CHECK(std::get<TopM>(env->reveal(2, rng)).available == ArmSet{0, 2});
  const auto r = env->draw_rewards(SuperArm({2}), 1, rng);
  CHECK(r.at(2) == doctest::Approx(0.65).epsilon(1e-12));
  CHECK_THROWS_AS(env->draw_rewards(SuperArm({1}), 2, rng), InvariantError);
  CHECK(env->true_means(2)[1] == 0.0);
  CHECK_THROWS_AS(env->reveal(3, rng), DataError);
  CHECK(rng.uniform_draws() == 0);

  SUBCASE("path mode offers the simple paths present this minute") {
    c.mode = TraceMode::Path;
    c.source = "a";
    c.target = "c";
    auto penv = make_environment(c);
    CHECK(penv->max_cardinality() == 2);
    const auto f1 = std::get<Explicit>(penv->reveal(1, rng));
    CHECK(f1.super_arms == std::vector<SuperArm>{SuperArm({0, 2}), SuperArm({1})});
    const auto f2 = std::get<Explicit>(penv->reveal(2, rng));
    CHECK(f2.super_arms == std::vector<SuperArm>{SuperArm({0, 2})});
    // Best at minute 1: direct link pays 0, two hops pay 1 + 0.65.
    CHECK(oracle_argmax(FeasibleSet{f1}, penv->true_means(1)) == SuperArm({0, 2}));
  }
  SUBCASE("unknown nodes are rejected") {
    c.mode = TraceMode::Path;
    c.source = "a";
    c.target = "zz";
    CHECK_THROWS_AS(make_environment(c), ConfigError);
  }
}

TEST_CASE("trace replay is deterministic") {
  const auto trace = std::make_shared<const TraceDataset>(ingest_trace(SSB_TEST_DATA_DIR "/sample_trace.csv"));
  TraceDrivenConfig c;
  c.trace = trace;
  c.m = 2;
  auto e1 = make_environment(c);
  auto e2 = make_environment(c);
  RngStream r1(1, 1), r2(99, 7);
  for (Round t = 1; t <= trace->minutes(); ++t) {
    CHECK(std::get<TopM>(e1->reveal(t, r1)).available == std::get<TopM>(e2->reveal(t, r2)).available);
    CHECK(e1->true_means(t) == e2->true_means(t));
  }
}
