#include <random>

#include "doctest.h"
#include "ssb/oracles.hpp"

using namespace ssb;

namespace {

ArmSet all_edges(const GridShape& g) {
  ArmSet s(g.num_edges());
  for (ArmIndex e = 0; e < s.size(); ++e) s[e] = e;
  return s;
}

ArmSet random_subset(std::size_t n, double keep, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(keep);
  ArmSet s;
  for (ArmIndex a = 0; a < n; ++a)
    if (coin(gen)) s.push_back(a);
  return s;
}

}  // namespace

TEST_CASE("top-m oracle") {
  const std::vector<double> w{0.3, 0.1, 0.9, 0.2};
  CHECK(oracle_top_m(w, {0, 1, 2, 3}, 2) == SuperArm({0, 2}));
  const std::vector<double> flat{0.5, 0.5, 0.5};
  CHECK(oracle_top_m(flat, {0, 1, 2}, 2) == SuperArm({0, 1}));
  CHECK(oracle_top_m(w, {1, 3}, 3) == SuperArm({1, 3}));
  CHECK(oracle_top_m(w, {}, 3).empty());
}

TEST_CASE("monotone path oracle") {
  SUBCASE("2x2 grid picks the heavier of the two paths") {
    const GridShape g{2, 2};
    std::vector<double> w(g.num_edges());
    w[g.right_edge(0, 0)] = 1;
    w[g.up_edge(0, 0)] = 0;
    w[g.up_edge(1, 0)] = 1;
    w[g.right_edge(0, 1)] = 0;
    const auto path = oracle_monotone_path(g, w, all_edges(g));
    REQUIRE(path);
    CHECK(*path == SuperArm({g.right_edge(0, 0), g.up_edge(1, 0)}));
    CHECK(super_arm_value(w, *path) == 2.0);
  }
  SUBCASE("no available route") {
    const GridShape g{4, 4};
    const std::vector<double> w(g.num_edges(), 1.0);
    CHECK_FALSE(oracle_monotone_path(g, w, {}));
    // Cut every edge leaving the source.
    ArmSet avail = all_edges(g);
    std::erase(avail, g.right_edge(0, 0));
    std::erase(avail, g.up_edge(0, 0));
    CHECK_FALSE(oracle_monotone_path(g, w, avail));
  }
  SUBCASE("equal weights give the lexicographically smallest path") {
    const GridShape g{4, 4};
    const std::vector<double> w(g.num_edges(), 0.7);
    const FeasibleSet f = MonotonePaths{g, all_edges(g)};
    const auto paths = enumerate_super_arms(f);
    CHECK(paths.size() == 20);
    const SuperArm smallest = *std::min_element(paths.begin(), paths.end());
    CHECK(smallest == SuperArm({0, 1, 2, 15, 19, 23}));
    CHECK(oracle_monotone_path(g, w, all_edges(g)) == smallest);
  }
}

TEST_CASE("brute-force oracle") {
  const FeasibleSet f = Explicit{{SuperArm({0}), SuperArm({1})}};
  CHECK(oracle_bruteforce(f, std::vector<double>{1.0, 2.0}) == SuperArm({1}));
  CHECK_FALSE(oracle_bruteforce(Explicit{}, std::vector<double>{}));
  // C(40, 20) members exceeds the cap.
  ArmSet forty(40);
  for (ArmIndex a = 0; a < 40; ++a) forty[a] = a;
  CHECK_THROWS_AS(oracle_bruteforce(TopM{20, forty}, std::vector<double>(40, 0.0)), ConfigError);
}

TEST_CASE("structured oracles equal brute force on random weights") {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> small(1, 12);
  // Coarse weights force ties so the tie rule is exercised too.
  std::uniform_int_distribution<int> coarse(0, 2);

  for (int trial = 0; trial < 1000; ++trial) {
    const bool tied = trial % 4 == 0;
    const std::size_t n = small(gen);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, n)(gen);
    std::vector<double> w(n);
    for (double& x : w) x = tied ? 0.5 * coarse(gen) : unit(gen);
    const ArmSet avail = trial % 2 ? random_subset(n, 0.7, gen) : random_subset(n, 1.0, gen);
    const FeasibleSet f = TopM{m, avail};
    const auto fast = oracle_argmax(f, w);
    const auto slow = oracle_bruteforce(f, w);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      CHECK(super_arm_score(w, *fast) == super_arm_score(w, *slow));
      CHECK(*fast == *slow);
    }
  }

  const GridShape shapes[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 3}, {4, 4}};
  for (int trial = 0; trial < 1000; ++trial) {
    const GridShape g = shapes[trial % 6];
    const bool tied = trial % 5 == 0;
    std::vector<double> w(g.num_edges());
    for (double& x : w) x = tied ? 0.5 * coarse(gen) : unit(gen);
    const ArmSet avail = trial % 3 == 0 ? random_subset(g.num_edges(), 0.75, gen) : all_edges(g);
    const FeasibleSet f = MonotonePaths{g, avail};
    const auto fast = oracle_argmax(f, w);
    const auto slow = oracle_bruteforce(f, w);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      CHECK(super_arm_score(w, *fast) == super_arm_score(w, *slow));
      CHECK(*fast == *slow);
    }
  }
}

TEST_CASE("sentinel arms outrank finite weights") {
  const std::vector<double> w{0.9, kSentinelIndex, 0.1, kSentinelIndex};
  CHECK(oracle_top_m(w, {0, 1, 2, 3}, 1) == SuperArm({1}));
  CHECK(oracle_top_m(w, {0, 1, 2, 3}, 3) == SuperArm({0, 1, 3}));

  const GridShape g{3, 3};
  std::vector<double> pw(g.num_edges(), 5.0);
  pw[g.up_edge(0, 0)] = kSentinelIndex;
  const auto path = oracle_monotone_path(g, pw, all_edges(g));
  REQUIRE(path);
  CHECK(path->contains(g.up_edge(0, 0)));
  CHECK(super_arm_score(pw, *path).sentinels == 1);

  // More sentinels beat fewer regardless of finite weights.
  std::vector<double> qw(g.num_edges(), 0.0);
  qw[g.right_edge(0, 0)] = kSentinelIndex;
  qw[g.up_edge(0, 0)] = kSentinelIndex;
  qw[g.up_edge(0, 1)] = kSentinelIndex;
  qw[g.right_edge(0, 2)] = 100.0;
  const auto best = oracle_monotone_path(g, qw, all_edges(g));
  REQUIRE(best);
  CHECK(super_arm_score(qw, *best).sentinels == 2);
  CHECK(*best == oracle_bruteforce(MonotonePaths{g, all_edges(g)}, qw));
}

TEST_CASE("removing arms never increases the optimal value") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const GridShape g{4, 4};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(g.num_edges());
    for (double& x : w) x = unit(gen);
    ArmSet avail = all_edges(g);
    std::optional<double> previous = super_arm_value(w, *oracle_monotone_path(g, w, avail));
    while (!avail.empty()) {
      avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(gen() % avail.size()));
      const auto path = oracle_monotone_path(g, w, avail);
      if (!path) break;
      const double v = super_arm_value(w, *path);
      CHECK(v <= *previous);
      previous = v;
    }
    std::vector<double> tw(10);
    for (double& x : tw) x = unit(gen);
    ArmSet arms = all_edges(GridShape{11, 1});  // 0..9
    double prev = super_arm_value(tw, oracle_top_m(tw, arms, 3));
    while (arms.size() > 3) {
      arms.erase(arms.begin() + static_cast<std::ptrdiff_t>(gen() % arms.size()));
      const double v = super_arm_value(tw, oracle_top_m(tw, arms, 3));
      CHECK(v <= prev);
      prev = v;
    }
  }
}
