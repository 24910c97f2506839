/*
Copyright 2026 The crowdteam Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "crowdteam/solvers.hpp"

#include "doctest.h"
#include "oracle.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace crowdteam;

namespace {

ProjectSpec first_skills(int r, std::array<double, 4> gamma = {0.25, 0.25, 0.25, 0.25}) {
  ProjectSpec p;
  for (int i = 0; i < r; ++i) p.required_skills.push_back(i);
  p.gamma = gamma;
  return p;
}

// Probability that "stop at the first success at index >= s" stops on the last
// success, by enumerating all 2^n outcome patterns.
double odds_oracle(const std::vector<double>& p, std::size_t s) {
  const std::size_t n = p.size();
  double win = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double prob = 1.0;
    for (std::size_t j = 0; j < n; ++j) prob *= (mask >> j) & 1u ? p[j] : 1.0 - p[j];
    std::size_t stop = n;
    for (std::size_t j = s; j < n; ++j)
      if ((mask >> j) & 1u) {
        stop = j;
        break;
      }
    if (stop == n) continue;
    bool later = false;
    for (std::size_t j = stop + 1; j < n; ++j) later = later || ((mask >> j) & 1u);
    if (!later) win += prob;
  }
  return win;
}

}  // namespace

TEST_CASE("configuration counts") {
  CHECK(configuration_count(6, 3, CountMode::ordered) == 720);
  CHECK(configuration_count(5, 3, CountMode::ordered) == 360);
  CHECK(configuration_count(5, 3, CountMode::distinct) == 180);
  for (int n = 1; n <= 9; ++n) CHECK(configuration_count(n, 1, CountMode::distinct) == std::uint64_t(n));
  for (int n = 1; n <= 9; ++n)
    for (int r = 1; r <= n; ++r) {
      std::uint64_t f = 1;
      for (int i = 2; i < r; ++i) f *= std::uint64_t(i);
      CHECK(configuration_count(n, r, CountMode::ordered) == configuration_count(n, r, CountMode::distinct) * f);
    }
  CHECK_THROWS_AS(configuration_count(2, 3, CountMode::distinct), InfeasibleProject);
  CHECK_THROWS_AS(configuration_count(2, 0, CountMode::distinct), ParameterError);
}

TEST_CASE("enumeration") {
  SUBCASE("three workers, three skills") {
    const Instance inst = generate_instance({3, 3, 0.5, 1});
    const auto all = enumerate_configurations(inst, first_skills(3));
    CHECK(all.size() == 18);
  }
  SUBCASE("two workers, one skill") {
    const Instance inst = generate_instance({2, 1, 0.5, 1});
    const auto all = enumerate_configurations(inst, first_skills(1));
    REQUIRE(all.size() == 2);
    CHECK(all[0] == TeamConfig{0, {{0, 0}}});
    CHECK(all[1] == TeamConfig{1, {{0, 1}}});
  }
  SUBCASE("documented order") {
    const ConfigurationSpace space(4, first_skills(2));
    // leader 0: teammates 1, 2, 3; each with the two skill orders of the sorted team
    CHECK(space.at(0) == TeamConfig{0, {{0, 0}, {1, 1}}});
    CHECK(space.at(1) == TeamConfig{0, {{0, 1}, {1, 0}}});
    CHECK(space.at(2) == TeamConfig{0, {{0, 0}, {1, 2}}});
    CHECK(space.at(6) == TeamConfig{1, {{0, 0}, {1, 1}}});
    CHECK(space.at(8) == TeamConfig{1, {{0, 1}, {1, 2}}});
    CHECK(space.at(23) == TeamConfig{3, {{0, 3}, {1, 2}}});
  }
  SUBCASE("lengths, validity and distinctness for N <= 7, r <= 4") {
    for (int n = 1; n <= 7; ++n)
      for (int r = 1; r <= std::min(n, 4); ++r) {
        const Instance inst = generate_instance({n, 4, 0.5, 3});
        const ProjectSpec project = first_skills(r);
        const auto all = enumerate_configurations(inst, project);
        REQUIRE(all.size() == configuration_count(n, r, CountMode::distinct));
        std::set<std::pair<int, std::vector<SkillAssignment>>> seen;
        int previous_leader = 0;
        for (const auto& c : all) {
          CHECK(config_violation(c, project, n).empty());
          CHECK(c.leader >= previous_leader);
          previous_leader = c.leader;
          seen.insert({c.leader, c.assignment});
        }
        CHECK(seen.size() == all.size());
        CHECK(testing::oracle_best(inst, project, PerceptionModel{}).count == all.size());
      }
  }
  SUBCASE("infeasible and oversized projects") {
    const Instance inst = generate_instance({2, 3, 0.5, 1});
    CHECK_THROWS_AS(enumerate_configurations(inst, first_skills(3)), InfeasibleProject);
    ProjectSpec big;
    for (int i = 0; i < 6; ++i) big.required_skills.push_back(i);
    CHECK_THROWS_AS(ConfigurationSpace(40, big), CapacityError);
  }
}

TEST_CASE("shuffled stream") {
  const Instance inst = generate_instance({5, 3, 0.4, 8});
  const ProjectSpec project = first_skills(3);
  const auto a = shuffled_configuration_stream(inst, project, 99);
  CHECK(a == shuffled_configuration_stream(inst, project, 99));
  CHECK(a != shuffled_configuration_stream(inst, project, 100));

  auto sorted = a;
  auto listed = enumerate_configurations(inst, project);
  auto key = [](const TeamConfig& c) { return std::make_pair(c.leader, c.assignment); };
  std::sort(sorted.begin(), sorted.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
  std::sort(listed.begin(), listed.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
  CHECK(sorted == listed);

  SUBCASE("ordered space repeats each configuration (r-1)! times") {
    const ConfigurationSpace space(5, project);
    const ShuffledStream stream(space, 4, StreamSpace::ordered);
    REQUIRE(stream.size() == 360);
    std::vector<int> hits(space.size(), 0);
    for (std::uint64_t i = 0; i < stream.size(); ++i) ++hits[stream.config_index(i)];
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 2; }));
  }
}

TEST_CASE("shuffled stream is uniform") {
  // N = 2, r = 2 has four configurations.
  const ConfigurationSpace space(2, first_skills(2));
  REQUIRE(space.size() == 4);
  std::array<int, 4> first{};
  const int seeds = 100000;
  for (int s = 0; s < seeds; ++s) ++first[ShuffledStream(space, Seed(s)).config_index(0)];
  for (int c : first) CHECK(std::abs(c / double(seeds) - 0.25) < 0.01);
}

TEST_CASE("exhaustive solver") {
  SUBCASE("skill-only objective assigns each skill to its best worker") {
    MatrixXd skills(4, 2);
    skills << 0.1, 0.9,  //
        0.8, 0.2,        //
        0.3, 0.3,        //
        0.4, 0.5;
    const Instance inst = make_instance(skills, MatrixXd::Zero(4, 2), MatrixXb::Constant(4, 4, false));
    const auto r = exhaustive_solver(inst, first_skills(2, {1, 0, 0, 0}), {0.0, 1.0, 0});
    const std::vector<SkillAssignment> want{{0, 1}, {1, 0}};
    auto got = r.chosen.assignment;
    std::sort(got.begin(), got.end());
    CHECK(got == want);
    CHECK(r.total_te == doctest::Approx(0.85));
    CHECK(r.evaluations == 4 * 3 * 2);
    CHECK(r.rank == 1);
  }
  SUBCASE("single feasible configuration") {
    const Instance inst = generate_instance({1, 1, 0.5, 2});
    const auto r = exhaustive_solver(inst, first_skills(1), {});
    CHECK(r.chosen == TeamConfig{0, {{0, 0}}});
    CHECK(r.evaluations == 1);
    CHECK(r.total_te == doctest::Approx(0.25 * inst.skills(0, 0) - 0.25 * inst.costs(0, 0)));
  }
  SUBCASE("matches the brute-force oracle") {
    for (Seed s = 0; s < 40; ++s) {
      const Instance inst = generate_instance({4, 3, 0.4, s});
      const ProjectSpec project{{int(s % 3), int((s + 1) % 3)}, {0.25, 0.25, 0.25, 0.25}};
      const PerceptionModel model{0.2, 1.0, s + 1000};
      const auto r = exhaustive_solver(inst, project, model);
      const auto o = testing::oracle_best(inst, project, model);
      CHECK(r.chosen == o.best);
      CHECK(r.total_te == doctest::Approx(o.total).epsilon(1e-12));
    }
  }
}

TEST_CASE("exploration threshold") {
  CHECK(exploration_threshold(360) == 133);
  CHECK(exploration_threshold(720) == 265);
  CHECK(exploration_threshold(1) == 1);
  CHECK(exploration_threshold(10, 0) == 0);
  CHECK(exploration_threshold(10, 10) == 10);
  CHECK_THROWS_AS(exploration_threshold(10, 11), ParameterError);
  CHECK_THROWS_AS(exploration_threshold(0), ParameterError);
}

TEST_CASE("secretary rule on explicit score streams") {
  auto run = [](std::vector<double> s, std::uint64_t k, Fallback f) {
    return secretary_stop(s.size(), k, f, [&](std::uint64_t i) { return s[i]; });
  };
  auto d = run({1, 3, 2}, 1, Fallback::last);
  CHECK(d.position == 1);
  CHECK(d.evaluations == 2);
  CHECK_FALSE(d.fell_back);

  d = run({3, 1, 2}, 1, Fallback::last);
  CHECK(d.position == 2);
  CHECK(d.evaluations == 3);
  CHECK(d.fell_back);

  d = run({3, 1, 2}, 1, Fallback::best_seen);
  CHECK(d.position == 0);

  d = run({5, 7, 9}, 0, Fallback::last);
  CHECK(d.position == 0);
  CHECK(d.evaluations == 1);

  d = run({5, 7, 9}, 3, Fallback::last);
  CHECK(d.position == 2);
  CHECK(d.evaluations == 3);

  // Ties do not count as an improvement.
  d = run({2, 2, 1}, 1, Fallback::last);
  CHECK(d.position == 2);

  CHECK_THROWS_AS(run({1, 2}, 3, Fallback::last), ParameterError);
}

TEST_CASE("secretary solver") {
  SUBCASE("k edge cases follow the stream") {
    const Instance inst = generate_instance({5, 3, 0.4, 12});
    const ProjectSpec project = first_skills(3);
    const auto stream = shuffled_configuration_stream(inst, project, 77);
    SecretaryOptions opts{77, 0, Fallback::last, StreamSpace::distinct};
    auto r = secretary_solver(inst, project, {}, opts);
    CHECK(r.chosen == stream.front());
    CHECK(r.evaluations == 1);
    opts.k = stream.size();
    r = secretary_solver(inst, project, {}, opts);
    CHECK(r.chosen == stream.back());
    CHECK(r.evaluations == stream.size());
    opts.k = stream.size() + 1;
    CHECK_THROWS_AS(secretary_solver(inst, project, {}, opts), ParameterError);
  }
  SUBCASE("never beats the exhaustive optimum") {
    SplitMix64 rng(31);
    for (int t = 0; t < 300; ++t) {
      const int n = 2 + int(rng.below(5));
      const int r = 1 + int(rng.below(std::uint64_t(std::min(n, 3))));
      const Instance inst = generate_instance({n, 3, rng.uniform01(), rng()});
      const TeamEvaluator ev(inst, first_skills(r), {0.2, 1.0, rng()});
      const auto best = exhaustive_solver(ev);
      SecretaryOptions opts;
      opts.stream_seed = rng();
      opts.fallback = rng.below(2) ? Fallback::last : Fallback::best_seen;
      const auto sec = secretary_solver(ev, opts);
      CHECK(sec.total_te <= best.total_te);
      CHECK(sec.evaluations >= 1);
      CHECK(sec.evaluations <= configuration_count(n, r, CountMode::distinct));
    }
  }
}

TEST_CASE("secretary probabilities on 360 distinct scores") {
  const std::uint64_t n = 360, k = 133;
  const int seeds = 50000;
  int best = 0, full = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto order = shuffled_order(n, Seed(s));
    const auto d = secretary_stop(n, k, Fallback::last, [&](std::uint64_t i) { return double(order[i]); });
    best += order[d.position] == n - 1;
    full += d.fell_back;
  }
  CHECK(std::abs(best / double(seeds) - 0.368) < 0.01);
  CHECK(std::abs(full / double(seeds) - double(k) / double(n)) < 0.01);
}

TEST_CASE("odds algorithm") {
  SUBCASE("secretary record indicators, n = 4") {
    const std::vector<double> p{1.0, 1.0 / 2, 1.0 / 3, 1.0 / 4};
    const auto r = odds_stopping_index(p);
    CHECK(r.first_candidate == 1);  // stop index 2 counting from one
    CHECK(std::abs(r.win_probability - 11.0 / 24.0) < 1e-12);

    // All 4! arrival orders: skip the first, take the next record.
    std::vector<int> order{1, 2, 3, 4};
    int wins = 0, total = 0;
    do {
      ++total;
      int chosen = order.back();
      for (std::size_t i = 1; i < order.size(); ++i)
        if (order[i] > order[0] && std::all_of(order.begin() + 1, order.begin() + long(i), [&](int x) { return x < order[i]; })) {
          chosen = order[i];
          break;
        }
      wins += chosen == 4;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(wins * 24 == 11 * total);
  }
  SUBCASE("single event") {
    const auto r = odds_stopping_index(std::vector<double>{0.5});
    CHECK(r.first_candidate == 0);
    CHECK(r.win_probability == 0.5);
  }
  SUBCASE("small odds never reach one") {
    const std::vector<double> p(5, 0.1);
    const auto r = odds_stopping_index(p);
    CHECK(r.first_candidate == 0);
    CHECK(std::abs(r.win_probability - odds_oracle(p, 0)) < 1e-12);
  }
  SUBCASE("certain event clamps the threshold") {
    const std::vector<double> p{0.2, 1.0, 0.3};
    const auto r = odds_stopping_index(p);
    CHECK(r.first_candidate == 1);
    CHECK(std::abs(r.win_probability - 0.7) < 1e-12);
    CHECK(std::abs(r.win_probability - odds_oracle(p, 1)) < 1e-12);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(odds_stopping_index(std::vector<double>{}), ParameterError);
    CHECK_THROWS_AS(odds_stopping_index(std::vector<double>{0.5, 1.5}), ParameterError);
  }
  SUBCASE("win probability and optimality against outcome enumeration") {
    SplitMix64 rng(77);
    for (int t = 0; t < 500; ++t) {
      const std::size_t n = 1 + rng.below(6);
      std::vector<double> p(n);
      for (auto& x : p) x = rng.uniform01() * 0.95;
      const auto r = odds_stopping_index(p);
      CHECK(std::abs(r.win_probability - odds_oracle(p, r.first_candidate)) < 1e-12);
      for (std::size_t s = 0; s < n; ++s) CHECK(odds_oracle(p, s) <= r.win_probability + 1e-12);
    }
  }
  SUBCASE("record probabilities give the 1/e threshold") {
    for (std::size_t n : {50, 100, 360}) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = 1.0 / double(j + 1);
      const double s = double(odds_stopping_index(p).first_candidate + 1);
      CHECK(s >= double(n) / std::numbers::e - 2);
      CHECK(s <= double(n) / std::numbers::e + 2);
    }
  }
}
