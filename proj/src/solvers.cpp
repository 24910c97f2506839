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

#include "crowdteam/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace crowdteam {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  const __uint128_t p = static_cast<__uint128_t>(a) * b;
  if (p > std::numeric_limits<std::uint64_t>::max()) throw CapacityError("configuration count overflows 64 bits");
  return static_cast<std::uint64_t>(p);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = checked_mul(r, n - k + i) / i;
  return r;
}

std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) r = checked_mul(r, i);
  return r;
}

void check_sizes(int n_workers, int n_required) {
  if (n_required < 1) throw ParameterError("a project needs at least one required skill");
  if (n_workers < 1) throw ParameterError("at least one worker is needed");
  if (n_required > n_workers)
    throw InfeasibleProject("project requires " + std::to_string(n_required) + " skills but only " +
                            std::to_string(n_workers) + " workers exist (|S_p| > N)");
}

}  // namespace

std::uint64_t configuration_count(int n_workers, int n_required, CountMode mode) {
  check_sizes(n_workers, n_required);
  const auto n = static_cast<std::uint64_t>(n_workers);
  const auto r = static_cast<std::uint64_t>(n_required);
  if (mode == CountMode::distinct) return checked_mul(checked_mul(n, binomial(n - 1, r - 1)), factorial(r));
  std::uint64_t falling = 1;
  for (std::uint64_t i = 0; i < r; ++i) falling = checked_mul(falling, n - i);
  return checked_mul(falling, factorial(r));
}

ConfigurationSpace::ConfigurationSpace(int n_workers, const ProjectSpec& project)
    : n_workers_(n_workers), project_(project) {
  const int r = project.team_size();
  check_sizes(n_workers, r);
  size_ = configuration_count(n_workers, r, CountMode::distinct);
  if (size_ > kMaxConfigurations)
    throw CapacityError("configuration space of " + std::to_string(size_) + " exceeds the supported maximum of " +
                        std::to_string(kMaxConfigurations));

  // Lexicographic (r-1)-subsets of 0..N-2.
  std::vector<int> combo(static_cast<std::size_t>(r - 1));
  std::iota(combo.begin(), combo.end(), 0);
  const int pool = n_workers - 1;
  while (true) {
    combinations_.push_back(combo);
    int i = r - 2;
    while (i >= 0 && combo[std::size_t(i)] == pool - (r - 1) + i) --i;
    if (i < 0) break;
    ++combo[std::size_t(i)];
    for (int j = i + 1; j < r - 1; ++j) combo[std::size_t(j)] = combo[std::size_t(j - 1)] + 1;
  }

  std::vector<int> perm(static_cast<std::size_t>(r));
  std::iota(perm.begin(), perm.end(), 0);
  do permutations_.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
}

TeamConfig ConfigurationSpace::at(std::uint64_t index) const {
  const std::uint64_t n_perm = permutations_.size();
  const std::uint64_t n_comb = combinations_.size();
  const auto& perm = permutations_[index % n_perm];
  index /= n_perm;
  const auto& combo = combinations_[index % n_comb];
  const auto leader = static_cast<WorkerIndex>(index / n_comb);

  const int r = project_.team_size();
  std::vector<WorkerIndex> team;
  team.reserve(std::size_t(r));
  bool placed = false;
  for (int rank : combo) {
    const int w = rank < leader ? rank : rank + 1;
    if (!placed && leader < w) {
      team.push_back(leader);
      placed = true;
    }
    team.push_back(w);
  }
  if (!placed) team.push_back(leader);

  TeamConfig config;
  config.leader = leader;
  config.assignment.reserve(std::size_t(r));
  for (int pos = 0; pos < r; ++pos)
    config.assignment.push_back({project_.required_skills[std::size_t(pos)], team[std::size_t(perm[std::size_t(pos)])]});
  return config;
}

std::vector<TeamConfig> enumerate_configurations(const Instance& instance, const ProjectSpec& project) {
  validate_project(project, instance.n_workers, instance.n_skills);
  ConfigurationSpace space(instance.n_workers, project);
  std::vector<TeamConfig> out;
  out.reserve(space.size());
  space.for_each([&](std::uint64_t, const TeamConfig& c) { out.push_back(c); });
  return out;
}

std::vector<std::uint64_t> shuffled_order(std::uint64_t n, Seed seed) {
  if (n > kMaxConfigurations * 24)
    throw CapacityError("stream of " + std::to_string(n) + " items is too large to shuffle in memory");
  std::vector<std::uint64_t> order(n);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  SplitMix64 rng(hash_keys(seed, {0x73687566ULL}));
  for (std::uint64_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

ShuffledStream::ShuffledStream(const ConfigurationSpace& space, Seed seed, StreamSpace mode) : space_(&space) {
  const int r = space.project().team_size();
  copies_ = mode == StreamSpace::distinct ? 1 : configuration_count(space.n_workers(), r, CountMode::ordered) / space.size();
  order_ = shuffled_order(space.size() * copies_, seed);
}

std::vector<TeamConfig> shuffled_configuration_stream(const Instance& instance, const ProjectSpec& project, Seed seed) {
  validate_project(project, instance.n_workers, instance.n_skills);
  ConfigurationSpace space(instance.n_workers, project);
  ShuffledStream stream(space, seed);
  std::vector<TeamConfig> out;
  out.reserve(stream.size());
  for (std::uint64_t i = 0; i < stream.size(); ++i) out.push_back(stream.at(i));
  return out;
}

SolverReport exhaustive_solver(const TeamEvaluator& evaluator) {
  const auto start = std::chrono::steady_clock::now();
  ConfigurationSpace space(evaluator.instance().n_workers, evaluator.project());
  SolverReport report;
  double best = kNegInf;
  space.for_each([&](std::uint64_t, const TeamConfig& config) {
    const EfficiencyBreakdown b = evaluator.evaluate(config);
    if (b.total > best) {
      best = b.total;
      report.chosen = config;
      report.breakdown = b;
    }
  });
  report.total_te = report.breakdown.total;
  report.evaluations = space.size();
  report.rank = 1;
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

SolverReport exhaustive_solver(const Instance& instance, const ProjectSpec& project, const PerceptionModel& model) {
  return exhaustive_solver(TeamEvaluator(instance, project, model));
}

std::vector<double> evaluate_all(const TeamEvaluator& evaluator, const ConfigurationSpace& space) {
  std::vector<double> out(space.size());
  space.for_each([&](std::uint64_t i, const TeamConfig& c) { out[i] = evaluator.evaluate(c).total; });
  return out;
}

std::uint64_t rank_of(double te, std::span<const double> all_te) {
  return 1 + static_cast<std::uint64_t>(std::count_if(all_te.begin(), all_te.end(), [te](double x) { return x > te; }));
}

std::uint64_t exploration_threshold(std::uint64_t total) {
  if (total < 1) throw ParameterError("exploration threshold needs a non-empty stream");
  const auto k = static_cast<std::uint64_t>(std::ceil(static_cast<double>(total) / std::numbers::e));
  return std::clamp<std::uint64_t>(k, 1, total);
}

std::uint64_t exploration_threshold(std::uint64_t total, std::uint64_t explicit_k) {
  if (explicit_k > total)
    throw ParameterError("exploration length k=" + std::to_string(explicit_k) + " is outside [0, " +
                         std::to_string(total) + "]");
  return explicit_k;
}

SolverReport secretary_solver(const TeamEvaluator& evaluator, const SecretaryOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ConfigurationSpace space(evaluator.instance().n_workers, evaluator.project());
  ShuffledStream stream(space, options.stream_seed, options.space);
  const std::uint64_t k =
      options.k ? exploration_threshold(stream.size(), *options.k) : exploration_threshold(stream.size());

  const StopDecision d = secretary_stop(stream.size(), k, options.fallback,
                                        [&](std::uint64_t i) { return evaluator.evaluate(stream.at(i)).total; });
  SolverReport report;
  report.chosen = stream.at(d.position);
  report.breakdown = evaluator.evaluate(report.chosen);
  report.total_te = report.breakdown.total;
  report.evaluations = d.evaluations;
  report.fell_back = d.fell_back;
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

SolverReport secretary_solver(const Instance& instance, const ProjectSpec& project, const PerceptionModel& model,
                              const SecretaryOptions& options) {
  return secretary_solver(TeamEvaluator(instance, project, model), options);
}

OddsResult odds_stopping_index(std::span<const double> p) {
  if (p.empty()) throw ParameterError("odds algorithm needs at least one event");
  for (double x : p)
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("success probabilities must lie in [0, 1]");

  std::size_t s = 0;
  double odds_sum = 0.0;
  for (std::size_t j = p.size(); j-- > 0;) {
    if (p[j] == 1.0) {
      s = j;
      break;
    }
    odds_sum += p[j] / (1.0 - p[j]);
    if (odds_sum >= 1.0) {
      s = j;
      break;
    }
  }

  double no_success = 1.0;
  for (std::size_t j = s + 1; j < p.size(); ++j) no_success *= 1.0 - p[j];
  if (p[s] == 1.0) return {s, no_success};

  double odds = 0.0;
  for (std::size_t j = s; j < p.size(); ++j) odds += p[j] / (1.0 - p[j]);
  return {s, no_success * (1.0 - p[s]) * odds};
}

}  // namespace crowdteam
