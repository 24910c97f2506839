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

#pragma once

#include "crowdteam/efficiency.hpp"

#include <chrono>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace crowdteam {

enum class CountMode { distinct, ordered };

// Number of team configurations for a project with `n_required` skills.
//   distinct: N * C(N-1, r-1) * r!
//   ordered:  N! * r! / (N-r)!  = distinct * (r-1)!
// Throws InfeasibleProject when r > N, ParameterError when r < 1, CapacityError on overflow.
std::uint64_t configuration_count(int n_workers, int n_required, CountMode mode);

// Largest space that shuffled streams and exhaustive search will materialize.
inline constexpr std::uint64_t kMaxConfigurations = 10'000'000;

// Indexed view of every distinct configuration. Order: leader ascending, then
// teammate combination in lexicographic order, then the permutation of the
// sorted team over required-skill positions in lexicographic order.
class ConfigurationSpace {
 public:
  ConfigurationSpace(int n_workers, const ProjectSpec& project);

  std::uint64_t size() const { return size_; }
  int n_workers() const { return n_workers_; }
  const ProjectSpec& project() const { return project_; }

  TeamConfig at(std::uint64_t index) const;

  template <typename F>
    requires std::invocable<F&, std::uint64_t, const TeamConfig&>
  void for_each(F&& f) const {
    for (std::uint64_t i = 0; i < size_; ++i) f(i, at(i));
  }

 private:
  int n_workers_;
  ProjectSpec project_;
  std::vector<std::vector<int>> combinations_;  // teammates drawn from the N-1 non-leaders, as ranks
  std::vector<std::vector<int>> permutations_;  // of 0..r-1
  std::uint64_t size_;
};

std::vector<TeamConfig> enumerate_configurations(const Instance& instance, const ProjectSpec& project);

// Which space a shuffled stream covers: every distinct configuration once, or
// the ordered space, where each distinct configuration appears (r-1)! times.
enum class StreamSpace { distinct, ordered };

// Uniform random permutation of 0..n-1 (Fisher-Yates); deterministic per seed.
std::vector<std::uint64_t> shuffled_order(std::uint64_t n, Seed seed);

// Configurations in uniformly random order, materialized as an index permutation.
class ShuffledStream {
 public:
  ShuffledStream(const ConfigurationSpace& space, Seed seed, StreamSpace mode = StreamSpace::distinct);

  std::uint64_t size() const { return order_.size(); }
  std::uint64_t config_index(std::uint64_t position) const { return order_[position] / copies_; }
  TeamConfig at(std::uint64_t position) const { return space_->at(config_index(position)); }

 private:
  const ConfigurationSpace* space_;
  std::uint64_t copies_;
  std::vector<std::uint64_t> order_;
};

std::vector<TeamConfig> shuffled_configuration_stream(const Instance& instance, const ProjectSpec& project, Seed seed);

struct SolverReport {
  TeamConfig chosen;
  double total_te = 0.0;
  EfficiencyBreakdown breakdown;
  std::uint64_t evaluations = 0;
  std::chrono::nanoseconds wall_time{0};
  std::optional<std::uint64_t> rank;  // 1-based among all distinct configurations
  bool fell_back = false;
};

// Scores every distinct configuration; first maximum in enumeration order wins.
SolverReport exhaustive_solver(const TeamEvaluator& evaluator);
SolverReport exhaustive_solver(const Instance& instance, const ProjectSpec& project, const PerceptionModel& model);

// Total score of every configuration, indexed like ConfigurationSpace.
std::vector<double> evaluate_all(const TeamEvaluator& evaluator, const ConfigurationSpace& space);

// 1 + number of configurations with strictly greater TE.
std::uint64_t rank_of(double te, std::span<const double> all_te);

// k = ceil(total / e), at least 1.
std::uint64_t exploration_threshold(std::uint64_t total);
// Explicit k, checked against [0, total].
std::uint64_t exploration_threshold(std::uint64_t total, std::uint64_t explicit_k);

enum class Fallback { last, best_seen };

struct StopDecision {
  std::uint64_t position = 0;     // index into the stream of the selected item
  std::uint64_t evaluations = 0;  // items scored, including the selected one
  bool fell_back = false;         // nothing beat the exploration maximum
};

// Secretary rule over a stream of n >= 1 items scored lazily by `score(i)`.
// The first k items are observed only; afterwards the first item strictly
// better than all of them is taken. When none is, `fallback` decides.
template <typename Score>
  requires std::invocable<Score&, std::uint64_t>
StopDecision secretary_stop(std::uint64_t n, std::uint64_t k, Fallback fallback, Score&& score) {
  if (n == 0) throw ParameterError("secretary stream is empty");
  if (k > n) throw ParameterError("exploration length k=" + std::to_string(k) + " exceeds stream length " + std::to_string(n));
  double threshold = kNegInf;
  std::uint64_t best = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    const double s = score(i);
    if (s > threshold) {
      threshold = s;
      best = i;
    }
  }
  for (std::uint64_t i = k; i < n; ++i)
    if (score(i) > threshold) return {i, i + 1, false};
  return {fallback == Fallback::last ? n - 1 : best, n, true};
}

struct SecretaryOptions {
  Seed stream_seed = 0;
  std::optional<std::uint64_t> k;  // defaults to exploration_threshold(stream size)
  Fallback fallback = Fallback::last;
  StreamSpace space = StreamSpace::distinct;
};

SolverReport secretary_solver(const TeamEvaluator& evaluator, const SecretaryOptions& options);
SolverReport secretary_solver(const Instance& instance, const ProjectSpec& project, const PerceptionModel& model,
                              const SecretaryOptions& options);

struct OddsResult {
  std::size_t first_candidate = 0;  // 0-based; stop at the first success at or after it
  double win_probability = 0.0;
};

// Odds algorithm: sum the odds p/(1-p) from the back until the sum reaches 1.
// A certain event (p = 1) has infinite odds, so the threshold never precedes
// the last such index.
OddsResult odds_stopping_index(std::span<const double> success_probabilities);

}  // namespace crowdteam
