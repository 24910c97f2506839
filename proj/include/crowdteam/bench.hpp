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
#include "crowdteam/model.hpp"
#include "crowdteam/solvers.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <optional>
#include <string>
#include <vector>

namespace crowdteam {

// Unit in which explicit k values are expressed. `ordered` values are counted in
// the ordered space N! r! / (N-r)! and rescaled onto the streamed space.
enum class KUnits { distinct, ordered };

struct ExperimentParams {
  GenParams gen;  // gen.seed is ignored; instances derive from base_seed
  int n_required = 3;
  std::optional<std::vector<SkillIndex>> fixed_skills;  // otherwise sampled per trial
  std::array<double, 4> gamma{0.25, 0.25, 0.25, 0.25};
  PerceptionModel model;  // model.seed is ignored; noise derives from base_seed
  int n_trials = 1000;
  Seed base_seed = 0;
  std::optional<std::uint64_t> k;  // secretary k for `bench`; 1/e rule when absent
  std::vector<std::uint64_t> k_values;  // for `sweep`
  KUnits k_units = KUnits::distinct;
  StreamSpace stream_space = StreamSpace::distinct;
  Fallback fallback = Fallback::last;
  int jobs = 1;
};

// Every problem with the parameters; empty when runnable.
std::vector<std::string> validate_experiment(const ExperimentParams& params);

// Reads an experiment-config document over `base` (missing keys keep their value).
ExperimentParams experiment_from_json(const nlohmann::json& doc, ExperimentParams base = {});
nlohmann::json experiment_to_json(const ExperimentParams& params);

struct TrialSeeds {
  Seed instance, project, noise, stream;
};

// trial = hash(base_seed, trial_index); each stream is hash(trial, tag).
TrialSeeds trial_seeds(Seed base_seed, std::uint64_t trial_index);

struct SolverMetrics {
  double te_total = 0.0;
  double skill_perceived = 0.0;
  double skill_true = 0.0;
  double uncertainty = 0.0;
  double cost = 0.0;
  double social = 0.0;
  std::uint64_t evaluations = 0;
  double wall_time_us = 0.0;
  std::uint64_t rank = 1;
};

struct TrialMetrics {
  std::uint64_t trial_index = 0;
  std::uint64_t total_distinct = 0;
  SolverMetrics exhaustive;
  SolverMetrics secretary;
};

TrialMetrics run_trial(const ExperimentParams& params, std::uint64_t trial_index);
std::vector<TrialMetrics> run_trials(const ExperimentParams& params);

struct MetricSummary {
  std::string solver;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;   // sample standard deviation
  double ci95 = 0.0;  // 1.96 * std / sqrt(n)
  std::uint64_t n = 0;
};

struct AggregateSummary {
  std::vector<MetricSummary> rows;

  // Throws std::out_of_range when absent.
  const MetricSummary& get(const std::string& solver, const std::string& metric) const;
};

// Metric names in output order.
const std::vector<std::string>& metric_names();
double metric_value(const SolverMetrics& m, const std::string& metric);

MetricSummary summarize(std::string solver, std::string metric, std::span<const double> values);
AggregateSummary summarize(std::span<const TrialMetrics> trials);

AggregateSummary monte_carlo(const ExperimentParams& params);

// k in the streamed space for a requested k in `params.k_units`.
std::uint64_t resolve_k(const ExperimentParams& params, std::uint64_t requested, int n_workers, int n_required);

struct SweepPoint {
  std::uint64_t k = 0;  // as requested
  std::uint64_t k_stream = 0;
  AggregateSummary summary;
};

// Same instances, projects, noise and stream order for every k; only the
// exploration length changes.
std::vector<SweepPoint> k_sweep(const ExperimentParams& params, const std::vector<std::uint64_t>& k_values);

struct RankStatistics {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  double p_rank1 = 0.0;
  double p_rank2_or_better = 0.0;
  double p_full_scan = 0.0;  // no candidate beat the exploration maximum
  double mean_evaluations = 0.0;
  std::uint64_t n_shuffles = 0;
};

// Secretary rule (fallback = last) on uniform permutations of the distinct scores 1..n.
RankStatistics rank_statistics(std::uint64_t n_candidates, std::uint64_t k, std::uint64_t n_shuffles, Seed seed);

// Runs fn(0..n-1) on up to `jobs` threads. fn must write only to its own slot.
void parallel_for(std::uint64_t n, int jobs, const std::function<void(std::uint64_t)>& fn);

// CSV writers. Headers are part of the file contract.
inline constexpr const char* kBenchHeader =
    "trial,solver,te_total,skill_perceived,skill_true,uncertainty,cost,social,evaluations,wall_time_us,rank";
inline constexpr const char* kSweepHeader = "k,solver,metric,mean,std,ci95,n";
inline constexpr const char* kRanksHeader = "n,k,p_rank1,p_rank2_or_better,p_full_scan,mean_evaluations,n_shuffles";

std::string format_number(double x);
void write_bench_csv(std::ostream& out, std::span<const TrialMetrics> trials);
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> sweep);
void write_ranks_csv(std::ostream& out, std::span<const RankStatistics> stats);

}  // namespace crowdteam
