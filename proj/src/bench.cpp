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

#include "crowdteam/bench.hpp"

#include "crowdteam/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace crowdteam {

namespace {

const char* to_string(KUnits u) { return u == KUnits::ordered ? "ordered" : "distinct"; }
const char* to_string(StreamSpace s) { return s == StreamSpace::ordered ? "ordered" : "distinct"; }
const char* to_string(Fallback f) { return f == Fallback::best_seen ? "best_seen" : "last"; }

template <typename Enum>
Enum parse_choice(const nlohmann::json& v, const char* key, const char* a, Enum ea, const char* b, Enum eb) {
  const auto s = v.get<std::string>();
  if (s == a) return ea;
  if (s == b) return eb;
  throw ValidationError(std::string(key) + " must be \"" + a + "\" or \"" + b + "\", got \"" + s + "\"");
}

ProjectSpec draw_project(const ExperimentParams& params, Seed seed) {
  ProjectSpec p;
  p.gamma = params.gamma;
  if (params.fixed_skills) {
    p.required_skills = *params.fixed_skills;
    return p;
  }
  std::vector<SkillIndex> skills(static_cast<std::size_t>(params.gen.n_skills));
  for (std::size_t i = 0; i < skills.size(); ++i) skills[i] = static_cast<SkillIndex>(i);
  SplitMix64 rng(hash_keys(seed, {0x70726F6AULL}));
  const auto r = static_cast<std::size_t>(params.n_required);
  for (std::size_t i = 0; i < r; ++i) std::swap(skills[i], skills[i + rng.below(skills.size() - i)]);
  skills.resize(r);
  std::sort(skills.begin(), skills.end());
  p.required_skills = std::move(skills);
  return p;
}

// Everything a trial needs before any solver runs. Not movable: the
// evaluator points at the instance member.
struct TrialContext {
  TrialContext(Instance inst, const ProjectSpec& project, const PerceptionModel& model, TrialSeeds s)
      : instance(std::move(inst)),
        evaluator(instance, project, model),
        space(instance.n_workers, project),
        all_te(evaluate_all(evaluator, space)),
        seeds(s) {}
  TrialContext(const TrialContext&) = delete;
  TrialContext& operator=(const TrialContext&) = delete;

  Instance instance;
  TeamEvaluator evaluator;
  ConfigurationSpace space;
  std::vector<double> all_te;
  TrialSeeds seeds;
};

std::unique_ptr<TrialContext> make_context(const ExperimentParams& params, std::uint64_t trial_index) {
  const TrialSeeds seeds = trial_seeds(params.base_seed, trial_index);
  GenParams gen = params.gen;
  gen.seed = seeds.instance;
  PerceptionModel model = params.model;
  model.seed = seeds.noise;
  return std::make_unique<TrialContext>(generate_instance(gen), draw_project(params, seeds.project), model, seeds);
}

SolverMetrics metrics_of(const SolverReport& report, const TrialContext& ctx) {
  SolverMetrics m;
  m.te_total = report.total_te;
  m.skill_perceived = report.breakdown.skill_term;
  m.skill_true = ctx.evaluator.evaluate_true(report.chosen).skill_term;
  m.uncertainty = report.breakdown.uncertainty_term;
  m.cost = report.breakdown.cost_term;
  m.social = report.breakdown.social_term;
  m.evaluations = report.evaluations;
  m.wall_time_us = std::chrono::duration<double, std::micro>(report.wall_time).count();
  m.rank = rank_of(report.total_te, ctx.all_te);
  return m;
}

SolverMetrics run_secretary(const ExperimentParams& params, const TrialContext& ctx, std::optional<std::uint64_t> k) {
  SecretaryOptions opts;
  opts.stream_seed = ctx.seeds.stream;
  opts.fallback = params.fallback;
  opts.space = params.stream_space;
  if (k) opts.k = resolve_k(params, *k, ctx.instance.n_workers, ctx.evaluator.project().team_size());
  return metrics_of(secretary_solver(ctx.evaluator, opts), ctx);
}

std::uint64_t space_size(int n_workers, int n_required, bool ordered) {
  return configuration_count(n_workers, n_required, ordered ? CountMode::ordered : CountMode::distinct);
}

}  // namespace

std::vector<std::string> validate_experiment(const ExperimentParams& p) {
  std::vector<std::string> errors;
  const int n = p.gen.n_workers;
  const int m = p.gen.n_skills;
  if (n < 1) errors.push_back("n_workers must be at least 1");
  if (m < 1) errors.push_back("n_skills must be at least 1");
  if (!(p.gen.edge_probability >= 0.0 && p.gen.edge_probability <= 1.0))
    errors.push_back("edge_probability must lie in [0, 1]");
  if (p.n_trials < 1) errors.push_back("n_trials must be at least 1");
  if (p.jobs < 1) errors.push_back("jobs must be at least 1");
  for (double g : p.gamma)
    if (!(g >= 0.0)) errors.push_back("gamma weights must be non-negative");
  if (!(p.model.sigma0 >= 0.0)) errors.push_back("sigma0 must be non-negative");
  if (!(p.model.u_max > 0.0 && p.model.u_max <= 1.0)) errors.push_back("u_max must lie in (0, 1]");

  int r = p.n_required;
  if (p.fixed_skills) {
    r = static_cast<int>(p.fixed_skills->size());
    if (m >= 1 && n >= 1) {
      ProjectSpec spec{*p.fixed_skills, p.gamma};
      try {
        validate_project(spec, std::max(n, r), m);
      } catch (const std::exception& e) {
        errors.push_back(e.what());
      }
    }
  } else if (r < 1) {
    errors.push_back("n_required must be at least 1");
  } else if (m >= 1 && r > m) {
    errors.push_back("n_required (" + std::to_string(r) + ") exceeds n_skills (" + std::to_string(m) + ")");
  }
  if (n >= 1 && r > n)
    errors.push_back("infeasible project: |S_p| = " + std::to_string(r) + " exceeds N = " + std::to_string(n));

  if (errors.empty()) {
    try {
      const std::uint64_t distinct = configuration_count(n, r, CountMode::distinct);
      if (distinct > kMaxConfigurations)
        errors.push_back("configuration space of " + std::to_string(distinct) + " exceeds the supported maximum");
      const std::uint64_t unit = space_size(n, r, p.k_units == KUnits::ordered);
      auto check_k = [&](std::uint64_t k) {
        if (k > unit)
          errors.push_back("k = " + std::to_string(k) + " is outside [0, " + std::to_string(unit) + "] (" +
                           to_string(p.k_units) + " units)");
      };
      if (p.k) check_k(*p.k);
      for (auto k : p.k_values) check_k(k);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }
  return errors;
}

ExperimentParams experiment_from_json(const nlohmann::json& doc, ExperimentParams p) {
  try {
    if (!doc.is_object()) throw ValidationError("experiment config must be a JSON object");
    if (doc.contains("n_workers")) p.gen.n_workers = doc["n_workers"].get<int>();
    if (doc.contains("n_skills")) p.gen.n_skills = doc["n_skills"].get<int>();
    if (doc.contains("edge_probability")) p.gen.edge_probability = doc["edge_probability"].get<double>();
    if (doc.contains("project")) {
      const auto& proj = doc["project"];
      if (proj.contains("required_skills")) {
        p.fixed_skills = proj["required_skills"].get<std::vector<int>>();
        p.n_required = static_cast<int>(p.fixed_skills->size());
      }
      if (proj.contains("n_required")) p.n_required = proj["n_required"].get<int>();
      if (proj.contains("gamma")) {
        const auto g = proj["gamma"].get<std::vector<double>>();
        if (g.size() != 4) throw ValidationError("project.gamma must have exactly four weights");
        std::copy(g.begin(), g.end(), p.gamma.begin());
      }
    }
    if (doc.contains("perception")) {
      const auto& per = doc["perception"];
      if (per.contains("sigma0")) p.model.sigma0 = per["sigma0"].get<double>();
      if (per.contains("u_max")) p.model.u_max = per["u_max"].get<double>();
    }
    if (doc.contains("n_trials")) p.n_trials = doc["n_trials"].get<int>();
    if (doc.contains("base_seed")) p.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("k")) {
      if (doc["k"].is_null() || (doc["k"].is_string() && doc["k"].get<std::string>() == "1/e"))
        p.k.reset();
      else
        p.k = doc["k"].get<std::uint64_t>();
    }
    if (doc.contains("k_values")) p.k_values = doc["k_values"].get<std::vector<std::uint64_t>>();
    if (doc.contains("k_units"))
      p.k_units = parse_choice(doc["k_units"], "k_units", "distinct", KUnits::distinct, "ordered", KUnits::ordered);
    if (doc.contains("stream_space"))
      p.stream_space = parse_choice(doc["stream_space"], "stream_space", "distinct", StreamSpace::distinct, "ordered",
                                    StreamSpace::ordered);
    if (doc.contains("fallback"))
      p.fallback = parse_choice(doc["fallback"], "fallback", "last", Fallback::last, "best_seen", Fallback::best_seen);
    if (doc.contains("jobs")) p.jobs = doc["jobs"].get<int>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed experiment config: ") + e.what());
  }
}

nlohmann::json experiment_to_json(const ExperimentParams& p) {
  nlohmann::json project = {{"n_required", p.n_required}, {"gamma", p.gamma}};
  if (p.fixed_skills) project["required_skills"] = *p.fixed_skills;
  nlohmann::json doc = {
      {"n_workers", p.gen.n_workers},
      {"n_skills", p.gen.n_skills},
      {"edge_probability", p.gen.edge_probability},
      {"project", project},
      {"perception", {{"sigma0", p.model.sigma0}, {"u_max", p.model.u_max}}},
      {"n_trials", p.n_trials},
      {"base_seed", p.base_seed},
      {"k_values", p.k_values},
      {"k_units", to_string(p.k_units)},
      {"stream_space", to_string(p.stream_space)},
      {"fallback", to_string(p.fallback)},
      {"jobs", p.jobs},
  };
  if (p.k)
    doc["k"] = *p.k;
  else
    doc["k"] = "1/e";
  return doc;
}

TrialSeeds trial_seeds(Seed base_seed, std::uint64_t trial_index) {
  const Seed trial = hash_keys(base_seed, {trial_index});
  return {hash_keys(trial, {1}), hash_keys(trial, {2}), hash_keys(trial, {3}), hash_keys(trial, {4})};
}

std::uint64_t resolve_k(const ExperimentParams& params, std::uint64_t requested, int n_workers, int n_required) {
  const std::uint64_t unit = space_size(n_workers, n_required, params.k_units == KUnits::ordered);
  const std::uint64_t stream = space_size(n_workers, n_required, params.stream_space == StreamSpace::ordered);
  if (requested > unit)
    throw ParameterError("k = " + std::to_string(requested) + " is outside [0, " + std::to_string(unit) + "]");
  if (unit == stream) return requested;
  return (requested * stream + unit - 1) / unit;
}

TrialMetrics run_trial(const ExperimentParams& params, std::uint64_t trial_index) {
  const auto ctx = make_context(params, trial_index);
  TrialMetrics out;
  out.trial_index = trial_index;
  out.total_distinct = ctx->space.size();
  out.exhaustive = metrics_of(exhaustive_solver(ctx->evaluator), *ctx);
  out.secretary = run_secretary(params, *ctx, params.k);
  return out;
}

void parallel_for(std::uint64_t n, int jobs, const std::function<void(std::uint64_t)>& fn) {
  const auto workers = static_cast<std::uint64_t>(std::max(1, jobs));
  if (workers <= 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::uint64_t t = 0; t < std::min(workers, n); ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t i; (i = next.fetch_add(1)) < n;) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<TrialMetrics> run_trials(const ExperimentParams& params) {
  if (auto errors = validate_experiment(params); !errors.empty()) {
    std::string msg = "invalid experiment parameters:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  std::vector<TrialMetrics> trials(static_cast<std::size_t>(params.n_trials));
  parallel_for(trials.size(), params.jobs, [&](std::uint64_t i) { trials[i] = run_trial(params, i); });
  return trials;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"te_total", "skill_perceived", "skill_true", "uncertainty",
                                                 "cost",     "social",          "evaluations", "wall_time_us",
                                                 "rank",     "p_best",          "p_top2"};
  return names;
}

double metric_value(const SolverMetrics& m, const std::string& metric) {
  if (metric == "te_total") return m.te_total;
  if (metric == "skill_perceived") return m.skill_perceived;
  if (metric == "skill_true") return m.skill_true;
  if (metric == "uncertainty") return m.uncertainty;
  if (metric == "cost") return m.cost;
  if (metric == "social") return m.social;
  if (metric == "evaluations") return static_cast<double>(m.evaluations);
  if (metric == "wall_time_us") return m.wall_time_us;
  if (metric == "rank") return static_cast<double>(m.rank);
  if (metric == "p_best") return m.rank == 1 ? 1.0 : 0.0;
  if (metric == "p_top2") return m.rank <= 2 ? 1.0 : 0.0;
  throw std::out_of_range("unknown metric " + metric);
}

const MetricSummary& AggregateSummary::get(const std::string& solver, const std::string& metric) const {
  for (const auto& r : rows)
    if (r.solver == solver && r.metric == metric) return r;
  throw std::out_of_range("no summary for " + solver + "/" + metric);
}

MetricSummary summarize(std::string solver, std::string metric, std::span<const double> values) {
  MetricSummary s{std::move(solver), std::move(metric), 0.0, 0.0, 0.0, values.size()};
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.ci95 = 1.96 * s.std / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

AggregateSummary summarize(std::span<const TrialMetrics> trials) {
  AggregateSummary out;
  std::vector<double> values(trials.size());
  for (const char* solver : {"exhaustive", "secretary"}) {
    for (const auto& metric : metric_names()) {
      for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& m = std::string_view(solver) == "exhaustive" ? trials[i].exhaustive : trials[i].secretary;
        values[i] = metric_value(m, metric);
      }
      out.rows.push_back(summarize(solver, metric, values));
    }
  }
  return out;
}

AggregateSummary monte_carlo(const ExperimentParams& params) {
  const auto trials = run_trials(params);
  return summarize(trials);
}

std::vector<SweepPoint> k_sweep(const ExperimentParams& params, const std::vector<std::uint64_t>& k_values) {
  ExperimentParams checked = params;
  checked.k_values = k_values;
  if (auto errors = validate_experiment(checked); !errors.empty()) {
    std::string msg = "invalid sweep parameters:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }

  const auto n_trials = static_cast<std::size_t>(params.n_trials);
  // per_k[j][i]: trial i at k_values[j]
  std::vector<std::vector<TrialMetrics>> per_k(k_values.size(), std::vector<TrialMetrics>(n_trials));
  parallel_for(n_trials, params.jobs, [&](std::uint64_t i) {
    const auto ctx = make_context(params, i);
    const SolverMetrics exhaustive = metrics_of(exhaustive_solver(ctx->evaluator), *ctx);
    for (std::size_t j = 0; j < k_values.size(); ++j) {
      TrialMetrics& t = per_k[j][i];
      t.trial_index = i;
      t.total_distinct = ctx->space.size();
      t.exhaustive = exhaustive;
      t.secretary = run_secretary(params, *ctx, k_values[j]);
    }
  });

  std::vector<SweepPoint> out;
  for (std::size_t j = 0; j < k_values.size(); ++j) {
    const int r = params.fixed_skills ? static_cast<int>(params.fixed_skills->size()) : params.n_required;
    out.push_back({k_values[j], resolve_k(params, k_values[j], params.gen.n_workers, r), summarize(per_k[j])});
  }
  return out;
}

RankStatistics rank_statistics(std::uint64_t n, std::uint64_t k, std::uint64_t n_shuffles, Seed seed) {
  if (n < 1) throw ParameterError("rank statistics need at least one candidate");
  if (k > n) throw ParameterError("k = " + std::to_string(k) + " is outside [0, " + std::to_string(n) + "]");
  if (n_shuffles < 1) throw ParameterError("rank statistics need at least one shuffle");

  std::vector<std::uint64_t> scores(n);
  SplitMix64 rng(hash_keys(seed, {0x72616E6BULL}));
  std::uint64_t rank1 = 0, rank2 = 0, full = 0, evaluations = 0;
  for (std::uint64_t s = 0; s < n_shuffles; ++s) {
    for (std::uint64_t i = 0; i < n; ++i) scores[i] = i + 1;
    for (std::uint64_t i = n; i > 1; --i) std::swap(scores[i - 1], scores[rng.below(i)]);
    const StopDecision d =
        secretary_stop(n, k, Fallback::last, [&](std::uint64_t i) { return static_cast<double>(scores[i]); });
    const std::uint64_t rank = n - scores[d.position] + 1;
    rank1 += rank == 1;
    rank2 += rank <= 2;
    full += d.fell_back;
    evaluations += d.evaluations;
  }
  const auto total = static_cast<double>(n_shuffles);
  return {n, k, double(rank1) / total, double(rank2) / total, double(full) / total, double(evaluations) / total,
          n_shuffles};
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void write_bench_csv(std::ostream& out, std::span<const TrialMetrics> trials) {
  out << kBenchHeader << '\n';
  for (const auto& t : trials) {
    for (const char* solver : {"exhaustive", "secretary"}) {
      const auto& m = std::string_view(solver) == "exhaustive" ? t.exhaustive : t.secretary;
      out << t.trial_index << ',' << solver << ',' << format_number(m.te_total) << ','
          << format_number(m.skill_perceived) << ',' << format_number(m.skill_true) << ','
          << format_number(m.uncertainty) << ',' << format_number(m.cost) << ',' << format_number(m.social) << ','
          << m.evaluations << ',' << format_number(m.wall_time_us) << ',' << m.rank << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> sweep) {
  out << kSweepHeader << '\n';
  for (const auto& point : sweep)
    for (const auto& r : point.summary.rows)
      out << point.k << ',' << r.solver << ',' << r.metric << ',' << format_number(r.mean) << ','
          << format_number(r.std) << ',' << format_number(r.ci95) << ',' << r.n << '\n';
}

void write_ranks_csv(std::ostream& out, std::span<const RankStatistics> stats) {
  out << kRanksHeader << '\n';
  for (const auto& s : stats)
    out << s.n << ',' << s.k << ',' << format_number(s.p_rank1) << ',' << format_number(s.p_rank2_or_better) << ','
        << format_number(s.p_full_scan) << ',' << format_number(s.mean_evaluations) << ',' << s.n_shuffles << '\n';
}

}  // namespace crowdteam
