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

// crowdteam: team formation engine and benchmark harness.
//
//   crowdteam gen    --workers 14 --skills 5 --p 0.3 --seed 7 -o inst.json
//   crowdteam solve  --instance inst.json --skills-required 0,2,4 --solver secretary
//   crowdteam bench  --config exp.json -o bench.csv
//   crowdteam sweep  --config exp.json --k-values 10,60,133 -o sweep.csv
//   crowdteam ranks  --n 360 --k 133 --shuffles 100000 -o ranks.csv
//   crowdteam plot   -i bench.csv -o bench.svg

#include "crowdteam/bench.hpp"
#include "crowdteam/efficiency.hpp"
#include "crowdteam/model.hpp"
#include "crowdteam/plot.hpp"
#include "crowdteam/solvers.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace crowdteam;

namespace {

Seed default_seed() {
  if (const char* env = std::getenv("CROWDTEAM_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ParameterError(std::string("CROWDTEAM_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

std::ofstream open_output(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path() && !fs::exists(p.parent_path()))
    throw std::runtime_error("output directory does not exist: " + p.parent_path().string());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Shared experiment flags; each is applied only when given on the command line.
struct ExperimentFlags {
  std::string config;
  int workers = 0, skills = 0, required = 0, trials = 0, jobs = 0;
  double p = 0, sigma0 = 0, u_max = 0;
  Seed seed = 0;
  std::uint64_t k = 0;
  std::string fallback, k_units, stream_space;
  std::vector<double> gamma;
  CLI::App* app = nullptr;

  void add(CLI::App* sub) {
    app = sub;
    sub->add_option("--config", config, "Experiment-config JSON")->check(CLI::ExistingFile);
    sub->add_option("--workers", workers, "Workers per instance (N)");
    sub->add_option("--skills", skills, "Skill catalogue size (M)");
    sub->add_option("--required", required, "Required skills per project (|S_p|)");
    sub->add_option("--p", p, "Edge probability");
    sub->add_option("--sigma0", sigma0, "Base noise standard deviation");
    sub->add_option("--u-max", u_max, "Uncertainty cap");
    sub->add_option("--gamma", gamma, "Four objective weights")->expected(4)->delimiter(',');
    sub->add_option("--trials", trials, "Monte Carlo trials");
    sub->add_option("--seed", seed, "Base seed");
    sub->add_option("--k", k, "Explicit exploration length (default: ceil(total/e))");
    sub->add_option("--k-units", k_units, "Unit of k values")->check(CLI::IsMember({"distinct", "ordered"}));
    sub->add_option("--stream-space", stream_space, "Streamed space")->check(CLI::IsMember({"distinct", "ordered"}));
    sub->add_option("--fallback", fallback, "Secretary fallback")->check(CLI::IsMember({"last", "best_seen"}));
    sub->add_option("--jobs", jobs, "Worker threads");
  }

  bool given(const char* name) const { return app->count(name) > 0; }

  ExperimentParams resolve() const {
    ExperimentParams params;
    params.base_seed = default_seed();
    if (!config.empty()) params = experiment_from_json(read_json(config), params);
    if (given("--workers")) params.gen.n_workers = workers;
    if (given("--skills")) params.gen.n_skills = skills;
    if (given("--required")) {
      params.n_required = required;
      params.fixed_skills.reset();
    }
    if (given("--p")) params.gen.edge_probability = p;
    if (given("--sigma0")) params.model.sigma0 = sigma0;
    if (given("--u-max")) params.model.u_max = u_max;
    if (given("--gamma")) std::copy(gamma.begin(), gamma.end(), params.gamma.begin());
    if (given("--trials")) params.n_trials = trials;
    if (given("--seed")) params.base_seed = seed;
    if (given("--k")) params.k = k;
    if (given("--k-units")) params.k_units = k_units == "ordered" ? KUnits::ordered : KUnits::distinct;
    if (given("--stream-space"))
      params.stream_space = stream_space == "ordered" ? StreamSpace::ordered : StreamSpace::distinct;
    if (given("--fallback")) params.fallback = fallback == "best_seen" ? Fallback::best_seen : Fallback::last;
    if (given("--jobs")) params.jobs = jobs;
    return params;
  }
};

void require_valid(const ExperimentParams& params) {
  const auto errors = validate_experiment(params);
  if (errors.empty()) return;
  std::string msg = "invalid experiment configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ValidationError(msg);
}

nlohmann::json report_json(const std::string& solver, const SolverReport& r) {
  nlohmann::json assignment = nlohmann::json::array();
  for (const auto& a : r.chosen.assignment) assignment.push_back({{"skill", a.skill}, {"worker", a.worker}});
  nlohmann::json doc = {
      {"solver", solver},
      {"leader", r.chosen.leader},
      {"team", r.chosen.team()},
      {"assignment", assignment},
      {"breakdown",
       {{"skill_term", r.breakdown.skill_term},
        {"uncertainty_term", r.breakdown.uncertainty_term},
        {"cost_term", r.breakdown.cost_term},
        {"social_term", r.breakdown.social_term},
        {"total", r.breakdown.total}}},
      {"total_te", r.total_te},
      {"evaluations", r.evaluations},
      {"wall_time_us", std::chrono::duration<double, std::micro>(r.wall_time).count()},
      {"fell_back", r.fell_back},
  };
  if (r.rank) doc["rank"] = *r.rank;
  return doc;
}

void print_summary(const AggregateSummary& summary, std::ostream& out) {
  out << "metric            exhaustive (mean +- ci95)      secretary (mean +- ci95)\n";
  for (const auto& metric : metric_names()) {
    const auto& e = summary.get("exhaustive", metric);
    const auto& s = summary.get("secretary", metric);
    char line[160];
    std::snprintf(line, sizeof line, "%-16s  %12.6g +- %-12.4g  %12.6g +- %-12.4g\n", metric.c_str(), e.mean, e.ci95,
                  s.mean, s.ci95);
    out << line;
  }
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stoull(item, &used));
    if (used != item.size()) throw ParameterError("not an unsigned integer: " + item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team formation over a social graph: exhaustive and secretary-stopping solvers, Monte Carlo bench"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Print resolved configuration");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  GenParams gp;
  std::string gen_out;
  gen->add_option("--workers", gp.n_workers, "Workers (N)")->check(CLI::PositiveNumber);
  gen->add_option("--skills", gp.n_skills, "Skills (M)")->check(CLI::PositiveNumber);
  gen->add_option("--p", gp.edge_probability, "Erdos-Renyi edge probability");
  gen->add_option("--seed", gp.seed, "Seed");
  gen->add_option("-o,--output", gen_out, "Instance JSON path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  std::string instance_path, project_path, solver_name = "exhaustive", fallback_name = "last", report_path;
  std::vector<int> required_skills;
  std::vector<double> gamma;
  std::uint64_t k = 0;
  Seed noise_seed = 0, stream_seed = 0;
  PerceptionModel model;
  bool with_rank = false;
  solve->add_option("--instance", instance_path, "Instance JSON")->required();
  solve->add_option("--project", project_path, "Project JSON {required_skills, gamma}");
  solve->add_option("--skills-required", required_skills, "Required skill indices")->delimiter(',');
  solve->add_option("--gamma", gamma, "Four objective weights")->expected(4)->delimiter(',');
  solve->add_option("--solver", solver_name, "exhaustive | secretary")
      ->check(CLI::IsMember({"exhaustive", "secretary"}));
  solve->add_option("--k", k, "Exploration length (default: ceil(total/e))");
  solve->add_option("--fallback", fallback_name, "last | best_seen")->check(CLI::IsMember({"last", "best_seen"}));
  solve->add_option("--noise-seed", noise_seed, "Perception noise seed");
  solve->add_option("--stream-seed", stream_seed, "Shuffle seed");
  solve->add_option("--sigma0", model.sigma0, "Base noise standard deviation");
  solve->add_option("--u-max", model.u_max, "Uncertainty cap");
  solve->add_option("--report", report_path, "Write the SolverReport as JSON");
  solve->add_flag("--rank", with_rank, "Rank the chosen config against the full space");

  // bench / sweep
  auto* bench = app.add_subcommand("bench", "Monte Carlo comparison of both solvers");
  ExperimentFlags bench_flags;
  bench_flags.add(bench);
  std::string bench_out;
  bench->add_option("-o,--output", bench_out, "CSV path")->required();

  auto* sweep = app.add_subcommand("sweep", "Secretary exploration-length sweep");
  ExperimentFlags sweep_flags;
  sweep_flags.add(sweep);
  std::string sweep_out, k_values_arg;
  sweep->add_option("--k-values", k_values_arg, "Comma-separated k list (overrides config k_values)");
  sweep->add_option("-o,--output", sweep_out, "CSV path")->required();

  // ranks
  auto* ranks = app.add_subcommand("ranks", "Secretary rank statistics on abstract scores");
  std::vector<std::uint64_t> rank_n{360}, rank_k;
  std::uint64_t shuffles = 100000;
  Seed rank_seed = 0;
  std::string ranks_out;
  ranks->add_option("--n", rank_n, "Candidate counts")->delimiter(',');
  ranks->add_option("--k", rank_k, "Exploration lengths (default: ceil(n/e))")->delimiter(',');
  ranks->add_option("--shuffles", shuffles, "Shuffles per (n, k)");
  ranks->add_option("--seed", rank_seed, "Seed");
  ranks->add_option("-o,--output", ranks_out, "CSV path")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "Render a bench/sweep/ranks CSV as SVG");
  std::string plot_in, plot_out, plot_metric = "p_best";
  plot->add_option("-i,--input", plot_in, "CSV path")->required();
  plot->add_option("-o,--output", plot_out, "SVG path")->required();
  plot->add_option("--metric", plot_metric, "Sweep metric to draw");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen->count("--seed") == 0) gp.seed = default_seed();
      if (!(gp.edge_probability >= 0.0 && gp.edge_probability <= 1.0))
        throw ParameterError("--p must lie in [0, 1], got " + std::to_string(gp.edge_probability));
      const Instance inst = generate_instance(gp);
      write_text(gen_out, instance_to_json(inst).dump(2) + "\n");
      if (verbosity) std::cerr << "wrote " << gen_out << " (seed " << gp.seed << ")\n";
    } else if (*solve) {
      if (!fs::exists(instance_path)) throw std::runtime_error("instance file not found: " + instance_path);
      const Instance inst = load_instance(instance_path);
      ProjectSpec project;
      if (!project_path.empty()) project = project_from_json(read_json(project_path));
      if (!required_skills.empty()) project.required_skills = required_skills;
      if (!gamma.empty()) std::copy(gamma.begin(), gamma.end(), project.gamma.begin());
      if (project.required_skills.empty())
        throw ValidationError("no required skills given (use --project or --skills-required)");
      validate_project(project, inst.n_workers, inst.n_skills);
      if (solve->count("--noise-seed") == 0) noise_seed = default_seed();
      if (solve->count("--stream-seed") == 0) stream_seed = default_seed();
      model.seed = noise_seed;

      const TeamEvaluator evaluator(inst, project, model);
      SolverReport report;
      if (solver_name == "exhaustive") {
        report = exhaustive_solver(evaluator);
      } else {
        SecretaryOptions opts;
        opts.stream_seed = stream_seed;
        if (solve->count("--k")) opts.k = k;
        opts.fallback = fallback_name == "best_seen" ? Fallback::best_seen : Fallback::last;
        report = secretary_solver(evaluator, opts);
      }
      if (with_rank && solver_name != "exhaustive") {
        const ConfigurationSpace space(inst.n_workers, project);
        report.rank = rank_of(report.total_te, evaluate_all(evaluator, space));
      }

      std::cout << "solver       " << solver_name << '\n' << "leader       " << report.chosen.leader << '\n';
      std::cout << "assignment  ";
      for (const auto& a : report.chosen.assignment) std::cout << " skill " << a.skill << " -> worker " << a.worker << ';';
      std::cout << '\n'
                << "skill term   " << format_number(report.breakdown.skill_term) << '\n'
                << "uncertainty  " << format_number(report.breakdown.uncertainty_term) << '\n'
                << "cost term    " << format_number(report.breakdown.cost_term) << '\n'
                << "social term  " << format_number(report.breakdown.social_term) << '\n'
                << "TE           " << format_number(report.total_te) << '\n'
                << "evaluations  " << report.evaluations << '\n'
                << "time (us)    " << format_number(std::chrono::duration<double, std::micro>(report.wall_time).count())
                << '\n';
      if (report.rank) std::cout << "rank         " << *report.rank << '\n';
      const auto doc = report_json(solver_name, report);
      if (!report_path.empty())
        write_text(report_path, doc.dump(2) + "\n");
      else
        std::cout << doc.dump() << '\n';
    } else if (*bench) {
      const ExperimentParams params = bench_flags.resolve();
      require_valid(params);
      if (verbosity) std::cerr << experiment_to_json(params).dump(2) << '\n';
      const auto trials = run_trials(params);
      auto out = open_output(bench_out);
      write_bench_csv(out, trials);
      out.close();
      if (!out) throw std::runtime_error("failed writing " + bench_out);
      print_summary(summarize(trials), std::cout);
    } else if (*sweep) {
      ExperimentParams params = sweep_flags.resolve();
      if (!k_values_arg.empty()) params.k_values = parse_list(k_values_arg);
      if (params.k_values.empty()) throw ValidationError("no k values given (use --k-values or config k_values)");
      require_valid(params);
      if (verbosity) std::cerr << experiment_to_json(params).dump(2) << '\n';
      const auto points = k_sweep(params, params.k_values);
      auto out = open_output(sweep_out);
      write_sweep_csv(out, points);
      out.close();
      if (!out) throw std::runtime_error("failed writing " + sweep_out);
      for (const auto& pt : points)
        std::cout << "k=" << pt.k << " (stream k=" << pt.k_stream
                  << ")  P(best)=" << format_number(pt.summary.get("secretary", "p_best").mean)
                  << "  mean TE=" << format_number(pt.summary.get("secretary", "te_total").mean) << '\n';
    } else if (*ranks) {
      if (ranks->count("--seed") == 0) rank_seed = default_seed();
      std::vector<RankStatistics> stats;
      for (auto n : rank_n) {
        if (n < 1) throw ParameterError("--n must be at least 1");
        const std::vector<std::uint64_t> ks = rank_k.empty() ? std::vector{exploration_threshold(n)} : rank_k;
        for (auto kk : ks) {
          if (kk > n) throw ParameterError("k = " + std::to_string(kk) + " exceeds n = " + std::to_string(n));
        }
        for (auto kk : ks) stats.push_back(rank_statistics(n, kk, shuffles, rank_seed));
      }
      auto out = open_output(ranks_out);
      write_ranks_csv(out, stats);
      out.close();
      if (!out) throw std::runtime_error("failed writing " + ranks_out);
      for (const auto& s : stats)
        std::cout << "n=" << s.n << " k=" << s.k << "  P(rank=1)=" << format_number(s.p_rank1)
                  << "  P(rank<=2)=" << format_number(s.p_rank2_or_better)
                  << "  P(full scan)=" << format_number(s.p_full_scan) << '\n';
    } else if (*plot) {
      std::ifstream in(plot_in);
      if (!in) throw std::runtime_error("cannot open " + plot_in);
      const std::string svg = render_svg(read_csv(in), plot_metric);
      write_text(plot_out, svg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
