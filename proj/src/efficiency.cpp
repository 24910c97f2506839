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

#include "crowdteam/efficiency.hpp"

#include "crowdteam/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crowdteam {

int ProjectSpec::position_of(SkillIndex skill) const {
  for (std::size_t i = 0; i < required_skills.size(); ++i)
    if (required_skills[i] == skill) return static_cast<int>(i);
  return -1;
}

void validate_project(const ProjectSpec& project, int n_workers, int n_skills) {
  if (project.required_skills.empty()) throw ValidationError("project requires no skills");
  for (std::size_t i = 0; i < project.required_skills.size(); ++i) {
    const int s = project.required_skills[i];
    if (s < 0 || s >= n_skills)
      throw ValidationError("required skill " + std::to_string(s) + " is outside [0, " + std::to_string(n_skills) + ")");
    for (std::size_t j = 0; j < i; ++j)
      if (project.required_skills[j] == s)
        throw ValidationError("required skill " + std::to_string(s) + " is listed twice");
  }
  for (double g : project.gamma)
    if (!(g >= 0.0)) throw ValidationError("objective weights must be non-negative");
  if (project.team_size() > n_workers)
    throw InfeasibleProject("project requires " + std::to_string(project.team_size()) + " skills but only " +
                            std::to_string(n_workers) + " workers exist (|S_p| > N)");
}

nlohmann::json project_to_json(const ProjectSpec& project) {
  return {{"required_skills", project.required_skills},
          {"gamma", {project.gamma[0], project.gamma[1], project.gamma[2], project.gamma[3]}}};
}

ProjectSpec project_from_json(const nlohmann::json& doc) {
  try {
    ProjectSpec p;
    p.required_skills = doc.at("required_skills").get<std::vector<int>>();
    if (doc.contains("gamma")) {
      const auto g = doc.at("gamma").get<std::vector<double>>();
      if (g.size() != 4) throw ValidationError("gamma must have exactly four weights");
      std::copy(g.begin(), g.end(), p.gamma.begin());
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed project document: ") + e.what());
  }
}

std::vector<WorkerIndex> TeamConfig::team() const {
  std::vector<WorkerIndex> out;
  out.reserve(assignment.size());
  for (const auto& a : assignment) out.push_back(a.worker);
  std::sort(out.begin(), out.end());
  return out;
}

std::string config_violation(const TeamConfig& config, const ProjectSpec& project, int n_workers) {
  const auto& as = config.assignment;
  if (config.leader < 0 || config.leader >= n_workers) return "leader index out of range";
  if (static_cast<int>(as.size()) != project.team_size())
    return "assignment covers " + std::to_string(as.size()) + " skills, project requires " +
           std::to_string(project.team_size());
  bool leader_in_team = false;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (project.position_of(as[i].skill) < 0)
      return "skill " + std::to_string(as[i].skill) + " is not a required skill";
    if (as[i].worker < 0 || as[i].worker >= n_workers) return "assigned worker index out of range";
    for (std::size_t j = 0; j < i; ++j) {
      if (as[j].skill == as[i].skill)
        return "skill " + std::to_string(as[i].skill) + " is covered more than once";
      if (as[j].worker == as[i].worker)
        return "worker " + std::to_string(as[i].worker) + " provides more than one skill";
    }
    leader_in_team = leader_in_team || as[i].worker == config.leader;
  }
  if (!leader_in_team) return "leader is not a member of the team";
  return {};
}

void validate_perception(const PerceptionModel& model) {
  if (!(model.sigma0 >= 0.0)) throw ParameterError("sigma0 must be non-negative");
  if (!(model.u_max > 0.0 && model.u_max <= 1.0)) throw ParameterError("u_max must lie in (0, 1]");
}

double combine(const std::array<double, 4>& gamma, double skill, double uncertainty, double cost, double social) {
  return gamma[0] * skill - gamma[1] * uncertainty - gamma[2] * cost + gamma[3] * social;
}

double uncertainty(const Instance& instance, WorkerIndex leader, WorkerIndex worker, const PerceptionModel& model) {
  if (leader < 0 || leader >= instance.n_workers || worker < 0 || worker >= instance.n_workers)
    throw ValidationError("worker index out of range");
  // sigma0 = 0 is a noiseless leader, even towards unreachable workers.
  if (model.sigma0 == 0.0) return 0.0;
  const int d = instance.hops(leader, worker);
  if (d == kUnreachable) return model.u_max;
  return std::min(model.u_max, model.sigma0 * model.sigma0 * static_cast<double>(d));
}

PerceivedSkills perceived_skills(const Instance& instance, WorkerIndex leader, const ProjectSpec& project,
                                 const PerceptionModel& model) {
  PerceivedSkills out{leader, MatrixXd(instance.n_workers, project.team_size())};
  for (int w = 0; w < instance.n_workers; ++w) {
    const double sd = std::sqrt(uncertainty(instance, leader, w, model));
    for (int c = 0; c < project.team_size(); ++c) {
      const int skill = project.required_skills[static_cast<std::size_t>(c)];
      double value = instance.skills(w, skill);
      if (sd > 0.0) {
        const double eps = sd * counter_normal(model.seed, {std::uint64_t(leader), std::uint64_t(w), std::uint64_t(skill)});
        value = std::clamp(value + eps, 0.0, 1.0);
      }
      out.values(w, c) = value;
    }
  }
  return out;
}

PerceivedSkills true_skills(const Instance& instance, WorkerIndex leader, const ProjectSpec& project) {
  PerceivedSkills out{leader, MatrixXd(instance.n_workers, project.team_size())};
  for (int c = 0; c < project.team_size(); ++c)
    out.values.col(c) = instance.skills.col(project.required_skills[static_cast<std::size_t>(c)]);
  return out;
}

EfficiencyBreakdown team_efficiency(const Instance& instance, const ProjectSpec& project, const TeamConfig& config,
                                    const PerceivedSkills& perceived, const PerceptionModel& model) {
  if (auto why = config_violation(config, project, instance.n_workers); !why.empty())
    throw ValidationError("invalid team configuration: " + why);
  if (perceived.leader != config.leader)
    throw ValidationError("perceived skills belong to leader " + std::to_string(perceived.leader) +
                          ", configuration leader is " + std::to_string(config.leader));

  const auto& as = config.assignment;
  const double size = static_cast<double>(as.size());
  double skill = 0.0, unc = 0.0, cost = 0.0, social = 0.0;
  for (const auto& a : as) {
    skill += perceived.values(a.worker, project.position_of(a.skill));
    unc += uncertainty(instance, config.leader, a.worker, model);
    cost += instance.costs(a.worker, a.skill);
  }
  for (const auto& a : as)
    for (const auto& b : as)
      if (a.worker != b.worker) social += instance.relationship(a.worker, b.worker);

  EfficiencyBreakdown out;
  out.skill_term = skill / size;
  out.uncertainty_term = unc / size;
  out.cost_term = cost / size;
  out.social_term = as.size() > 1 ? social / (size * (size - 1.0)) : 0.0;
  out.total = combine(project.gamma, out.skill_term, out.uncertainty_term, out.cost_term, out.social_term);
  return out;
}

TeamEvaluator::TeamEvaluator(const Instance& instance, ProjectSpec project, PerceptionModel model)
    : instance_(&instance), project_(std::move(project)), model_(model) {
  validate_project(project_, instance.n_workers, instance.n_skills);
  validate_perception(model_);
  perceived_.reserve(static_cast<std::size_t>(instance.n_workers));
  for (int leader = 0; leader < instance.n_workers; ++leader)
    perceived_.push_back(perceived_skills(instance, leader, project_, model_));
}

EfficiencyBreakdown TeamEvaluator::evaluate(const TeamConfig& config) const {
  if (config.leader < 0 || config.leader >= instance_->n_workers)
    throw ValidationError("invalid team configuration: leader index out of range");
  return team_efficiency(*instance_, project_, config, perceived(config.leader), model_);
}

EfficiencyBreakdown TeamEvaluator::evaluate_true(const TeamConfig& config) const {
  if (config.leader < 0 || config.leader >= instance_->n_workers)
    throw ValidationError("invalid team configuration: leader index out of range");
  return team_efficiency(*instance_, project_, config, true_skills(*instance_, config.leader, project_), model_);
}

}  // namespace crowdteam
