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

#include "crowdteam/model.hpp"
#include "crowdteam/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace crowdteam {

struct ProjectSpec {
  std::vector<SkillIndex> required_skills;
  std::array<double, 4> gamma{0.25, 0.25, 0.25, 0.25};  // skill, uncertainty, cost, social

  int team_size() const { return static_cast<int>(required_skills.size()); }
  // Position of `skill` in required_skills, or -1.
  int position_of(SkillIndex skill) const;
};

// Throws ValidationError (bad indices, duplicates, negative weights) or
// InfeasibleProject (more required skills than workers).
void validate_project(const ProjectSpec& project, int n_workers, int n_skills);

nlohmann::json project_to_json(const ProjectSpec& project);
ProjectSpec project_from_json(const nlohmann::json& doc);

struct SkillAssignment {
  SkillIndex skill;
  WorkerIndex worker;

  friend bool operator==(const SkillAssignment&, const SkillAssignment&) = default;
  friend auto operator<=>(const SkillAssignment&, const SkillAssignment&) = default;
};

// A leader plus a bijection from required skills onto distinct workers. The
// team is the set of assigned workers and always contains the leader.
struct TeamConfig {
  WorkerIndex leader = 0;
  std::vector<SkillAssignment> assignment;

  std::vector<WorkerIndex> team() const;  // sorted
  friend bool operator==(const TeamConfig&, const TeamConfig&) = default;
};

// Empty string when valid, otherwise the first violated clause.
std::string config_violation(const TeamConfig& config, const ProjectSpec& project, int n_workers);

struct PerceptionModel {
  double sigma0 = 0.2;
  double u_max = 1.0;
  Seed seed = 0;
};

void validate_perception(const PerceptionModel& model);

// Skill estimates as seen by one leader: rows are workers, columns follow
// ProjectSpec::required_skills.
struct PerceivedSkills {
  WorkerIndex leader = 0;
  MatrixXd values;
};

struct EfficiencyBreakdown {
  double skill_term = 0.0;
  double uncertainty_term = 0.0;
  double cost_term = 0.0;
  double social_term = 0.0;
  double total = 0.0;
};

double combine(const std::array<double, 4>& gamma, double skill, double uncertainty, double cost, double social);

// Variance of the leader's skill estimate for `worker`: min(u_max, sigma0^2 * hops),
// u_max when unreachable, 0 for the leader itself. sigma0 = 0 gives 0 everywhere.
double uncertainty(const Instance& instance, WorkerIndex leader, WorkerIndex worker, const PerceptionModel& model);

// clamp(S + eps, 0, 1) with eps ~ N(0, U). The draw for (leader, worker, skill)
// depends only on model.seed, so results do not depend on evaluation order or
// on which other skills are required.
PerceivedSkills perceived_skills(const Instance& instance, WorkerIndex leader, const ProjectSpec& project,
                                 const PerceptionModel& model);

// The leader's estimates replaced by true skills.
PerceivedSkills true_skills(const Instance& instance, WorkerIndex leader, const ProjectSpec& project);

// Normalized four-term team efficiency. Throws ValidationError naming the
// violated clause when the config is not a valid team for the project or the
// perceived matrix belongs to another leader.
EfficiencyBreakdown team_efficiency(const Instance& instance, const ProjectSpec& project, const TeamConfig& config,
                                    const PerceivedSkills& perceived, const PerceptionModel& model);

// Caches one perceived matrix per candidate leader so every solver scores
// configurations against the same noise realization.
class TeamEvaluator {
 public:
  TeamEvaluator(const Instance& instance, ProjectSpec project, PerceptionModel model);

  const Instance& instance() const { return *instance_; }
  const ProjectSpec& project() const { return project_; }
  const PerceptionModel& model() const { return model_; }
  const PerceivedSkills& perceived(WorkerIndex leader) const { return perceived_[static_cast<std::size_t>(leader)]; }

  EfficiencyBreakdown evaluate(const TeamConfig& config) const;
  // Same config scored with true skills in the skill term.
  EfficiencyBreakdown evaluate_true(const TeamConfig& config) const;

 private:
  const Instance* instance_;
  ProjectSpec project_;
  PerceptionModel model_;
  std::vector<PerceivedSkills> perceived_;
};

}  // namespace crowdteam
