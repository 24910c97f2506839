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

#include "crowdteam/types.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace crowdteam {

// Worker pool: true skills, per-skill costs and the social graph together with
// its derived hop and relationship matrices. Immutable once built.
struct Instance {
  int n_workers = 0;
  int n_skills = 0;
  MatrixXd skills;        // n_workers x n_skills, entries in [0, 1]
  MatrixXd costs;         // n_workers x n_skills, entries in [0, 1]
  MatrixXb adjacency;     // symmetric, false diagonal
  MatrixXi hops;          // shortest-path edge count or kUnreachable
  MatrixXd relationship;  // 1 / hops, 0 when unreachable, 1 on the diagonal

  // Undirected edge list (i < j), sorted.
  std::vector<std::pair<int, int>> edges() const;
};

// Exact equality of dimensions and every matrix entry.
bool identical(const Instance& a, const Instance& b);

struct GenParams {
  int n_workers = 14;
  int n_skills = 5;
  double edge_probability = 0.3;
  Seed seed = 0;
};

// Breadth-first search from every worker. Throws ValidationError on a
// non-square, asymmetric, or self-looped adjacency matrix.
MatrixXi shortest_hop_matrix(const MatrixXb& adjacency);

// R = 1/d for reachable pairs, 0 for unreachable, 1 on the diagonal.
MatrixXd relationship_matrix(const MatrixXi& hops);

// Assembles an instance and derives hops and relationship from the adjacency.
Instance make_instance(MatrixXd skills, MatrixXd costs, MatrixXb adjacency);

MatrixXb adjacency_from_edges(int n_workers, const std::vector<std::pair<int, int>>& edges);

// Uniform skills and costs, Erdos-Renyi G(n, p) graph. Bit-identical per seed.
Instance generate_instance(const GenParams& params);

// Every violated invariant as a readable message; empty when valid.
std::vector<std::string> validate_instance(const Instance& instance);

nlohmann::json instance_to_json(const Instance& instance);
// Throws ValidationError when the document is malformed or the instance is invalid.
Instance instance_from_json(const nlohmann::json& doc);

void save_instance(const Instance& instance, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

}  // namespace crowdteam
