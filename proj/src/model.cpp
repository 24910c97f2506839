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

#include "crowdteam/model.hpp"

#include "crowdteam/random.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace crowdteam {

namespace {

template <typename A, typename B>
bool same_matrix(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

std::string cell(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

std::vector<std::pair<int, int>> Instance::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < adjacency.rows(); ++i)
    for (int j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j)) out.emplace_back(i, j);
  return out;
}

bool identical(const Instance& a, const Instance& b) {
  return a.n_workers == b.n_workers && a.n_skills == b.n_skills && same_matrix(a.skills, b.skills) &&
         same_matrix(a.costs, b.costs) && same_matrix(a.adjacency, b.adjacency) &&
         same_matrix(a.hops, b.hops) && same_matrix(a.relationship, b.relationship);
}

MatrixXi shortest_hop_matrix(const MatrixXb& adjacency) {
  const auto n = adjacency.rows();
  if (adjacency.cols() != n) throw ValidationError("adjacency matrix is not square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency(i, i)) throw ValidationError("adjacency has a self loop at worker " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (adjacency(i, j) != adjacency(j, i))
        throw ValidationError("adjacency is not symmetric at " + cell(int(i), int(j)));
  }

  MatrixXi hops = MatrixXi::Constant(n, n, kUnreachable);
  std::deque<Eigen::Index> frontier;
  for (Eigen::Index source = 0; source < n; ++source) {
    hops(source, source) = 0;
    frontier.assign(1, source);
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop_front();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (adjacency(u, v) && hops(source, v) == kUnreachable) {
          hops(source, v) = hops(source, u) + 1;
          frontier.push_back(v);
        }
      }
    }
  }
  return hops;
}

MatrixXd relationship_matrix(const MatrixXi& hops) {
  return hops.unaryExpr([](int d) {
    if (d == kUnreachable) return 0.0;
    if (d == 0) return 1.0;
    return 1.0 / static_cast<double>(d);
  });
}

Instance make_instance(MatrixXd skills, MatrixXd costs, MatrixXb adjacency) {
  Instance inst;
  inst.n_workers = static_cast<int>(skills.rows());
  inst.n_skills = static_cast<int>(skills.cols());
  if (costs.rows() != skills.rows() || costs.cols() != skills.cols())
    throw ValidationError("cost matrix shape differs from skill matrix shape");
  if (adjacency.rows() != skills.rows())
    throw ValidationError("adjacency size differs from worker count");
  inst.hops = shortest_hop_matrix(adjacency);
  inst.relationship = relationship_matrix(inst.hops);
  inst.skills = std::move(skills);
  inst.costs = std::move(costs);
  inst.adjacency = std::move(adjacency);
  return inst;
}

MatrixXb adjacency_from_edges(int n_workers, const std::vector<std::pair<int, int>>& edges) {
  MatrixXb adj = MatrixXb::Constant(n_workers, n_workers, false);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_workers || j >= n_workers)
      throw ValidationError("edge " + cell(i, j) + " references a worker outside [0, " +
                            std::to_string(n_workers) + ")");
    if (i == j) throw ValidationError("edge " + cell(i, j) + " is a self loop");
    adj(i, j) = adj(j, i) = true;
  }
  return adj;
}

Instance generate_instance(const GenParams& params) {
  if (params.n_workers < 1 || params.n_skills < 1)
    throw ParameterError("worker and skill counts must be at least 1");
  if (!(params.edge_probability >= 0.0 && params.edge_probability <= 1.0))
    throw ParameterError("edge probability must lie in [0, 1]");

  const int n = params.n_workers;
  const int m = params.n_skills;
  SplitMix64 rng(hash_keys(params.seed, {0x696E7374ULL}));

  MatrixXd skills(n, m);
  MatrixXd costs(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) skills(i, j) = rng.uniform01();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) costs(i, j) = rng.uniform01();

  MatrixXb adj = MatrixXb::Constant(n, n, false);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < params.edge_probability) adj(i, j) = adj(j, i) = true;

  return make_instance(std::move(skills), std::move(costs), std::move(adj));
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> errors;
  const int n = inst.n_workers;
  const int m = inst.n_skills;
  if (n < 1) errors.push_back("n_workers must be at least 1");
  if (m < 1) errors.push_back("n_skills must be at least 1");

  auto check_shape = [&](const char* name, Eigen::Index rows, Eigen::Index cols, int er, int ec) {
    if (rows != er || cols != ec) {
      errors.push_back(std::string(name) + " has shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                       ", expected " + std::to_string(er) + "x" + std::to_string(ec));
      return false;
    }
    return true;
  };

  auto check_range = [&](const char* name, const MatrixXd& x) {
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j)
        if (!(x(i, j) >= 0.0 && x(i, j) <= 1.0))
          errors.push_back(std::string(name) + cell(i, j) + " = " + std::to_string(x(i, j)) +
                           " is outside [0, 1]");
  };

  if (check_shape("skills", inst.skills.rows(), inst.skills.cols(), n, m)) check_range("skills", inst.skills);
  if (check_shape("costs", inst.costs.rows(), inst.costs.cols(), n, m)) check_range("costs", inst.costs);

  const bool adj_ok = check_shape("adjacency", inst.adjacency.rows(), inst.adjacency.cols(), n, n);
  const bool hops_ok = check_shape("hops", inst.hops.rows(), inst.hops.cols(), n, n);
  const bool rel_ok = check_shape("relationship", inst.relationship.rows(), inst.relationship.cols(), n, n);

  bool graph_ok = adj_ok;
  if (adj_ok) {
    for (int i = 0; i < n; ++i) {
      if (inst.adjacency(i, i)) {
        errors.push_back("adjacency" + cell(i, i) + " is a self loop");
        graph_ok = false;
      }
      for (int j = i + 1; j < n; ++j)
        if (inst.adjacency(i, j) != inst.adjacency(j, i)) {
          errors.push_back("adjacency is not symmetric at " + cell(i, j));
          graph_ok = false;
        }
    }
  }

  if (hops_ok) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (inst.hops(i, j) != inst.hops(j, i)) errors.push_back("hops is not symmetric at " + cell(i, j));
  }
  if (rel_ok) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (inst.relationship(i, j) != inst.relationship(j, i))
          errors.push_back("relationship is not symmetric at " + cell(i, j));
  }

  if (graph_ok && hops_ok) {
    const MatrixXi expected = shortest_hop_matrix(inst.adjacency);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (inst.hops(i, j) != expected(i, j))
          errors.push_back("hops" + cell(i, j) + " = " + std::to_string(inst.hops(i, j)) +
                           " is inconsistent with the graph (expected " + std::to_string(expected(i, j)) + ")");
  }
  if (hops_ok && rel_ok) {
    const MatrixXd expected = relationship_matrix(inst.hops);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (inst.relationship(i, j) != expected(i, j))
          errors.push_back("relationship" + cell(i, j) + " = " + std::to_string(inst.relationship(i, j)) +
                           " is inconsistent with hops (expected " + std::to_string(expected(i, j)) + ")");
  }
  return errors;
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json doc;
  doc["n_workers"] = inst.n_workers;
  doc["n_skills"] = inst.n_skills;
  auto rows = [](const MatrixXd& x) {
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < x.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
      out.push_back(std::move(row));
    }
    return out;
  };
  doc["skills"] = rows(inst.skills);
  doc["costs"] = rows(inst.costs);
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : inst.edges()) edges.push_back({i, j});
  doc["edges"] = std::move(edges);
  return doc;
}

Instance instance_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n_workers").get<int>();
    const int m = doc.at("n_skills").get<int>();
    if (n < 1 || m < 1) throw ValidationError("n_workers and n_skills must be at least 1");

    auto matrix = [&](const char* key) {
      const auto& rows = doc.at(key);
      if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw ValidationError(std::string(key) + " must have " + std::to_string(n) + " rows");
      MatrixXd x(n, m);
      for (int i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != m)
          throw ValidationError(std::string(key) + " row " + std::to_string(i) + " must have " +
                                std::to_string(m) + " entries");
        for (int j = 0; j < m; ++j) x(i, j) = row[static_cast<std::size_t>(j)].get<double>();
      }
      return x;
    };

    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("each edge must be a pair [i, j]");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }

    Instance inst = make_instance(matrix("skills"), matrix("costs"), adjacency_from_edges(n, edges));
    if (auto errors = validate_instance(inst); !errors.empty()) {
      std::string msg = "invalid instance:";
      for (const auto& e : errors) msg += "\n  " + e;
      throw ValidationError(msg);
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed instance document: ") + e.what());
  }
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << instance_to_json(instance).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

}  // namespace crowdteam
