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

#include "doctest.h"
#include "test_util.hpp"

#include <filesystem>

using namespace crowdteam;
using crowdteam::testing::path_graph;
using crowdteam::testing::random_adjacency;

namespace {

// Floyd-Warshall over the adjacency, independent of the BFS implementation.
MatrixXi floyd_warshall(const MatrixXb& adj) {
  const int n = static_cast<int>(adj.rows());
  const int inf = 1 << 20;
  MatrixXi d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = i == j ? 0 : (adj(i, j) ? 1 : inf);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d.unaryExpr([inf](int x) { return x >= inf ? kUnreachable : x; });
}

bool has_error_containing(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("hop matrix on small graphs") {
  SUBCASE("path 0-1-2") {
    const MatrixXi d = shortest_hop_matrix(path_graph(3));
    CHECK(d(0, 1) == 1);
    CHECK(d(0, 2) == 2);
    CHECK(d(2, 0) == 2);
    CHECK(d(1, 1) == 0);
  }
  SUBCASE("isolated node is unreachable") {
    MatrixXb adj = MatrixXb::Constant(4, 4, false);
    adj.topLeftCorner(3, 3) = path_graph(3);
    const MatrixXi d = shortest_hop_matrix(adj);
    CHECK(d(0, 3) == kUnreachable);
    CHECK(d(3, 0) == kUnreachable);
    CHECK(d(3, 3) == 0);
  }
  SUBCASE("complete graph") {
    MatrixXb adj = MatrixXb::Constant(3, 3, true);
    adj.diagonal().setConstant(false);
    const MatrixXi d = shortest_hop_matrix(adj);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(d(i, j) == (i == j ? 0 : 1));
  }
  SUBCASE("asymmetric adjacency is rejected") {
    MatrixXb adj = MatrixXb::Constant(3, 3, false);
    adj(0, 1) = true;
    CHECK_THROWS_AS(shortest_hop_matrix(adj), ValidationError);
  }
  SUBCASE("self loop is rejected") {
    MatrixXb adj = MatrixXb::Constant(2, 2, false);
    adj(1, 1) = true;
    CHECK_THROWS_AS(shortest_hop_matrix(adj), ValidationError);
  }
}

TEST_CASE("BFS distances equal Floyd-Warshall for N <= 8") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const MatrixXb adj = random_adjacency(n, rng.uniform01(), rng);
    REQUIRE(shortest_hop_matrix(adj) == floyd_warshall(adj));
  }
}

TEST_CASE("relationship values") {
  MatrixXi hops(2, 2);
  hops << 0, 1, 1, 0;
  CHECK(relationship_matrix(hops)(0, 1) == 1.0);
  hops << 0, kUnreachable, kUnreachable, 0;
  CHECK(relationship_matrix(hops)(0, 1) == 0.0);
  CHECK(relationship_matrix(hops)(0, 0) == 1.0);

  const MatrixXd r = relationship_matrix(shortest_hop_matrix(path_graph(5)));
  CHECK(r(0, 2) == 0.5);
  for (int j = 1; j + 1 < 5; ++j) CHECK(r(0, j) > r(0, j + 1));
}

TEST_CASE("relationship laws on random graphs") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    MatrixXb adj = random_adjacency(n, 0.35, rng);
    const MatrixXi d = shortest_hop_matrix(adj);
    const MatrixXd r = relationship_matrix(d);

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        CHECK((r(i, j) == 1.0) == (d(i, j) == 1));
        CHECK((r(i, j) == 0.0) == (d(i, j) == kUnreachable));
        for (int k = 0; k < n; ++k)
          if (k != i && d(i, j) != kUnreachable && d(i, k) != kUnreachable && d(i, j) < d(i, k))
            CHECK(r(i, j) > r(i, k));
      }

    // Adding any missing edge never lowers a relationship value.
    const int a = static_cast<int>(rng.below(std::uint64_t(n)));
    const int b = static_cast<int>(rng.below(std::uint64_t(n)));
    if (a == b || adj(a, b)) continue;
    adj(a, b) = adj(b, a) = true;
    const MatrixXd grown = relationship_matrix(shortest_hop_matrix(adj));
    CHECK((grown.array() >= r.array()).all());
  }
}

TEST_CASE("generated instances") {
  SUBCASE("determinism") {
    const GenParams p{14, 5, 0.3, 42};
    CHECK(identical(generate_instance(p), generate_instance(p)));
    CHECK_FALSE(identical(generate_instance(p), generate_instance({14, 5, 0.3, 43})));
  }
  SUBCASE("p = 0 gives no relationships") {
    const Instance inst = generate_instance({6, 3, 0.0, 1});
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (i != j) CHECK(inst.relationship(i, j) == 0.0);
  }
  SUBCASE("p = 1 gives a complete graph") {
    const Instance inst = generate_instance({6, 3, 1.0, 1});
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (i != j) CHECK(inst.relationship(i, j) == 1.0);
  }
  SUBCASE("stored relationship equals recomputation") {
    for (Seed s = 0; s < 200; ++s) {
      const Instance inst = generate_instance({9, 4, 0.25, s});
      REQUIRE(validate_instance(inst).empty());
      CHECK(relationship_matrix(shortest_hop_matrix(inst.adjacency)) == inst.relationship);
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(generate_instance({0, 3, 0.3, 1}), ParameterError);
    CHECK_THROWS_AS(generate_instance({3, 3, 1.5, 1}), ParameterError);
  }
}

TEST_CASE("validate_instance reports every violation") {
  const Instance good = generate_instance({5, 3, 0.5, 9});
  CHECK(validate_instance(good).empty());

  Instance bad = good;
  bad.skills(0, 0) = 1.2;
  bad.costs(1, 2) = -0.1;
  auto errors = validate_instance(bad);
  CHECK(errors.size() == 2);
  CHECK(has_error_containing(errors, "skills(0,0)"));
  CHECK(has_error_containing(errors, "costs(1,2)"));

  bad = good;
  bad.relationship(0, 1) = 0.3;
  errors = validate_instance(bad);
  CHECK(has_error_containing(errors, "relationship is not symmetric"));

  bad = good;
  bad.adjacency(0, 4) = !bad.adjacency(0, 4);
  CHECK(has_error_containing(validate_instance(bad), "adjacency is not symmetric"));

  bad = good;
  bad.hops(2, 3) = bad.hops(3, 2) = 7;
  CHECK(has_error_containing(validate_instance(bad), "hops(2,3)"));
}

TEST_CASE("instance JSON round trip") {
  for (Seed s = 0; s < 20; ++s) {
    const Instance inst = generate_instance({7, 4, 0.3, s});
    const Instance back = instance_from_json(nlohmann::json::parse(instance_to_json(inst).dump()));
    REQUIRE(identical(inst, back));
  }
  const auto path = std::filesystem::temp_directory_path() / "crowdteam_model_roundtrip.json";
  const Instance inst = generate_instance({14, 5, 0.3, 7});
  save_instance(inst, path);
  CHECK(identical(load_instance(path), inst));
  std::filesystem::remove(path);
}

TEST_CASE("instance JSON errors") {
  auto doc = instance_to_json(generate_instance({3, 2, 0.5, 1}));
  SUBCASE("cost outside [0, 1]") {
    doc["costs"][0][0] = 3.0;
    CHECK_THROWS_AS(instance_from_json(doc), ValidationError);
  }
  SUBCASE("edge out of range") {
    doc["edges"].push_back({0, 9});
    CHECK_THROWS_AS(instance_from_json(doc), ValidationError);
  }
  SUBCASE("missing key") {
    doc.erase("skills");
    CHECK_THROWS_AS(instance_from_json(doc), ValidationError);
  }
  SUBCASE("ragged rows") {
    doc["skills"][1] = {0.5};
    CHECK_THROWS_AS(instance_from_json(doc), ValidationError);
  }
}
