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

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace crowdteam {

using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;
using MatrixXb = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using MatrixXi = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

using WorkerIndex = int;
using SkillIndex = int;
using Seed = std::uint64_t;

// Hop-count sentinel for worker pairs in different components.
inline constexpr int kUnreachable = -1;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Input data that violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// |required skills| exceeds the worker count.
class InfeasibleProject : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tuning parameter (k, probability, count) outside its domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Configuration space too large to materialize.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace crowdteam
